#include "tmtrace/trace.hpp"

#include <cassert>
#include <optional>
#include <stdexcept>

#ifdef TMTRACE_HAVE_OPENMP
#include <omp.h>
#endif

namespace tmtrace {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Min:
      return "min";
    case SpaceKind::New:
      return "new";
    case SpaceKind::Full:
      return "full";
  }
  return "?";
}

SpaceKind parse_space_kind(const std::string& s) {
  if (s == "min") return SpaceKind::Min;
  if (s == "new") return SpaceKind::New;
  if (s == "full") return SpaceKind::Full;
  throw std::invalid_argument("space kind must be one of min, new, full (got '" + s + "')");
}

void SpaceSpec::validate() const {
  if (N < 1) throw std::invalid_argument("level must be positive");
  if (k < 2) throw std::invalid_argument("weight must be at least 2");
  if (chi.modulus() != N)
    throw std::invalid_argument("character " + chi.label() + " does not have modulus " + std::to_string(N));
}

Integer weight_factor(int k, i64 t, i64 n) {
  if (static_cast<__int128>(t) * t >= static_cast<__int128>(4) * n)
    throw std::domain_error("weight_factor: need t^2 < 4n");
  if (k < 2) throw std::domain_error("weight_factor: need k >= 2");
  Integer prev = 1, cur = t;  // G_0, G_1
  if (k == 2) return prev;
  const Integer T = t, Nn = n;
  for (int j = 2; j <= k - 2; ++j) {
    Integer next = T * cur - Nn * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

EllipticTermContext EllipticTermContext::make(i64 t, i64 n) {
  EllipticTermContext ctx;
  ctx.t = t;
  ctx.n = n;
  ctx.split = split_discriminant(t * t - 4 * n);
  return ctx;
}

Integer local_factor_unit(i64 p, const EllipticTermContext& ctx) {
  const int vl = valuation(p, ctx.split.ell);
  const Integer pv = Integer(ipow(p, vl));
  const int kd = kronecker(ctx.split.d, p);
  return pv + (1 - kd) * (pv - 1) / (p - 1);
}

bool trace_gates_pass(i64 N, const DirichletCharacter& chi, int k, i64 n) {
  const i64 a = N / chi.conductor();
  // gcd(x^2, N) computed modulo N to stay in range
  const i64 g = gcd(gcd(N, mulmod(a, a, N)), mulmod(n, n, N));
  if (!is_squarefree(g)) return false;
  return chi.parity() == (k % 2 == 0 ? 1 : -1);
}

namespace {

Rational rational_pow(i64 p, int e) {
  if (e >= 0) return Rational(Integer(ipow(p, e)));
  return Rational(Integer(1), Integer(ipow(p, -e)));
}

// One prime of the level with its local character, evaluated into Q(zeta_m).
struct LocalEval {
  i64 p = 2;
  int e = 0;
  int s = 0;
  i64 pe = 1;
  LocalCharacter prim;  // conductor-level component
  int m = 1;

  LocalEval(const LocalCharacter& chi_p, int ambient) : p(chi_p.p), e(chi_p.e), pe(chi_p.modulus()), m(ambient) {
    s = chi_p.conductor_exponent();
    prim = chi_p.at_exponent(s);
  }

  // chi_p(x) through the primitive character; trivial components give 1 everywhere
  std::optional<i64> eval(i64 x) const {
    if (s == 0) return 0;
    const auto v = prim.raw_exponent(x);
    if (!v) return std::nullopt;
    return static_cast<i64>(static_cast<__int128>(*v) * m / prim.value_group_order());
  }

  // chi(t/2): odd p uses the inverse of 2; p = 2 needs t even
  std::optional<i64> eval_half(i64 t) const {
    if (s == 0) return 0;
    if (p == 2) {
      if (t % 2 != 0) return std::nullopt;
      return eval(t / 2);
    }
    return eval(mulmod(t, invmod(2, pe), pe));
  }

  RootSum single(const std::optional<i64>& exponent, const Rational& coef) const {
    if (!exponent || sgn(coef) == 0) return {};
    return RootSum::root(*exponent, coef);
  }

  // chi((t+u)/2) + chi((t-u)/2) with u = ell sqrt(d); empty when d is not a square
  RootSum pm_pair(const EllipticTermContext& ctx, const Rational& coef, const TraceOptions& opts) const {
    const i64 ring = p == 2 ? pe * 4 : pe;
    i64 root;
    try {
      root = sqrt_mod_prime_power(ctx.split.d, p, e);
    } catch (const std::domain_error&) {
      return {};
    }
    i64 u = mulmod(mod(ctx.split.ell, ring), root, ring);
    if (opts.negate_u) u = mod(-u, ring);
    RootSum out;
    for (int sign : {1, -1}) {
      const i64 num = ctx.t + sign * u;
      i64 x;
      if (p == 2) {
        assert(mod(num, 2) == 0);
        x = num / 2;
      } else {
        x = mulmod(num, invmod(2, pe), pe);
      }
      const auto v = eval(x);
      if (v) out.add(*v, coef);
    }
    return out;
  }

  RootSum factor(const EllipticTermContext& ctx, const TraceOptions& opts) const {
    const i64 t = ctx.t, n = ctx.n;
    const i64 d = ctx.split.d;
    const int gamma = ctx.gamma(p);
    const int kd = kronecker(d, p);
    const int vl = valuation(p, ctx.split.ell);

    if (n % p == 0) {
      if (gamma > s && s == 0) return RootSum::constant(Rational(kd - 1));
      if (s == e && gamma == 0) return pm_pair(ctx, Rational(1), opts);
      return {};
    }

    if (p != 2) {
      if (s < e && gamma >= e - 2) {
        const bool gate = e == 1 || kronecker(n, p) == 1;
        if (!gate || kd == 1) return {};
        Rational inner = (e == 2 ? Rational(1 - 2 * s) : Rational(0));
        if (e % 2 == 0 && gamma == e - 2) inner += 1;
        if (gamma >= e - 1) inner -= p;
        const Rational coef = Rational(1 - kd) * rational_pow(p, e - 3) / Rational(gcd(2, e)) *
                              (Rational(e > 2 ? 1 : 0) + Rational(p) * inner);
        return single(eval_half(t), coef);
      }
      if (s == e && gamma >= 2 * e - 1) {
        const Rational pv = rational_pow(p, vl);
        const Rational coef = 2 * pv + Rational(1 - kd) * (2 * pv - rational_pow(p, e) - rational_pow(p, e - 1)) /
                                           Rational(p - 1);
        return single(eval_half(t), coef);
      }
      if (s == e && gamma < 2 * e - 1 && kd == 1) return pm_pair(ctx, rational_pow(p, vl), opts);
      return {};
    }

    if (s < e) {
      const Rational lead = Rational(1 - kd) * Rational(e >= 3 ? ipow(2, e - 3) : 1);
      if (sgn(lead) == 0) return {};
      const int sign_d = (d % 2 != 0) ? -1 : 1;  // (-1)^d
      if (gamma > e && e >= 3) return single(eval_half(t), lead * -3);
      if (gamma == e && s == e / 2 && e >= 4) return single(eval_half(t), lead * ((e % 2 == 0 ? 1 : -1) + 2));
      if (gamma == e - 1 && e % 2 == 1 && s == e / 2 && e >= 4) return single(eval_half(t), lead * (1 - 2 * sign_d));
      // carries chi(t/2) as well; only visible once s = 2 < floor(e/2), i.e. 128 | N
      if ((gamma == e || gamma == e - 1) && s < e / 2 && e >= 3) return single(eval_half(t), lead * (2 * sign_d - 1));
      if (e == 1 || e == 2) {
        const Rational v = (e == 2 && gamma == 0) ? Rational(1, 2) : Rational(-1);
        return RootSum::constant(lead * v);
      }
      return {};
    }

    if (gamma >= 2 * e) {
      const Rational sign = gamma == 2 * e ? Rational(-1) : Rational(1);
      const Rational body = Rational(ipow(2, gamma / 2 + 1) - 3 * ipow(2, e - 1)) * (1 - kd) +
                            Rational(d % 2 != 0 ? ipow(2, vl + 1) : 0);
      return single(eval_half(t), sign * body);
    }
    if (gamma < 2 * e - 1 && kd == 1) return pm_pair(ctx, rational_pow(2, vl), opts);
    return {};
  }
};

class MinKernel {
 public:
  MinKernel(const SpaceSpec& spec, const TraceOptions& opts) : spec_(spec), opts_(opts) {
    spec.validate();
    if (!is_twist_minimal(spec.chi))
      throw std::invalid_argument("character " + spec.chi.label() + " is not twist-minimal");
    m_ = spec.value_order();
    for (const auto& f : factorize(spec.N).factors) locals_.emplace_back(spec.chi.local_component(f.p), m_);
    chi_cond_ = spec.chi.primitive_inducing();
  }

  CycloNumber run(i64 n, bool parallel) const {
    if (n < 1) throw std::invalid_argument("Hecke index must be positive");
    if (!trace_gates_pass(spec_.N, spec_.chi, spec_.k, n)) return CycloNumber::zero(m_);
    CycloAccumulator acc(m_);
    add_c1(acc, n);
    add_c3(acc, n);
    add_c4(acc, n);
    CycloNumber total = acc.result();
    total -= elliptic(n, parallel);
    return total;
  }

 private:
  void add_c1(CycloAccumulator& acc, i64 n) const {
    const auto [r, square] = integer_sqrt(n);
    if (!square) return;
    const auto ex = chi_cond_.exponent_in(r, m_);
    if (!ex) return;
    Rational c = Rational(Integer(spec_.k - 1), Integer(12));
    Integer rk;
    mpz_pow_ui(rk.get_mpz_t(), Integer(r).get_mpz_t(), spec_.k - 2);
    c *= Rational(rk);
    for (const auto& lc : locals_) {
      const i64 p = lc.p;
      const int e = lc.e, s = lc.s;
      if (s == e) {
        c *= Rational(ipow(p, e) + ipow(p, e - 1));
      } else {
        const i64 phi = euler_phi(e >= 2 ? ipow(p, e - 2) : 1);
        Rational f = Rational(phi * (p - 1));
        if (e % 2 == 0 && p > 2) f /= 2;
        f *= Rational(1 + (e > 1 ? p : 0) + (e == 2 ? 2 * s - 2 : 0));
        c *= f;
      }
    }
    acc.add_root(*ex, c);
  }

  void add_c3(CycloAccumulator& acc, i64 n) const {
    for (i64 d : divisors(n)) {
      if (static_cast<__int128>(d) * d > n) break;
      const i64 q = n / d;
      RootSum prod = RootSum::constant(Rational(1));
      bool zero = false;
      for (const auto& lc : locals_) {
        const int gamma = valuation(lc.p, q - d);
        const int e = lc.e, s = lc.s;
        RootSum pair;
        if (const auto v = lc.eval(d)) pair.add(*v, Rational(1));
        if (const auto v = lc.eval(q)) pair.add(*v, Rational(1));
        if (lc.p == 2 && e % 2 == 0 && e > 2 && n % 2 != 0 && gamma >= e / 2 - 1 && e / 2 - 1 >= s) {
          Rational c = Rational(ipow(2, e / 2)) / 8;
          if (gamma == e / 2 - 1) c = -c;
          prod = prod.multiplied(pair.scaled(c), m_);
        } else if (s == e) {
          prod = prod.multiplied(pair, m_);
        } else {
          zero = true;
        }
        if (zero || prod.empty()) break;
      }
      if (zero || prod.empty()) continue;
      Integer w;
      mpz_pow_ui(w.get_mpz_t(), Integer(d).get_mpz_t(), spec_.k - 1);
      Rational scale(w);
      if (static_cast<__int128>(d) * d == n) scale /= 2;
      // C3 enters with a minus sign
      prod.accumulate_into(acc, -scale);
    }
  }

  void add_c4(CycloAccumulator& acc, i64 n) const {
    if (spec_.k != 2 || !spec_.chi.is_trivial()) return;
    i64 prod = mobius(spec_.N);
    if (prod == 0) return;
    for (const auto& f : factorize(n).factors)
      if (spec_.N % f.p != 0) prod *= sigma(ipow(f.p, f.e));
    acc.add_root(0, Rational(prod));
  }

  void add_elliptic_term(CycloAccumulator& acc, i64 t, i64 n) const {
    const auto ctx = EllipticTermContext::make(t, n);
    RootSum prod = RootSum::constant(Rational(1));
    for (const auto& lc : locals_) {
      prod = prod.multiplied(lc.factor(ctx, opts_), m_);
      if (prod.empty()) return;
    }
    Integer unit = 1;
    for (i64 p : prime_divisors(ctx.split.ell))
      if (spec_.N % p != 0) unit *= local_factor_unit(p, ctx);
    const ClassData cd = class_data(ctx.split.d);
    Rational scale = Rational(weight_factor(spec_.k, t, n) * unit * cd.h) / cd.w;
    prod.accumulate_into(acc, scale);
  }

  CycloNumber elliptic(i64 n, bool parallel) const {
    const i64 tmax = integer_sqrt(4 * n - 1).first;
    const i64 count = 2 * tmax + 1;
#ifdef TMTRACE_HAVE_OPENMP
    if (parallel && count > 1 && omp_get_max_threads() > 1 && !omp_in_parallel()) {
      const int threads = omp_get_max_threads();
      std::vector<CycloNumber> partial(threads, CycloNumber::zero(m_));
#pragma omp parallel num_threads(threads)
      {
        CycloAccumulator local(m_);
#pragma omp for schedule(static)
        for (i64 i = 0; i < count; ++i) add_elliptic_term(local, i - tmax, n);
        partial[omp_get_thread_num()] = local.result();
      }
      // fixed reduction order keeps the result independent of scheduling
      CycloNumber total = CycloNumber::zero(m_);
      for (const auto& x : partial) total += x;
      return total;
    }
#else
    (void)parallel;
#endif
    CycloAccumulator acc(m_);
    for (i64 i = 0; i < count; ++i) add_elliptic_term(acc, i - tmax, n);
    return acc.result();
  }

  SpaceSpec spec_;
  TraceOptions opts_;
  int m_ = 1;
  std::vector<LocalEval> locals_;
  DirichletCharacter chi_cond_;
};

}  // namespace

CycloNumber local_factor_min(const LocalCharacter& chi_p, const EllipticTermContext& ctx, const TraceOptions& opts) {
  if (!is_twist_minimal(chi_p)) throw std::invalid_argument("local_factor_min: local component is not twist-minimal");
  const int m = static_cast<int>(chi_p.order());
  return LocalEval(chi_p, m).factor(ctx, opts).to_number(m);
}

CycloNumber trace_min(const SpaceSpec& spec, i64 n, const TraceOptions& opts) {
  return MinKernel(spec, opts).run(n, true);
}

CycloNumber trace_min_serial(const SpaceSpec& spec, i64 n, const TraceOptions& opts) {
  return MinKernel(spec, opts).run(n, false);
}

std::vector<CycloNumber> trace_min_span(const SpaceSpec& spec, i64 first, i64 last, const TraceOptions& opts) {
  const MinKernel kernel(spec, opts);
  const i64 count = last >= first ? last - first + 1 : 0;
  std::vector<CycloNumber> out(count);
#ifdef TMTRACE_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (i64 i = 0; i < count; ++i) out[i] = kernel.run(first + i, false);
  return out;
}

std::vector<CycloNumber> trace_min_range(const SpaceSpec& spec, i64 nmax, const TraceOptions& opts) {
  return trace_min_span(spec, 1, nmax, opts);
}

}  // namespace tmtrace
