#include "tmtrace/oracle.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>

namespace tmtrace {

std::vector<i64> quadratic_roots_brute(i64 modulus, i64 t, i64 n) {
  std::vector<i64> out;
  const i64 tm = mod(t, modulus), nm = mod(n, modulus);
  for (i64 x = 0; x < modulus; ++x)
    if (mod(mulmod(x, x, modulus) - mulmod(tm, x, modulus) + nm, modulus) == 0) out.push_back(x);
  return out;
}

std::vector<i64> quadratic_roots_crt(i64 modulus, i64 t, i64 n) {
  std::vector<i64> acc{0};
  i64 m = 1;
  for (const auto& f : factorize(modulus).factors) {
    const i64 q = ipow(f.p, f.e);
    const auto local = quadratic_roots_brute(q, t, n);
    std::vector<i64> next;
    for (i64 a : acc)
      for (i64 b : local) next.push_back(crt(a, m, b, q).first);
    acc = std::move(next);
    m *= q;
  }
  if (modulus == 1) return {0};
  std::sort(acc.begin(), acc.end());
  return acc;
}

namespace {

using RootsKey = std::tuple<i64, i64, i64>;

const std::vector<i64>& cached_roots(i64 modulus, i64 t, i64 n) {
  static std::shared_mutex mutex;
  static std::map<RootsKey, std::vector<i64>> cache;
  const RootsKey key{modulus, mod(t, modulus), mod(n, modulus)};
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto roots = quadratic_roots_brute(modulus, t, n);
  std::unique_lock lock(mutex);
  return cache.emplace(key, std::move(roots)).first->second;
}

using MemoKey = std::tuple<i64, i64, int, i64>;

struct Memo {
  std::shared_mutex mutex;
  std::map<MemoKey, CycloNumber> values;
};

Memo& full_memo() {
  static Memo memo;
  return memo;
}

// psi(N) = N prod (1 + 1/p)
Rational index_psi(i64 N) {
  Rational r(N);
  for (i64 p : prime_divisors(N)) r *= Rational(p + 1) / p;
  return r;
}

Integer int_pow(i64 base, int e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), Integer(base).get_mpz_t(), e);
  return out;
}

CycloNumber compute_full(const SpaceSpec& spec, i64 n) {
  const i64 N = spec.N;
  const int k = spec.k;
  const DirichletCharacter& chi = spec.chi;
  const int m = spec.value_order();
  CycloAccumulator acc(m);
  if (chi.parity() != (k % 2 == 0 ? 1 : -1)) return CycloNumber::zero(m);

  const Rational psiN = index_psi(N);

  // A1
  if (const auto [r, square] = integer_sqrt(n); square) {
    if (const auto ex = chi.exponent_in(r, m))
      acc.add_root(*ex, Rational(int_pow(r, k - 2)) * Rational(k - 1) / 12 * psiN);
  }

  // A2 (subtracted)
  const i64 tmax = integer_sqrt(4 * n - 1).first;
  for (i64 t = -tmax; t <= tmax; ++t) {
    const auto split = split_discriminant(t * t - 4 * n);
    const ClassData cd = class_data(split.d);
    const Rational G(weight_factor(k, t, n));
    for (i64 f : divisors(split.ell)) {
      const i64 c = split.ell / f;
      Rational hw = Rational(cd.h) / cd.w * c;
      for (i64 p : prime_divisors(c)) hw *= Rational(p - kronecker(split.d, p)) / p;
      const i64 Nf = gcd(N, f);
      const Rational mu_scale = psiN / index_psi(N / Nf) / Nf;
      const Rational scale = -G * hw * mu_scale;
      for (i64 x : cached_roots(N * Nf, t, n))
        if (const auto ex = chi.exponent_in(x, m)) acc.add_root(*ex, scale);
    }
  }

  // A3 (subtracted)
  const i64 Nc = N / chi.conductor();
  for (i64 d : divisors(n)) {
    if (d * d > n) break;
    const i64 q = n / d;
    Rational w(int_pow(d, k - 1));
    if (d * d == n) w /= 2;
    const i64 allowed = gcd(Nc, q - d);
    for (i64 c : divisors(N)) {
      const i64 g = gcd(c, N / c);
      if (allowed % g != 0) continue;
      const auto [x1, l] = crt(mod(d, c), c, mod(q, N / c), N / c);
      if (l == 0) throw std::logic_error("A3: inconsistent congruences");
      if (const auto ex = chi.exponent_in(x1, m)) acc.add_root(*ex, -w * euler_phi(g));
    }
  }

  // A4, gated like C4
  if (k == 2 && chi.is_trivial()) {
    i64 s = 0;
    for (i64 t : divisors(n))
      if (gcd(n / t, N) == 1) s += t;
    acc.add_root(0, Rational(s));
  }
  return acc.result();
}

}  // namespace

CycloNumber trace_full(const SpaceSpec& spec, i64 n) {
  spec.validate();
  if (n < 1) throw std::invalid_argument("Hecke index must be positive");
  const MemoKey key{spec.N, spec.chi.conrey_index(), spec.k, n};
  auto& memo = full_memo();
  {
    std::shared_lock lock(memo.mutex);
    auto it = memo.values.find(key);
    if (it != memo.values.end()) return it->second;
  }
  CycloNumber v = compute_full(spec, n);
  std::unique_lock lock(memo.mutex);
  return memo.values.emplace(key, std::move(v)).first->second;
}

void clear_oracle_memo() {
  auto& memo = full_memo();
  std::unique_lock lock(memo.mutex);
  memo.values.clear();
}

CycloNumber trace_new(const SpaceSpec& spec, i64 n) {
  spec.validate();
  const int m = spec.value_order();
  const i64 N = spec.N;
  const DirichletCharacter& chi = spec.chi;
  const i64 a = N / chi.conductor();
  if (!is_squarefree(gcd(gcd(a * a, n * n), N))) return CycloNumber::zero(m);

  const DirichletCharacter chi_cond = chi.primitive_inducing();
  CycloAccumulator acc(m);
  for (i64 d : p_set(N, chi, n)) {
    const auto chid = chi_cond.exponent_in(d, m);
    if (!chid) continue;
    const Rational dk(int_pow(d, spec.k - 1));
    const i64 nd = n / (d * d);
    for (i64 M : divisors(N / d)) {
      if (M % chi.conductor() != 0) continue;
      const i64 b = beta(nd, N / (d * M));
      if (b == 0) continue;
      SpaceSpec sub{M, spec.k, chi.at_modulus(M), SpaceKind::Full};
      const CycloNumber v = trace_full(sub, nd);
      // v lives in Q(zeta_m) because chi and its restriction share their order
      const auto& c = v.coeffs();
      for (std::size_t j = 0; j < c.size(); ++j)
        if (sgn(c[j]) != 0) acc.add_root(static_cast<i64>(j) + *chid, c[j] * dk * b);
    }
  }
  return acc.result();
}

int sieved_order(const SpaceSpec& spec, const PairOptions& opts) {
  i64 A = spec.chi.order();
  for (const auto& pair : all_twist_pairs(spec.N, spec.chi, opts))
    A = lcm(A, lcm(pair.psi.order(), pair.twisted_chi.order()));
  return static_cast<int>(A);
}

CycloNumber trace_min_sieved(const SpaceSpec& spec, i64 n, const PairOptions& opts) {
  spec.validate();
  const auto pairs = all_twist_pairs(spec.N, spec.chi, opts);
  i64 A = spec.chi.order();
  for (const auto& pair : pairs) A = lcm(A, lcm(pair.psi.order(), pair.twisted_chi.order()));
  const int amb = static_cast<int>(A);
  CycloNumber total = CycloNumber::zero(amb);
  for (const auto& pair : pairs) {
    const auto psin = pair.psi.exponent_in(n, amb);
    if (!psin) continue;
    const i64 NoverM = spec.N / pair.M;
    Rational w(kprime_count(NoverM) % 2 == 0 ? 1 : -1);
    w /= pair.class_size;
    SpaceSpec sub{pair.M, spec.k, pair.twisted_chi, SpaceKind::New};
    const CycloNumber v = trace_new(sub, n).embed_into(amb);
    if (v.is_zero()) continue;
    total += (v * CycloNumber::root_of_unity(amb, -*psin)).scaled(w);
  }
  return total;
}

bool same_value(const CycloNumber& a, const CycloNumber& b) {
  const int m = static_cast<int>(lcm(a.order(), b.order()));
  return a.embed_into(m) == b.embed_into(m);
}

}  // namespace tmtrace
