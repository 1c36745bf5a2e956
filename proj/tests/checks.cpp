#include "checks.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "tmtrace/basis.hpp"
#include "tmtrace/decomp.hpp"
#include "tmtrace/oracle.hpp"
#include "tmtrace/quadratic.hpp"

namespace tmtrace::checks {

namespace {

// Records a failure; keeps the first few messages only.
void fail(Outcome& o, const std::string& msg) {
  if (o.pass) o.detail.clear();
  o.pass = false;
  if (std::count(o.detail.begin(), o.detail.end(), ';') < 3) o.detail += msg + "; ";
}

std::string where(const SpaceSpec& s, i64 n) {
  std::ostringstream out;
  out << "N=" << s.N << " k=" << s.k << " chi=" << s.chi.label() << " n=" << n;
  return out.str();
}

std::vector<DirichletCharacter> minimal_characters(i64 N) {
  CharacterFilter f;
  f.twist_minimal_only = true;
  return enumerate_characters(N, f);
}

int wanted_parity(int k) { return k % 2 == 0 ? 1 : -1; }

// (-4/p) and (-3/p) written out from the congruence classes
int chi_minus4(i64 p) { return p == 2 ? 0 : (p % 4 == 1 ? 1 : -1); }
int chi_minus3(i64 p) { return p == 3 ? 0 : (p % 3 == 1 ? 1 : -1); }

}  // namespace

i64 genus_dimension(i64 N) {
  const auto fac = factorize(N);
  i64 mu = N;
  for (const auto& f : fac.factors) mu = mu / f.p * (f.p + 1);
  i64 nu2 = N % 4 == 0 ? 0 : 1;
  i64 nu3 = N % 9 == 0 ? 0 : 1;
  for (const auto& f : fac.factors) {
    nu2 *= 1 + chi_minus4(f.p);
    nu3 *= 1 + chi_minus3(f.p);
  }
  i64 cusps = 0;
  for (i64 d : divisors(N)) cusps += euler_phi(gcd(d, N / d));
  // g = 1 + mu/12 - nu2/4 - nu3/3 - cusps/2, scaled by 12
  const i64 twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps;
  return twelve_g / 12;
}

std::vector<Integer> tau_by_product(i64 nmax) {
  // q prod (1 - q^j)^24, coefficients 0..nmax-1 of the product
  std::vector<Integer> prod(nmax, 0);
  prod[0] = 1;
  for (i64 j = 1; j < nmax; ++j)
    for (int r = 0; r < 24; ++r)
      for (i64 i = nmax - 1; i >= j; --i) prod[i] -= prod[i - j];
  std::vector<Integer> tau(nmax + 1, 0);
  for (i64 n = 1; n <= nmax; ++n) tau[n] = prod[n - 1];
  return tau;
}

i64 hurwitz_class_number(i64 d) {
  const i64 D = -d;
  i64 w = 2;
  if (d == -3) w = 6;
  if (d == -4) w = 4;
  i64 s = 0;
  for (i64 j = 1; j < D; ++j) s += kronecker(d, j) * j;
  if (s < 0) s = -s;
  return w * s / (2 * D);
}

SweepOutcomes trace_sweep(const SweepBounds& b) {
  SweepOutcomes out;
  TraceOptions flipped;
  flipped.negate_u = true;
  for (i64 N = 1; N <= b.max_level; ++N)
    for (const auto& chi : minimal_characters(N)) {
      const bool real_chi = chi.order() <= 2;
      for (int k : b.weights) {
        if (chi.parity() != wanted_parity(k)) continue;
        const SpaceSpec s{N, k, chi, SpaceKind::Min};
        for (i64 n = 1; n <= b.nmax; ++n) {
          const CycloNumber a = trace_min(s, n);
          const CycloNumber o = trace_min_sieved(s, n);
          ++out.dual_path.count;
          if (!same_value(a, o)) fail(out.dual_path, where(s, n) + ": " + a.to_string() + " vs " + o.to_string());
          const CycloNumber f = trace_min(s, n, flipped);
          ++out.u_sign.count;
          if (!(f == a)) fail(out.u_sign, where(s, n) + ": " + a.to_string() + " vs " + f.to_string());
          ++out.integrality.count;
          if (a.denominator() != 1) fail(out.integrality, where(s, n) + ": denominator in " + a.to_string());
          if (real_chi && !a.is_rational()) fail(out.integrality, where(s, n) + ": irrational " + a.to_string());
        }
      }
    }
  return out;
}

Outcome genus_dimensions(i64 max_level) {
  Outcome o;
  for (i64 N = 1; N <= max_level; ++N) {
    const SpaceSpec s{N, 2, DirichletCharacter::trivial(N), SpaceKind::Full};
    const CycloNumber t = trace_full(s, 1);
    const i64 g = genus_dimension(N);
    ++o.count;
    if (!(t == CycloNumber::from_rational(t.order(), Rational(g))))
      fail(o, "N=" + std::to_string(N) + ": trace " + t.to_string() + ", genus " + std::to_string(g));
  }
  return o;
}

Outcome ramanujan_tau(i64 nmax) {
  Outcome o;
  const auto tau = tau_by_product(nmax);
  const SpaceSpec s{1, 12, DirichletCharacter::trivial(1), SpaceKind::Min};
  for (i64 n = 1; n <= nmax; ++n) {
    const CycloNumber t = trace_min(s, n);
    ++o.count;
    if (!(t == CycloNumber::from_rational(t.order(), Rational(tau[n]))))
      fail(o, "n=" + std::to_string(n) + ": " + t.to_string() + " vs " + tau[n].get_str());
  }
  return o;
}

Outcome gates(int samples, std::uint64_t seed, i64 max_level) {
  Outcome o;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<i64> level(1, max_level), weight(2, 12), index(1, 60);
  i64 parity_cases = 0, squarefree_cases = 0;
  while (o.count < samples) {
    const i64 N = level(rng);
    const auto chars = minimal_characters(N);
    const auto& chi = chars[std::uniform_int_distribution<std::size_t>(0, chars.size() - 1)(rng)];
    const int k = static_cast<int>(weight(rng));
    const i64 n = index(rng);
    const i64 q = N / chi.conductor();
    const bool parity_bad = chi.parity() != wanted_parity(k);
    const bool square_bad = !is_squarefree(gcd(gcd(q * q, n * n), N));
    if (!parity_bad && !square_bad) continue;
    // odd samples must break the square-free gate, so both kinds are covered
    if (o.count % 2 == 1 && !square_bad) continue;
    parity_cases += parity_bad;
    squarefree_cases += square_bad;
    const SpaceSpec s{N, k, chi, SpaceKind::Min};
    ++o.count;
    const CycloNumber a = trace_min(s, n);
    const CycloNumber b = trace_min_sieved(s, n);
    if (!a.is_zero() || !b.is_zero()) fail(o, where(s, n) + ": " + a.to_string() + " / " + b.to_string());
  }
  if (o.pass)
    o.detail = std::to_string(parity_cases) + " parity, " + std::to_string(squarefree_cases) + " square-free violations";
  return o;
}

Outcome class_numbers(i64 bound) {
  Outcome o;
  for (i64 d = -3; d > -bound; --d) {
    if (!is_fundamental_discriminant(d)) continue;
    const i64 h = class_data(d).h;
    const i64 hh = hurwitz_class_number(d);
    ++o.count;
    if (h != hh) fail(o, "d=" + std::to_string(d) + ": forms " + std::to_string(h) + ", Hurwitz " + std::to_string(hh));
  }
  return o;
}

Outcome basis_rank(i64 max_level, const std::vector<int>& weights, i64 gram_size) {
  Outcome o;
  i64 gram_spaces = 0;
  for (i64 N = 1; N <= max_level; ++N)
    for (const auto& chi : minimal_characters(N))
      for (int k : weights) {
        if (chi.parity() != wanted_parity(k)) continue;
        for (SpaceKind kind : {SpaceKind::Min, SpaceKind::New, SpaceKind::Full}) {
          const SpaceSpec s{N, k, chi, kind};
          ++o.count;
          try {
            const BasisMatrix m = basis_for(s, sturm_bound(s));
            i64 dim = m.target_dimension;
            if (kind == SpaceKind::Min) {
              const auto other = trace_min_sieved(s, 1).as_rational();
              if (!other || *other != Rational(dim)) fail(o, where(s, 1) + ": trace paths disagree on the dimension");
            }
            if (m.certified_rank != dim)
              fail(o, where(s, 1) + " " + to_string(kind) + ": rank " + std::to_string(m.certified_rank) + " of " +
                          std::to_string(dim));
          } catch (const std::exception& e) {
            fail(o, where(s, 1) + " " + to_string(kind) + ": " + e.what());
          }
        }
        const SpaceSpec s{N, k, chi, SpaceKind::Min};
        const auto g = gram_matrix(s, gram_size);
        ++gram_spaces;
        for (i64 i = 0; i < gram_size; ++i)
          for (i64 j = 0; j < i; ++j)
            if (!(g[i][j] == g[j][i])) fail(o, where(s, 1) + ": Gram entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
  if (o.pass) o.detail = std::to_string(gram_spaces) + " Gram matrices symmetric";
  return o;
}

Outcome decomposition(i64 max_level, const std::vector<int>& weights) {
  // The direct sum runs over classes, so each class counts once. As a cross-check, the
  // class sizes must partition the full pair list: sum over all pairs of 1/size = #classes.
  Outcome o;
  i64 weighted_form_failures = 0;
  for (i64 N = 1; N <= max_level; ++N)
    for (const auto& chi : minimal_characters(N)) {
      const auto reps = twist_pairs(N, chi);
      const auto all = all_twist_pairs(N, chi);
      Rational classes = 0;
      for (const auto& pair : all) classes += Rational(1, pair.class_size);
      if (classes != Rational(static_cast<long>(reps.size())))
        fail(o, "N=" + std::to_string(N) + " chi=" + chi.label() + ": class sizes do not partition the pairs");
      for (int k : weights) {
        const SpaceSpec s{N, k, chi, SpaceKind::New};
        const auto lhs = trace_new(s, 1).as_rational();
        Rational per_class = 0, weighted = 0;
        for (const auto& pair : reps) {
          const SpaceSpec m{pair.M, k, pair.twisted_chi, SpaceKind::Min};
          const auto d = trace_min(m, 1).as_rational();
          if (!d) {
            fail(o, where(m, 1) + ": non-rational dimension");
            continue;
          }
          per_class += *d;
          weighted += pair.class_size * *d;
        }
        ++o.count;
        if (!lhs || *lhs != per_class)
          fail(o, where(s, 1) + ": new " + (lhs ? lhs->get_str() : "?") + ", sum over classes " + per_class.get_str());
        if (lhs && *lhs != weighted) ++weighted_form_failures;
      }
    }
  if (o.pass)
    o.detail = "one term per class; weighting by class size would miss in " + std::to_string(weighted_form_failures) +
               " spaces";
  return o;
}

Outcome newform_transfer(i64 pmax) {
  Outcome o;
  const SpaceSpec s{11, 2, DirichletCharacter::trivial(11), SpaceKind::Min};
  const QExpansion f = trace_form(s, pmax);
  const DirichletCharacter psi = DirichletCharacter::from_label("3.2");
  const TwistedNewform there = newform_coeffs_from_min(f, psi);
  const TwistedNewform back = newform_coeffs_from_min(there.coeffs, psi.conj());
  for (i64 p = 2; p <= pmax; ++p) {
    if (!is_prime(p)) continue;
    ++o.count;
    const CycloNumber want = f.at(p).embed_into(back.coeffs.order);
    if (!(back.coeffs.at(p) == want))
      fail(o, "p=" + std::to_string(p) + ": a_p " + f.at(p).to_string() + ", after twisting there and back " +
                  back.coeffs.at(p).to_string() + " (twisted b_p " + there.coeffs.at(p).to_string() + ", level " +
                  std::to_string(there.level) + ")");
  }
  return o;
}

}  // namespace tmtrace::checks
