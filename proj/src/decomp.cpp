#include "tmtrace/decomp.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace tmtrace {

namespace {

struct LocalOption {
  int m_exp = 0;
  LocalCharacter psi;      // primitive: psi.e is its conductor exponent
  LocalCharacter twisted;  // chi_p psi_p^2 at exponent m_exp
};

bool same_primitive(const LocalCharacter& a, const LocalCharacter& b) {
  const int sa = a.conductor_exponent();
  if (sa != b.conductor_exponent()) return false;
  return a.at_exponent(sa) == b.at_exponent(sa);
}

LocalCharacter primitive_part(const LocalCharacter& x) { return x.at_exponent(x.conductor_exponent()); }

std::vector<LocalCharacter> primitive_locals(i64 p, int s) {
  std::vector<LocalCharacter> out;
  const i64 n = ipow(p, s);
  for (i64 q = 1; q < n; ++q) {
    if (q % p == 0) continue;
    auto lc = LocalCharacter::from_conrey(p, s, q);
    if (lc.conductor_exponent() == s) out.push_back(lc);
  }
  return out;
}

std::vector<LocalOption> local_options(const LocalCharacter& chi_p, const PairOptions& opts) {
  const i64 p = chi_p.p;
  const int e = chi_p.e;
  const int s = chi_p.conductor_exponent();
  std::vector<LocalOption> out;
  out.push_back({e, LocalCharacter{p, 0, 0, 0}, chi_p});
  if (p != 2 && e % 2 == 0 && s < e) {
    const int h = e / 2;
    const LocalCharacter chi_h = chi_p.at_exponent(h);
    const LocalCharacter excluded = opts.exclusion == PairExclusion::ChiP ? chi_p : chi_p.conj();
    for (const auto& psi : primitive_locals(p, h)) {
      if (same_primitive(psi, excluded)) continue;
      out.push_back({h, psi, chi_h.mul(psi.pow(2))});
    }
  }
  if (p != 2 && e == 2 && chi_p.is_trivial()) {
    const LocalCharacter legendre{p, 1, 0, (p - 1) / 2};
    out.push_back({0, legendre, LocalCharacter{p, 0, 0, 0}});
  }
  return out;
}

DirichletCharacter assemble(const std::vector<LocalCharacter>& locals) {
  i64 modulus = 1;
  std::vector<LocalCharacter> comps;
  for (const auto& lc : locals) {
    if (lc.e == 0) continue;
    modulus *= lc.modulus();
    comps.push_back(lc);
  }
  return DirichletCharacter(modulus, std::move(comps));
}

}  // namespace

int k_count(i64 NoverM, const DirichletCharacter& chi, const DirichletCharacter& psi) {
  int k = 0;
  const i64 cond = chi.conductor();
  for (i64 p : prime_divisors(NoverM)) {
    const LocalCharacter psi_p = primitive_part(psi.local_component(p));
    const LocalCharacter legendre{p, 1, 0, (p - 1) / 2};
    const bool is_legendre = p != 2 && psi_p == legendre;
    if (!is_legendre || valuation(p, cond) == 1) ++k;
  }
  return k;
}

int kprime_count(i64 NoverM) { return static_cast<int>(prime_divisors(NoverM).size()); }

std::vector<TwistPair> all_twist_pairs(i64 N, const DirichletCharacter& chi, const PairOptions& opts) {
  if (chi.modulus() != N) throw std::invalid_argument("twist pairs: character modulus differs from the level");
  if (!is_twist_minimal(chi)) throw std::invalid_argument("twist pairs: character " + chi.label() + " is not twist-minimal");

  std::vector<std::vector<LocalOption>> per_prime;
  for (const auto& f : factorize(N).factors) per_prime.push_back(local_options(chi.local_component(f.p), opts));

  std::vector<TwistPair> out;
  std::vector<std::size_t> idx(per_prime.size(), 0);
  while (true) {
    i64 M = 1;
    std::vector<LocalCharacter> psis, twisted;
    for (std::size_t i = 0; i < per_prime.size(); ++i) {
      const auto& opt = per_prime[i][idx[i]];
      M *= ipow(opt.twisted.p, opt.m_exp);
      psis.push_back(opt.psi);
      twisted.push_back(opt.twisted);
    }
    TwistPair pair;
    pair.M = M;
    pair.psi = assemble(psis);
    pair.twisted_chi = assemble(twisted);
    pair.class_size = 1 << k_count(N / M, chi, pair.psi);
    out.push_back(std::move(pair));

    // odometer, last prime fastest
    std::size_t i = per_prime.size();
    while (i > 0) {
      --i;
      if (++idx[i] < per_prime[i].size()) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
    if (per_prime.empty()) return out;
  }
}

std::vector<TwistPair> twist_pairs(i64 N, const DirichletCharacter& chi, const PairOptions& opts) {
  auto all = all_twist_pairs(N, chi, opts);
  std::vector<TwistPair> out;
  for (auto& pair : all) {
    // class members: per prime either psi_p or the primitive part of conj(chi_p psi_p)
    std::vector<std::vector<LocalCharacter>> choices;
    for (const auto& f : factorize(N).factors) {
      const LocalCharacter psi_p = pair.psi.local_component(f.p);
      std::vector<LocalCharacter> c{psi_p};
      if (psi_p.e > 0) {
        const LocalCharacter chi_p = chi.local_component(f.p).at_exponent(std::max(psi_p.e, chi.local_component(f.p).conductor_exponent()));
        const LocalCharacter partner = primitive_part(chi_p.mul(psi_p.at_exponent(chi_p.e)).conj());
        if (partner.e == psi_p.e && !(partner == psi_p)) c.push_back(partner);
      }
      choices.push_back(std::move(c));
    }
    i64 best = pair.psi.conrey_index();
    std::vector<std::size_t> idx(choices.size(), 0);
    while (true) {
      std::vector<LocalCharacter> locals;
      for (std::size_t i = 0; i < choices.size(); ++i) locals.push_back(choices[i][idx[i]]);
      best = std::min(best, assemble(locals).conrey_index());
      std::size_t i = choices.size();
      bool done = true;
      while (i > 0) {
        --i;
        if (++idx[i] < choices[i].size()) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
      if (done) break;
    }
    if (best == pair.psi.conrey_index()) out.push_back(std::move(pair));
  }
  return out;
}

std::vector<i64> p_set(i64 N, const DirichletCharacter& chi, i64 n) {
  std::vector<i64> primes;
  for (const auto& f : factorize(N).factors)
    if (f.e == 1 && chi.local_component(f.p).is_trivial() && n % (f.p * f.p) == 0) primes.push_back(f.p);
  std::vector<i64> out{1};
  for (i64 p : primes) {
    const std::size_t base = out.size();
    for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

i64 beta(i64 m, i64 q) {
  i64 out = 1;
  for (const auto& f : factorize(q).factors) {
    const bool divides = m % f.p == 0;
    switch (f.e) {
      case 1:
        out *= (divides ? 1 : 0) - 2;
        break;
      case 2:
        out *= 1 - (divides ? 1 : 0);
        break;
      default:
        return 0;
    }
  }
  return out;
}

}  // namespace tmtrace
