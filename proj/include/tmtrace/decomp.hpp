#pragma once

// Twist pairs, their equivalence classes, and the sieve helpers P(N, chi, n) and beta.

#include <vector>

#include "tmtrace/arith.hpp"
#include "tmtrace/characters.hpp"

namespace tmtrace {

struct TwistPair {
  i64 M = 1;
  DirichletCharacter psi;          // primitive, modulus cond(psi)
  DirichletCharacter twisted_chi;  // chi * psi^2 at modulus M
  int class_size = 1;              // 2^k(N/M, chi, psi)
};

/// Which character the second pair condition excludes at an odd prime.
enum class PairExclusion {
  ChiP,      // psi_p != chi_p; breaks the sieve inversion at N = 25
  ConjChiP,  // psi_p != conj(chi_p)
};

struct PairOptions {
  PairExclusion exclusion = PairExclusion::ConjChiP;
};

/// Every twist pair for (N, chi), not deduplicated; deterministic order.
/// Throws std::invalid_argument when chi is not twist-minimal or its modulus is not N.
std::vector<TwistPair> all_twist_pairs(i64 N, const DirichletCharacter& chi, const PairOptions& opts = {});

/// One representative per equivalence class (smallest Conrey index of psi).
std::vector<TwistPair> twist_pairs(i64 N, const DirichletCharacter& chi, const PairOptions& opts = {});

/// Primes p | N/M with psi_p != (./p) or p || cond(chi).
int k_count(i64 NoverM, const DirichletCharacter& chi, const DirichletCharacter& psi);
/// Number of distinct primes dividing N/M.
int kprime_count(i64 NoverM);

/// Squarefree x with p || N, chi_p trivial and p^2 | n for every p | x; ascending.
std::vector<i64> p_set(i64 N, const DirichletCharacter& chi, i64 n);

/// beta_m(q), multiplicative in q.
i64 beta(i64 m, i64 q);

}  // namespace tmtrace
