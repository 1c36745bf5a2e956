#pragma once

// Independent traces: the classical full-space formula, the newform sieve,
// and the twist-pair inversion back to twist-minimal spaces.

#include <vector>

#include "tmtrace/decomp.hpp"
#include "tmtrace/trace.hpp"

namespace tmtrace {

/// Solutions x in [0, modulus) of x^2 - t x + n = 0 (mod modulus), by enumeration.
std::vector<i64> quadratic_roots_brute(i64 modulus, i64 t, i64 n);
/// Same set, assembled by CRT from prime-power solution sets; sorted.
std::vector<i64> quadratic_roots_crt(i64 modulus, i64 t, i64 n);

/// Trace of T_n on the full space S_k(N, chi). Memoized.
CycloNumber trace_full(const SpaceSpec& spec, i64 n);

/// Trace of T_n on S_k^new(N, chi) via the old/new sieve.
CycloNumber trace_new(const SpaceSpec& spec, i64 n);

/// Ambient order used by trace_min_sieved for this space.
int sieved_order(const SpaceSpec& spec, const PairOptions& opts = {});

/// Trace on S_k^min(N, chi) recovered from newform traces over all twist pairs.
/// The result lives in Q(zeta_sieved_order(spec)).
CycloNumber trace_min_sieved(const SpaceSpec& spec, i64 n, const PairOptions& opts = {});

/// Embed both into Q(zeta_lcm) and compare exactly.
bool same_value(const CycloNumber& a, const CycloNumber& b);

void clear_oracle_memo();

}  // namespace tmtrace
