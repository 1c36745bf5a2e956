#pragma once

// Direct traces of Hecke operators on twist-minimal spaces.

#include <string>
#include <vector>

#include "tmtrace/characters.hpp"
#include "tmtrace/cyclo.hpp"
#include "tmtrace/quadratic.hpp"

namespace tmtrace {

enum class SpaceKind { Min, New, Full };

std::string to_string(SpaceKind kind);
/// "min", "new" or "full"; throws std::invalid_argument otherwise.
SpaceKind parse_space_kind(const std::string& s);

struct SpaceSpec {
  i64 N = 1;
  int k = 2;
  DirichletCharacter chi;
  SpaceKind kind = SpaceKind::Min;

  /// Throws std::invalid_argument unless chi has modulus N and k >= 2.
  void validate() const;
  /// The ambient cyclotomic order of traces on this space.
  int value_order() const { return static_cast<int>(chi.order()); }
};

struct TraceOptions {
  /// Use -u in place of u in every local factor (root-choice invariance check).
  bool negate_u = false;
};

/// G_{k-2}(t, n) = (rho^{k-1} - conj(rho)^{k-1}) / (rho - conj(rho)).
/// Throws std::domain_error when t^2 >= 4n.
Integer weight_factor(int k, i64 t, i64 n);

struct EllipticTermContext {
  i64 t = 0;
  i64 n = 1;
  DiscriminantSplit split;

  static EllipticTermContext make(i64 t, i64 n);
  int gamma(i64 p) const { return valuation(p, split.D); }
};

/// The local factor at p | N, in Q(zeta_order(chi_p)).
CycloNumber local_factor_min(const LocalCharacter& chi_p, const EllipticTermContext& ctx,
                             const TraceOptions& opts = {});

/// S_p(1, 1, t, n) for p not dividing the level.
Integer local_factor_unit(i64 p, const EllipticTermContext& ctx);

/// Trace of T_n on S_k^min(N, chi). The t-sum runs in parallel when built with OpenMP.
/// Throws std::invalid_argument for non-twist-minimal chi or k < 2.
CycloNumber trace_min(const SpaceSpec& spec, i64 n, const TraceOptions& opts = {});

/// Single-threaded reference with the same contract.
CycloNumber trace_min_serial(const SpaceSpec& spec, i64 n, const TraceOptions& opts = {});

/// trace_min for n = 1..nmax, parallel over n.
std::vector<CycloNumber> trace_min_range(const SpaceSpec& spec, i64 nmax, const TraceOptions& opts = {});
/// trace_min for n = first..last, parallel over n.
std::vector<CycloNumber> trace_min_span(const SpaceSpec& spec, i64 first, i64 last, const TraceOptions& opts = {});

/// gcd((N/cond)^2, n^2, N) is squarefree and chi(-1) = (-1)^k.
bool trace_gates_pass(i64 N, const DirichletCharacter& chi, int k, i64 n);

}  // namespace tmtrace
