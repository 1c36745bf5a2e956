#pragma once

// q-expansions, Hecke action, trace forms and basis extraction with exact rank.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmtrace/decomp.hpp"
#include "tmtrace/trace.hpp"

namespace tmtrace {

/// Truncated q-series sum_{n=1}^{B} a_n q^n; every coefficient has order `order`.
struct QExpansion {
  SpaceSpec spec;
  i64 B = 0;
  int order = 1;
  std::vector<CycloNumber> coeffs;  // coeffs[n - 1] = a_n

  static QExpansion zero(const SpaceSpec& spec, i64 B, int order);
  const CycloNumber& at(i64 n) const;  // throws std::out_of_range beyond B
  QExpansion embedded(int new_order) const;
};

/// Coefficients 1..B of the twist-minimal trace form (kind must be min).
QExpansion trace_form(const SpaceSpec& spec, i64 B);

/// Trace form of S^new(N, chi) through the oracle path; any chi.
QExpansion trace_form_new_oracle(const SpaceSpec& spec, i64 B);

/// (T_n f)_m = sum_{d | (m, n)} chi(d) d^{k-1} a_{mn/d^2}, m <= floor(B / n).
QExpansion hecke_apply(i64 n, const QExpansion& f);

/// a_n -> psi(n) a_n. The result is labelled with `target` when given.
QExpansion twist_qexp(const QExpansion& f, const DirichletCharacter& psi,
                      const std::optional<SpaceSpec>& target = std::nullopt);

/// f(dz): a_n moves to index dn; truncation unchanged.
QExpansion lift(const QExpansion& f, i64 d, const std::optional<SpaceSpec>& target = std::nullopt);

/// ceil(k N prod_{p | N} (1 + 1/p) / 12).
i64 sturm_bound(const SpaceSpec& spec);

/// Dimension of the space as Tr T_1 (min: direct path; new, full: oracle path).
i64 space_dimension(const SpaceSpec& spec);

struct BasisRow {
  i64 m = 1;                  // Hecke index
  i64 level = 1;              // level M of the twist-minimal (or new) source space
  std::string source_chi;     // Conrey label of its character
  std::string psi = "1.1";    // twist applied is conj(psi)
  i64 d = 1;                  // lift
  bool from_new_trace_form = false;

  std::string label() const;
};

struct BasisMatrix {
  SpaceSpec spec;
  i64 B = 0;
  int order = 1;
  std::vector<BasisRow> rows;                     // accepted rows only
  std::vector<std::vector<CycloNumber>> entries;  // rows x B
  i64 certified_rank = 0;
  i64 target_dimension = 0;
};

/// Thrown when the row sweep reaches m > B without certifying the target rank.
struct RankNotReached : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rows sweep m = 1.. over generators until the exact rank equals Tr T_1.
BasisMatrix basis_for(const SpaceSpec& spec, i64 B);

/// Exact rank over Q(zeta_order) of a row set (entries share one order).
i64 exact_rank(const std::vector<std::vector<CycloNumber>>& rows);

/// M_{n,m} = coefficient m of T_n(trace form), n, m <= size.
std::vector<std::vector<CycloNumber>> gram_matrix(const SpaceSpec& spec, i64 size);

struct Bridge {
  DirichletCharacter psi;  // primitive
  SpaceSpec minimal;       // same level, character chi psi^2
};

/// First psi (moduli N then 2N, Conrey order) with chi psi^2 twist-minimal mod N.
/// Throws std::invalid_argument when chi is already twist-minimal.
Bridge nonminimal_bridge(const SpaceSpec& spec);

struct TwistedNewform {
  i64 level = 1;
  DirichletCharacter chi;  // chi psi^2 at modulus level
  QExpansion coeffs;
};

/// Coefficients of the newform equivalent to f_psi: primes by the two-case rule,
/// prime powers and composites by the Hecke recursion.
/// Throws std::invalid_argument when a_1 != 1.
TwistedNewform newform_coeffs_from_min(const QExpansion& f, const DirichletCharacter& psi);

}  // namespace tmtrace
