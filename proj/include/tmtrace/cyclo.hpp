#pragma once

// Exact arithmetic in Q(zeta_m), power basis modulo the m-th cyclotomic polynomial.

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace tmtrace {

using Rational = mpq_class;
using Integer = mpz_class;

/// Precomputed data for one order m: Phi_m and the reductions of x^j, 0 <= j < m.
struct CycloTables {
  int order = 1;
  int degree = 1;                              // phi(m)
  std::vector<std::int64_t> cyclotomic;        // Phi_m, ascending coefficients
  std::vector<std::vector<std::pair<int, std::int64_t>>> power_reduction;
};

/// Shared, lazily built tables; safe for concurrent callers.
std::shared_ptr<const CycloTables> cyclo_tables(int order);

/// An element of Q(zeta_m) in canonical reduced form.
class CycloNumber {
 public:
  CycloNumber();  // zero in Q(zeta_1)
  explicit CycloNumber(int order);

  static CycloNumber zero(int order) { return CycloNumber(order); }
  static CycloNumber one(int order) { return from_rational(order, Rational(1)); }
  static CycloNumber from_rational(int order, const Rational& q);
  static CycloNumber root_of_unity(int order, std::int64_t k);

  /// Build from raw power-basis coefficients (length phi(order)).
  static CycloNumber from_coeffs(int order, std::vector<Rational> coeffs);

  int order() const { return order_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  CycloNumber& operator+=(const CycloNumber& o);
  CycloNumber& operator-=(const CycloNumber& o);
  CycloNumber& operator*=(const CycloNumber& o);
  friend CycloNumber operator+(CycloNumber a, const CycloNumber& b) { return a += b; }
  friend CycloNumber operator-(CycloNumber a, const CycloNumber& b) { return a -= b; }
  friend CycloNumber operator*(CycloNumber a, const CycloNumber& b) { return a *= b; }
  CycloNumber operator-() const;

  CycloNumber scaled(const Rational& q) const;
  CycloNumber conjugate() const;
  /// Multiplicative inverse; throws std::domain_error on zero.
  CycloNumber inverse() const;
  CycloNumber embed_into(int order) const;

  bool is_zero() const;
  bool is_rational() const;
  std::optional<Rational> as_rational() const;
  /// lcm of the coefficient denominators.
  Integer denominator() const;

  std::complex<double> to_complex() const;
  std::string to_string() const;

  bool operator==(const CycloNumber& o) const;

 private:
  void require_same_order(const CycloNumber& o, const char* op) const;

  int order_;
  std::vector<Rational> coeffs_;
};

/// Accumulates sums of scaled roots of unity in Q[x]/(x^m - 1) and reduces once.
class CycloAccumulator {
 public:
  explicit CycloAccumulator(int order);

  int order() const { return order_; }
  void add_root(std::int64_t exponent, const Rational& coef);
  void add(const CycloNumber& x);
  void add_scaled(const CycloNumber& x, const Rational& coef);
  CycloNumber result() const;

 private:
  int order_;
  std::vector<Rational> slots_;
};

/// A finite formal sum of roots of unity of a fixed order: sum coef_i * zeta_m^exp_i.
/// Used for cheap products of local factors before a single reduction.
class RootSum {
 public:
  struct Term {
    std::int64_t exponent;
    Rational coef;
  };

  RootSum() = default;
  static RootSum constant(const Rational& q);
  static RootSum root(std::int64_t exponent, const Rational& q = Rational(1));

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(std::int64_t exponent, const Rational& q);
  RootSum& operator+=(const RootSum& o);
  RootSum scaled(const Rational& q) const;
  RootSum multiplied(const RootSum& o, int order) const;
  /// Negate exponents modulo order (complex conjugation).
  RootSum conjugated(int order) const;

  void accumulate_into(CycloAccumulator& acc, const Rational& scale) const;
  CycloNumber to_number(int order) const;

 private:
  std::vector<Term> terms_;
};

}  // namespace tmtrace
