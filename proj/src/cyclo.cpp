#include "tmtrace/cyclo.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>

#include "tmtrace/arith.hpp"

namespace tmtrace {

namespace {

using Poly = std::vector<std::int64_t>;

Poly poly_mul_xd_minus_1(const Poly& a, int d) {
  Poly out(a.size() + d, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i + d] += a[i];
    out[i] -= a[i];
  }
  return out;
}

// exact division by x^d - 1
Poly poly_div_xd_minus_1(const Poly& a, int d) {
  const int n = static_cast<int>(a.size()) - 1;
  Poly q(n - d + 1, 0);
  Poly r = a;
  for (int i = n; i >= d; --i) {
    const std::int64_t c = r[i];
    q[i - d] = c;
    r[i] -= c;
    r[i - d] += c;
  }
  for (int i = 0; i < d; ++i)
    if (r[i] != 0) throw std::logic_error("cyclotomic construction: inexact division");
  return q;
}

std::shared_ptr<const CycloTables> build_tables(int m) {
  auto t = std::make_shared<CycloTables>();
  t->order = m;
  // Phi_m = prod_{d | m} (x^d - 1)^{mu(m/d)}
  Poly num{1}, den{1};
  for (i64 d : divisors(m)) {
    const int mu = mobius(m / d);
    if (mu == 1) num = poly_mul_xd_minus_1(num, static_cast<int>(d));
    if (mu == -1) den = poly_mul_xd_minus_1(den, static_cast<int>(d));
  }
  // num / den, both products of (x^d - 1) factors
  Poly phi = num;
  for (i64 d : divisors(m))
    if (mobius(m / d) == -1) phi = poly_div_xd_minus_1(phi, static_cast<int>(d));
  while (phi.size() > 1 && phi.back() == 0) phi.pop_back();
  t->cyclotomic = phi;
  const int deg = static_cast<int>(phi.size()) - 1;
  t->degree = deg;

  // x^j mod Phi_m, dense then stored sparse
  std::vector<std::int64_t> cur(deg, 0);
  cur[0] = 1;
  t->power_reduction.resize(m);
  for (int j = 0; j < m; ++j) {
    auto& row = t->power_reduction[j];
    for (int i = 0; i < deg; ++i)
      if (cur[i] != 0) row.emplace_back(i, cur[i]);
    // multiply by x and reduce: x^deg = -sum phi_i x^i (Phi monic)
    const std::int64_t top = cur[deg - 1];
    for (int i = deg - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    if (top != 0)
      for (int i = 0; i < deg; ++i) cur[i] -= top * phi[i];
  }
  return t;
}

}  // namespace

std::shared_ptr<const CycloTables> cyclo_tables(int order) {
  if (order < 1) throw std::domain_error("cyclotomic order must be positive");
  static std::shared_mutex mutex;
  static std::map<int, std::shared_ptr<const CycloTables>> cache;
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
  }
  auto built = build_tables(order);
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.emplace(order, std::move(built));
  return it->second;
}

namespace {

// Reduce a group-ring vector (length m) to the canonical power basis.
std::vector<Rational> reduce_slots(const CycloTables& t, const std::vector<Rational>& slots) {
  std::vector<Rational> out(t.degree);
  for (int j = 0; j < t.order; ++j) {
    if (sgn(slots[j]) == 0) continue;
    for (const auto& [i, c] : t.power_reduction[j]) {
      if (c == 1)
        out[i] += slots[j];
      else if (c == -1)
        out[i] -= slots[j];
      else
        out[i] += slots[j] * Rational(static_cast<long>(c));
    }
  }
  return out;
}

}  // namespace

CycloNumber::CycloNumber() : CycloNumber(1) {}

CycloNumber::CycloNumber(int order) : order_(order) {
  coeffs_.resize(cyclo_tables(order)->degree);
}

CycloNumber CycloNumber::from_rational(int order, const Rational& q) {
  CycloNumber x(order);
  x.coeffs_[0] = q;
  return x;
}

CycloNumber CycloNumber::root_of_unity(int order, std::int64_t k) {
  CycloAccumulator acc(order);
  acc.add_root(k, Rational(1));
  return acc.result();
}

CycloNumber CycloNumber::from_coeffs(int order, std::vector<Rational> coeffs) {
  CycloNumber x(order);
  if (coeffs.size() != x.coeffs_.size())
    throw std::invalid_argument("CycloNumber: coefficient vector length must equal phi(order)");
  for (auto& c : coeffs) c.canonicalize();
  x.coeffs_ = std::move(coeffs);
  return x;
}

void CycloNumber::require_same_order(const CycloNumber& o, const char* op) const {
  if (order_ != o.order_) {
    std::ostringstream msg;
    msg << "CycloNumber::" << op << ": order mismatch (" << order_ << " vs " << o.order_
        << "); promote with embed_into";
    throw std::invalid_argument(msg.str());
  }
}

CycloNumber& CycloNumber::operator+=(const CycloNumber& o) {
  require_same_order(o, "add");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

CycloNumber& CycloNumber::operator-=(const CycloNumber& o) {
  require_same_order(o, "sub");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

CycloNumber& CycloNumber::operator*=(const CycloNumber& o) {
  require_same_order(o, "mul");
  const auto t = cyclo_tables(order_);
  std::vector<Rational> slots(order_);
  const int deg = t->degree;
  for (int i = 0; i < deg; ++i) {
    if (sgn(coeffs_[i]) == 0) continue;
    for (int j = 0; j < deg; ++j) {
      if (sgn(o.coeffs_[j]) == 0) continue;
      slots[(i + j) % order_] += coeffs_[i] * o.coeffs_[j];
    }
  }
  coeffs_ = reduce_slots(*t, slots);
  return *this;
}

CycloNumber CycloNumber::operator-() const {
  CycloNumber x = *this;
  for (auto& c : x.coeffs_) c = -c;
  return x;
}

CycloNumber CycloNumber::scaled(const Rational& q) const {
  CycloNumber x = *this;
  for (auto& c : x.coeffs_) c *= q;
  return x;
}

CycloNumber CycloNumber::conjugate() const {
  CycloAccumulator acc(order_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (sgn(coeffs_[i]) != 0) acc.add_root(-static_cast<std::int64_t>(i), coeffs_[i]);
  return acc.result();
}

CycloNumber CycloNumber::embed_into(int order) const {
  if (order % order_ != 0) {
    std::ostringstream msg;
    msg << "embed_into: order " << order_ << " does not divide " << order;
    throw std::invalid_argument(msg.str());
  }
  if (order == order_) return *this;
  const std::int64_t step = order / order_;
  CycloAccumulator acc(order);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (sgn(coeffs_[i]) != 0) acc.add_root(static_cast<std::int64_t>(i) * step, coeffs_[i]);
  return acc.result();
}

CycloNumber CycloNumber::inverse() const {
  if (is_zero()) throw std::domain_error("CycloNumber::inverse: zero has no inverse");
  const int deg = static_cast<int>(coeffs_.size());
  // Columns of the multiplication-by-this matrix are this * x^i.
  std::vector<std::vector<Rational>> a(deg, std::vector<Rational>(deg + 1));
  for (int i = 0; i < deg; ++i) {
    CycloNumber basis(order_);
    basis.coeffs_[i] = 1;
    const CycloNumber col = *this * basis;
    for (int r = 0; r < deg; ++r) a[r][i] = col.coeffs_[r];
  }
  a[0][deg] = 1;
  for (int c = 0; c < deg; ++c) {
    int piv = c;
    while (piv < deg && sgn(a[piv][c]) == 0) ++piv;
    if (piv == deg) throw std::logic_error("CycloNumber::inverse: singular multiplication matrix");
    std::swap(a[c], a[piv]);
    const Rational inv = 1 / a[c][c];
    for (int j = c; j <= deg; ++j) a[c][j] *= inv;
    for (int r = 0; r < deg; ++r) {
      if (r == c || sgn(a[r][c]) == 0) continue;
      const Rational f = a[r][c];
      for (int j = c; j <= deg; ++j) a[r][j] -= f * a[c][j];
    }
  }
  CycloNumber out(order_);
  for (int r = 0; r < deg; ++r) out.coeffs_[r] = a[r][deg];
  return out;
}

bool CycloNumber::is_zero() const {
  for (const auto& c : coeffs_)
    if (sgn(c) != 0) return false;
  return true;
}

bool CycloNumber::is_rational() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (sgn(coeffs_[i]) != 0) return false;
  return true;
}

std::optional<Rational> CycloNumber::as_rational() const {
  if (!is_rational()) return std::nullopt;
  return coeffs_[0];
}

Integer CycloNumber::denominator() const {
  Integer d = 1;
  for (const auto& c : coeffs_) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), c.get_den_mpz_t());
  return d;
}

std::complex<double> CycloNumber::to_complex() const {
  std::complex<double> z = 0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (sgn(coeffs_[j]) == 0) continue;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / order_;
    z += coeffs_[j].get_d() * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return z;
}

std::string CycloNumber::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (sgn(coeffs_[j]) == 0) continue;
    if (!first) out << " + ";
    first = false;
    out << "(" << coeffs_[j].get_str() << ")";
    if (j > 0) out << "*z" << order_ << "^" << j;
  }
  if (first) out << "0";
  return out.str();
}

bool CycloNumber::operator==(const CycloNumber& o) const {
  return order_ == o.order_ && coeffs_ == o.coeffs_;
}

CycloAccumulator::CycloAccumulator(int order) : order_(order), slots_(order) {
  if (order < 1) throw std::domain_error("CycloAccumulator: order must be positive");
}

void CycloAccumulator::add_root(std::int64_t exponent, const Rational& coef) {
  slots_[mod(exponent, order_)] += coef;
}

void CycloAccumulator::add(const CycloNumber& x) { add_scaled(x, Rational(1)); }

void CycloAccumulator::add_scaled(const CycloNumber& x, const Rational& coef) {
  if (x.order() != order_) throw std::invalid_argument("CycloAccumulator::add: order mismatch");
  const auto& c = x.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (sgn(c[i]) != 0) slots_[i] += c[i] * coef;
}

CycloNumber CycloAccumulator::result() const {
  const auto t = cyclo_tables(order_);
  return CycloNumber::from_coeffs(order_, reduce_slots(*t, slots_));
}

RootSum RootSum::constant(const Rational& q) { return root(0, q); }

RootSum RootSum::root(std::int64_t exponent, const Rational& q) {
  RootSum r;
  r.add(exponent, q);
  return r;
}

void RootSum::add(std::int64_t exponent, const Rational& q) {
  if (sgn(q) == 0) return;
  for (auto& t : terms_)
    if (t.exponent == exponent) {
      t.coef += q;
      return;
    }
  terms_.push_back({exponent, q});
}

RootSum& RootSum::operator+=(const RootSum& o) {
  for (const auto& t : o.terms_) add(t.exponent, t.coef);
  return *this;
}

RootSum RootSum::scaled(const Rational& q) const {
  RootSum r;
  if (sgn(q) == 0) return r;
  r.terms_ = terms_;
  for (auto& t : r.terms_) t.coef *= q;
  return r;
}

RootSum RootSum::multiplied(const RootSum& o, int order) const {
  RootSum r;
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) r.add(mod(a.exponent + b.exponent, order), a.coef * b.coef);
  return r;
}

RootSum RootSum::conjugated(int order) const {
  RootSum r = *this;
  for (auto& t : r.terms_) t.exponent = mod(-t.exponent, order);
  return r;
}

void RootSum::accumulate_into(CycloAccumulator& acc, const Rational& scale) const {
  for (const auto& t : terms_) acc.add_root(t.exponent, t.coef * scale);
}

CycloNumber RootSum::to_number(int order) const {
  CycloAccumulator acc(order);
  accumulate_into(acc, Rational(1));
  return acc.result();
}

}  // namespace tmtrace
