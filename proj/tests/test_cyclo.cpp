#include <doctest.h>

#include <cmath>
#include <random>

#include "tmtrace/arith.hpp"
#include "tmtrace/cyclo.hpp"

using namespace tmtrace;

namespace {

CycloNumber random_element(std::mt19937_64& rng, int m) {
  std::uniform_int_distribution<int> c(-5, 5), den(1, 4), pick(0, m - 1);
  CycloNumber x = CycloNumber::zero(m);
  for (int i = 0; i < 4; ++i) {
    Rational r(c(rng), den(rng));
    r.canonicalize();  // mpq from two ints is not reduced
    x += CycloNumber::root_of_unity(m, pick(rng)).scaled(r);
  }
  return x;
}

bool close(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) < 1e-9; }

}  // namespace

TEST_SUITE("cyclo") {
  TEST_CASE("roots of unity") {
    CHECK(CycloNumber::root_of_unity(4, 2) == CycloNumber::from_rational(4, -1));
    CHECK(CycloNumber::root_of_unity(3, 1) + CycloNumber::root_of_unity(3, 2) == CycloNumber::from_rational(3, -1));
    CHECK(CycloNumber::root_of_unity(1, 0) == CycloNumber::one(1));
    CHECK(CycloNumber::root_of_unity(8, 1) * CycloNumber::root_of_unity(8, -1) == CycloNumber::one(8));
    CHECK(CycloNumber::root_of_unity(5, 1).conjugate() == CycloNumber::root_of_unity(5, 4));
    CHECK(CycloNumber::one(1).scaled(Rational(1, 12)) == CycloNumber::from_rational(1, Rational(1, 12)));
    // the primitive m-th roots sum to mu(m)
    for (int m = 1; m <= 40; ++m) {
      CycloNumber s = CycloNumber::zero(m);
      for (int k = 0; k < m; ++k)
        if (gcd(k, m) == 1) s += CycloNumber::root_of_unity(m, k);
      CHECK(s == CycloNumber::from_rational(m, mobius(m)));
      CHECK(static_cast<i64>(s.coeffs().size()) == euler_phi(m));
    }
  }

  TEST_CASE("embedding") {
    CHECK(CycloNumber::root_of_unity(3, 1).embed_into(6) == CycloNumber::root_of_unity(6, 2));
    CHECK(CycloNumber::one(1).embed_into(12) == CycloNumber::one(12));
    CHECK(CycloNumber::root_of_unity(4, 1).embed_into(12) == CycloNumber::root_of_unity(12, 3));
    CHECK_THROWS(CycloNumber::root_of_unity(4, 1).embed_into(6));
    std::mt19937_64 rng(7);
    for (int m = 1; m <= 12; ++m) {
      const auto x = random_element(rng, m), y = random_element(rng, m);
      CHECK((x * y).embed_into(3 * m) == x.embed_into(3 * m) * y.embed_into(3 * m));
    }
  }

  TEST_CASE("complex approximation") {
    CHECK(close(CycloNumber::root_of_unity(4, 1).to_complex(), {0, 1}));
    CHECK(close(CycloNumber::from_rational(1, -1).to_complex(), {-1, 0}));
    CHECK(close(CycloNumber::root_of_unity(8, 1).to_complex(), std::complex<double>(1, 1) * (std::sqrt(2.0) / 2)));
  }

  TEST_CASE("field axioms on random samples") {
    std::mt19937_64 rng(12345);
    for (int m = 1; m <= 24; ++m)
      for (int trial = 0; trial < 8; ++trial) {
        const auto x = random_element(rng, m), y = random_element(rng, m), z = random_element(rng, m);
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
        CHECK(x * y == y * x);
        CHECK((x + (-x)).is_zero());
        const auto diff = x - x;
        for (const auto& c : diff.coeffs()) CHECK(sgn(c) == 0);
        CHECK(x.conjugate().conjugate() == x);
        CHECK((x * y).conjugate() == x.conjugate() * y.conjugate());
        CHECK((x + y).conjugate() == x.conjugate() + y.conjugate());
        if (!x.is_zero()) CHECK(x * x.inverse() == CycloNumber::one(m));
        CHECK(close((x * y).to_complex(), x.to_complex() * y.to_complex()));
      }
    CHECK_THROWS_AS(CycloNumber::zero(5).inverse(), std::domain_error);
  }

  TEST_CASE("is_zero agrees with the float approximation") {
    std::mt19937_64 rng(99);
    int zeros = 0;
    for (int i = 0; i < 1000; ++i) {
      const int m = 1 + static_cast<int>(rng() % 24);
      // differences of two sparse elements hit zero now and then
      std::uniform_int_distribution<int> pick(0, m - 1);
      const auto x = CycloNumber::root_of_unity(m, pick(rng)) + CycloNumber::root_of_unity(m, pick(rng));
      const auto y = CycloNumber::root_of_unity(m, pick(rng)) + CycloNumber::root_of_unity(m, pick(rng));
      const auto d = x - y;
      zeros += d.is_zero();
      CHECK(d.is_zero() == (std::abs(d.to_complex()) < 1e-9));
    }
    CHECK(zeros > 0);
  }

  TEST_CASE("order mismatch is a usage error") {
    CHECK_THROWS(CycloNumber::one(3) + CycloNumber::one(4));
  }

  TEST_CASE("accumulator matches direct sums") {
    std::mt19937_64 rng(5);
    for (int m : {1, 2, 6, 12, 20}) {
      CycloAccumulator acc(m);
      CycloNumber direct = CycloNumber::zero(m);
      for (int i = 0; i < 30; ++i) {
        const i64 e = static_cast<i64>(rng() % 100) - 50;
        Rational c(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3));
        c.canonicalize();
        acc.add_root(e, c);
        direct += CycloNumber::root_of_unity(m, e).scaled(c);
      }
      CHECK(acc.result() == direct);
    }
  }
}
