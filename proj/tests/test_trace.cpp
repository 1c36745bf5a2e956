#include <doctest.h>

#include <complex>

#include "checks.hpp"
#include "tmtrace/trace.hpp"

using namespace tmtrace;

namespace {

std::vector<DirichletCharacter> minimal(i64 N) {
  CharacterFilter f;
  f.twist_minimal_only = true;
  return enumerate_characters(N, f);
}

CycloNumber as_cyclo(const Integer& z) { return CycloNumber::from_rational(1, Rational(z)); }

}  // namespace

TEST_SUITE("trace") {
  TEST_CASE("weight factor") {
    CHECK(weight_factor(2, 3, 7) == 1);
    CHECK(weight_factor(3, 3, 7) == 3);
    CHECK(weight_factor(4, 1, 2) == -1);
    CHECK_THROWS_AS(weight_factor(4, 4, 4), std::domain_error);
    // against the complex roots of x^2 - t x + n
    for (i64 n = 1; n <= 12; ++n)
      for (i64 t = 0; t * t < 4 * n; ++t)
        for (int k = 2; k <= 12; ++k) {
          const std::complex<double> disc(0, std::sqrt(static_cast<double>(4 * n - t * t)));
          const auto rho = (static_cast<double>(t) + disc) / 2.0;
          const auto g = (std::pow(rho, k - 1) - std::pow(std::conj(rho), k - 1)) / (rho - std::conj(rho));
          CHECK(std::abs(g.real() - weight_factor(k, t, n).get_d()) < 1e-6 * (1 + std::abs(g.real())));
        }
  }

  TEST_CASE("unit local factor") {
    CHECK(local_factor_unit(5, EllipticTermContext::make(1, 1)) == 1);
    CHECK(local_factor_unit(3, EllipticTermContext::make(0, 9)) == 5);    // -36 = -4 * 3^2
    CHECK(local_factor_unit(2, EllipticTermContext::make(0, 28)) == 4);   // -112 = -7 * 4^2
  }

  TEST_CASE("local factor rows") {
    // p odd, s = e = 1, p not dividing n: the two roots of x^2 - t x + n mod p
    for (const auto& chi : primitive_characters(7)) {
      const LocalCharacter lc = chi.local_component(7);
      for (i64 n = 1; n <= 20; ++n) {
        if (n % 7 == 0) continue;
        for (i64 t = -8; t * t < 4 * n; ++t) {
          const auto ctx = EllipticTermContext::make(t, n);
          if (ctx.gamma(7) != 0 || kronecker(ctx.split.d, 7) != 1) continue;
          CycloNumber want = CycloNumber::zero(static_cast<int>(chi.order()));
          for (i64 x = 0; x < 7; ++x)
            if (mod(x * x - t * x + n, 7) == 0) want += chi.eval(x);
          CHECK(local_factor_min(lc, ctx) == want);
        }
      }
    }
    // p | n, s = 0, gamma > 0: (d/p) - 1
    const LocalCharacter triv3{3, 1, 0, 0};
    CHECK(local_factor_min(triv3, EllipticTermContext::make(0, 9)) == CycloNumber::from_rational(1, -2));
    CHECK(local_factor_min(triv3, EllipticTermContext::make(3, 3)) == CycloNumber::from_rational(1, -1));
    // p odd, s < e, gamma < e - 2: zero
    bool found = false;
    for (const auto& chi : minimal(81)) {
      if (chi.conductor() == 81) continue;
      found = true;
      CHECK(local_factor_min(chi.local_component(3), EllipticTermContext::make(1, 1)).is_zero());
    }
    CHECK(found);
  }

  TEST_CASE("level one") {
    const SpaceSpec s{1, 12, DirichletCharacter::trivial(1), SpaceKind::Min};
    const auto tau = checks::tau_by_product(30);
    for (i64 n = 1; n <= 30; ++n) CHECK(trace_min(s, n) == as_cyclo(tau[n]));
    CHECK(trace_min(s, 2) == as_cyclo(-24));
    for (i64 n = 1; n <= 5; ++n) CHECK(trace_min(SpaceSpec{4, 3, DirichletCharacter::trivial(4), SpaceKind::Min}, n).is_zero());
  }

  TEST_CASE("preconditions") {
    CHECK_THROWS_AS(trace_min(SpaceSpec{16, 2, DirichletCharacter::trivial(16), SpaceKind::Min}, 1), std::invalid_argument);
    CHECK_THROWS_AS(trace_min(SpaceSpec{11, 1, DirichletCharacter::trivial(11), SpaceKind::Min}, 1), std::invalid_argument);
    CHECK_THROWS_AS(trace_min(SpaceSpec{12, 2, DirichletCharacter::trivial(11), SpaceKind::Min}, 1), std::invalid_argument);
    CHECK(parse_space_kind("full") == SpaceKind::Full);
    CHECK_THROWS_AS(parse_space_kind("old"), std::invalid_argument);
  }

  TEST_CASE("gates") {
    for (i64 N = 1; N <= 60; ++N)
      for (const auto& chi : minimal(N))
        for (int k = 2; k <= 5; ++k)
          for (i64 n = 1; n <= 30; ++n) {
            const i64 q = N / chi.conductor();
            const bool open = chi.parity() == (k % 2 == 0 ? 1 : -1) && is_squarefree(gcd(gcd(q * q, n * n), N));
            CHECK(trace_gates_pass(N, chi, k, n) == open);
          }
  }

  TEST_CASE("conjugation, dimensions and the parallel kernel") {
    for (i64 N = 1; N <= 60; ++N)
      for (const auto& chi : minimal(N)) {
        const int k = chi.parity() == 1 ? 4 : 3;
        const SpaceSpec s{N, k, chi, SpaceKind::Min};
        const SpaceSpec c{N, k, chi.conj(), SpaceKind::Min};
        const auto range = trace_min_range(s, 12);
        const auto span = trace_min_span(s, 5, 12);
        const auto dim = range[0].as_rational();
        REQUIRE(dim);
        CHECK(dim->get_den() == 1);
        CHECK(sgn(*dim) >= 0);
        for (i64 n = 1; n <= 12; ++n) {
          const CycloNumber t = trace_min_serial(s, n);
          CHECK(range[n - 1] == t);
          CHECK(trace_min(s, n) == t);
          if (n >= 5) CHECK(span[n - 5] == t);
          CHECK(trace_min(c, n).embed_into(t.order()) == t.conjugate());
        }
      }
  }

  TEST_CASE("u-sign invariance") {
    TraceOptions flipped;
    flipped.negate_u = true;
    for (i64 N : {7, 9, 13, 25, 27, 32, 45, 49, 64, 75})
      for (const auto& chi : minimal(N))
        for (int k = 2; k <= 3; ++k) {
          const SpaceSpec s{N, k, chi, SpaceKind::Min};
          for (i64 n = 1; n <= 20; ++n) CHECK(trace_min(s, n) == trace_min(s, n, flipped));
        }
  }
}
