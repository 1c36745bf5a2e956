#include <doctest.h>

#include "checks.hpp"
#include "tmtrace/oracle.hpp"

using namespace tmtrace;

namespace {

CycloNumber integer(i64 z) { return CycloNumber::from_rational(1, z); }

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("congruence solvers agree") {
    for (i64 N = 1; N <= 60; ++N)
      for (i64 g : divisors(12))
        for (i64 t = -20; t <= 20; t += 3)
          for (i64 n = 1; n <= 20; ++n) CHECK(quadratic_roots_brute(N * g, t, n) == quadratic_roots_crt(N * g, t, n));
  }

  TEST_CASE("examples") {
    const auto triv = [](i64 N) { return DirichletCharacter::trivial(N); };
    CHECK(same_value(trace_full(SpaceSpec{1, 2, triv(1), SpaceKind::Full}, 1), integer(0)));
    CHECK(same_value(trace_full(SpaceSpec{11, 2, triv(11), SpaceKind::Full}, 1), integer(1)));
    CHECK(same_value(trace_full(SpaceSpec{1, 12, triv(1), SpaceKind::Full}, 2), integer(-24)));
    CHECK(same_value(trace_new(SpaceSpec{11, 2, triv(11), SpaceKind::New}, 1), integer(1)));
    CHECK(same_value(trace_new(SpaceSpec{4, 2, triv(4), SpaceKind::New}, 2), integer(0)));
    CHECK(same_value(trace_min_sieved(SpaceSpec{11, 2, triv(11), SpaceKind::Min}, 1), integer(1)));
    for (int k : {2, 4, 6, 8}) {
      const SpaceSpec s{9, k, triv(9), SpaceKind::Min};
      CHECK(same_value(trace_min_sieved(s, 1), trace_min(s, 1)));
    }
    CHECK(trace_new(SpaceSpec{7, 3, triv(7), SpaceKind::New}, 2).is_zero());
  }

  TEST_CASE("full-space dimensions") {
    for (i64 N = 1; N <= 50; ++N) {
      const auto t = trace_full(SpaceSpec{N, 2, DirichletCharacter::trivial(N), SpaceKind::Full}, 1);
      CHECK(same_value(t, integer(checks::genus_dimension(N))));
    }
    for (i64 N = 1; N <= 40; ++N)
      for (const auto& chi : enumerate_characters(N))
        for (int k = 2; k <= 4; ++k) {
          const auto d = trace_full(SpaceSpec{N, k, chi, SpaceKind::Full}, 1).as_rational();
          REQUIRE(d);
          CHECK(d->get_den() == 1);
          CHECK(sgn(*d) >= 0);
        }
  }

  TEST_CASE("old and new forms") {
    for (i64 N = 1; N <= 60; ++N) {
      const auto chars = N <= 36 ? enumerate_characters(N) : std::vector<DirichletCharacter>{DirichletCharacter::trivial(N)};
      for (const auto& chi : chars) {
        const int k = chi.parity() == 1 ? 2 : 3;
        for (i64 n = 1; n <= 10; ++n) {
          if (gcd(n, N) != 1) continue;
          const CycloNumber full = trace_full(SpaceSpec{N, k, chi, SpaceKind::Full}, n);
          const int order = full.order();
          CycloNumber sum = CycloNumber::zero(order);
          for (i64 M : divisors(N)) {
            if (M % chi.conductor() != 0) continue;
            const CycloNumber t = trace_new(SpaceSpec{M, k, chi.at_modulus(M), SpaceKind::New}, n);
            sum += t.embed_into(order).scaled(Rational(num_divisors(N / M)));
          }
          CHECK_MESSAGE(same_value(full, sum), "N=", N, " chi=", chi.label(), " n=", n);
        }
      }
    }
  }

  TEST_CASE("sieved order covers every pair") {
    for (i64 N : {9, 25, 45, 63, 75}) {
      CharacterFilter f;
      f.twist_minimal_only = true;
      for (const auto& chi : enumerate_characters(N, f)) {
        const SpaceSpec s{N, 2, chi, SpaceKind::Min};
        const int order = sieved_order(s);
        CHECK(order % chi.order() == 0);
        for (const auto& pr : all_twist_pairs(N, chi)) {
          CHECK(order % pr.psi.order() == 0);
          CHECK(order % pr.twisted_chi.order() == 0);
        }
      }
    }
  }
}
