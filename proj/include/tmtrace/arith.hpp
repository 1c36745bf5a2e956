#pragma once

// Elementary exact number theory shared by the trace, oracle and basis code.

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace tmtrace {

using i64 = std::int64_t;

struct PrimePower {
  i64 p;
  int e;
  bool operator==(const PrimePower&) const = default;
};

/// Exact prime factorization, factors sorted by ascending prime.
struct Factorization {
  i64 value = 1;
  std::vector<PrimePower> factors;

  bool divisible_by(i64 p) const;
  int exponent_of(i64 p) const;  // 0 when p does not divide value
};

Factorization factorize(i64 n);

/// Valuation sentinel for nu_p(0); compares greater than every finite value.
inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

/// nu_p(x); kInfiniteValuation when x == 0.
int valuation(i64 p, i64 x);

int mobius(i64 n);
i64 euler_phi(i64 n);
i64 sigma(i64 n);
i64 num_divisors(i64 n);

/// (floor(sqrt(n)), n is a perfect square)
std::pair<i64, bool> integer_sqrt(i64 n);

bool is_prime(i64 n);
bool is_squarefree(i64 n);
i64 ipow(i64 base, int exp);

/// Ascending list of positive divisors.
std::vector<i64> divisors(i64 n);

/// Prime divisors of |n|, ascending.
std::vector<i64> prime_divisors(i64 n);

i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);

/// Least nonnegative residue of a modulo m (m > 0).
inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 mulmod(i64 a, i64 b, i64 m);
i64 powmod(i64 base, i64 exp, i64 m);

/// Inverse of a modulo m; throws std::domain_error when gcd(a, m) != 1.
i64 invmod(i64 a, i64 m);

/// Solve x = r1 (mod m1), x = r2 (mod m2) for possibly non-coprime moduli.
/// Returns (x mod lcm, lcm) or (-1, 0) when inconsistent.
std::pair<i64, i64> crt(i64 r1, i64 m1, i64 r2, i64 m2);

/// Smallest primitive root modulo p^e (p odd) or modulo 2, 4.
i64 smallest_primitive_root(i64 p, int e);

}  // namespace tmtrace
