#include "tmtrace/arith.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace tmtrace {

bool Factorization::divisible_by(i64 p) const { return exponent_of(p) > 0; }

int Factorization::exponent_of(i64 p) const {
  for (const auto& f : factors)
    if (f.p == p) return f.e;
  return 0;
}

Factorization factorize(i64 n) {
  if (n < 1) throw std::domain_error("factorize: n must be positive");
  Factorization out;
  out.value = n;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.factors.push_back({p, e});
  }
  if (n > 1) out.factors.push_back({n, 1});
  return out;
}

int valuation(i64 p, i64 x) {
  if (x == 0) return kInfiniteValuation;
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

int mobius(i64 n) {
  int mu = 1;
  for (const auto& f : factorize(n).factors) {
    if (f.e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

i64 euler_phi(i64 n) {
  i64 phi = 1;
  for (const auto& f : factorize(n).factors) phi *= (f.p - 1) * ipow(f.p, f.e - 1);
  return phi;
}

i64 sigma(i64 n) {
  i64 s = 1;
  for (const auto& f : factorize(n).factors) {
    i64 term = 1, pk = 1;
    for (int i = 0; i < f.e; ++i) {
      pk *= f.p;
      term += pk;
    }
    s *= term;
  }
  return s;
}

i64 num_divisors(i64 n) {
  i64 c = 1;
  for (const auto& f : factorize(n).factors) c *= f.e + 1;
  return c;
}

std::pair<i64, bool> integer_sqrt(i64 n) {
  if (n < 0) throw std::domain_error("integer_sqrt: negative argument");
  i64 r = static_cast<i64>(__builtin_sqrtl(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return {r, r * r == n};
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

bool is_squarefree(i64 n) {
  if (n == 0) return false;
  for (const auto& f : factorize(std::llabs(n)).factors)
    if (f.e > 1) return false;
  return true;
}

i64 ipow(i64 base, int exp) {
  i64 r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::vector<i64> divisors(i64 n) {
  std::vector<i64> out{1};
  for (const auto& f : factorize(n).factors) {
    const std::size_t base = out.size();
    i64 pk = 1;
    for (int i = 1; i <= f.e; ++i) {
      pk *= f.p;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<i64> prime_divisors(i64 n) {
  std::vector<i64> out;
  if (n == 0) return out;
  for (const auto& f : factorize(std::llabs(n)).factors) out.push_back(f.p);
  return out;
}

i64 gcd(i64 a, i64 b) {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b != 0) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i64 lcm(i64 a, i64 b) {
  if (a == 0 || b == 0) return 0;
  return std::llabs(a / gcd(a, b) * b);
}

i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>(static_cast<__int128>(mod(a, m)) * mod(b, m) % m);
}

i64 powmod(i64 base, i64 exp, i64 m) {
  if (m == 1) return 0;
  i64 r = 1;
  base = mod(base, m);
  while (exp > 0) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

namespace {
// (g, x, y) with a*x + b*y = g
void ext_gcd(i64 a, i64 b, i64& g, i64& x, i64& y) {
  i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    i64 q = a / b;
    i64 t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  g = a;
  x = x0;
  y = y0;
}
}  // namespace

i64 invmod(i64 a, i64 m) {
  if (m == 1) return 0;
  i64 g, x, y;
  ext_gcd(mod(a, m), m, g, x, y);
  if (g != 1) throw std::domain_error("invmod: argument not invertible");
  return mod(x, m);
}

std::pair<i64, i64> crt(i64 r1, i64 m1, i64 r2, i64 m2) {
  i64 g, x, y;
  ext_gcd(m1, m2, g, x, y);
  if (mod(r2 - r1, g) != 0) return {-1, 0};
  const i64 l = m1 / g * m2;
  // r1 + m1 * ((r2 - r1)/g * x mod m2/g)
  const i64 m2g = m2 / g;
  const i64 k = mulmod(mod((r2 - r1) / g, m2g), mod(x, m2g), m2g);
  return {mod(r1 + static_cast<i64>(static_cast<__int128>(m1) * k % l), l), l};
}

i64 smallest_primitive_root(i64 p, int e) {
  const i64 n = ipow(p, e);
  if (n <= 2) return n == 2 ? 1 : 0;
  if (n == 4) return 3;
  if (p == 2) throw std::domain_error("smallest_primitive_root: 2^e with e >= 3 is not cyclic");
  const i64 phi = (p - 1) * ipow(p, e - 1);
  const auto qs = prime_divisors(phi);
  for (i64 g = 2; g < n; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (i64 q : qs)
      if (powmod(g, phi / q, n) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw std::logic_error("no primitive root found");
}

}  // namespace tmtrace
