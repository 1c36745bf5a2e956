#include "tmtrace/quadratic.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>

namespace tmtrace {

int kronecker(i64 a, i64 b) {
  static const int tab2[8] = {0, 1, 0, -1, 0, -1, 0, 1};
  if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
  if ((a & 1) == 0 && (b & 1) == 0) return 0;
  int v = 0;
  while ((b & 1) == 0) {
    b /= 2;
    ++v;
  }
  int k = (v % 2 == 0) ? 1 : tab2[a & 7];
  if (b < 0) {
    b = -b;
    if (a < 0) k = -k;
  }
  // b odd and positive from here on
  while (true) {
    if (a == 0) return b > 1 ? 0 : k;
    v = 0;
    while ((a & 1) == 0) {
      a /= 2;
      ++v;
    }
    if (v % 2 == 1) k *= tab2[b & 7];
    if (a & b & 2) k = -k;
    const i64 r = a < 0 ? -a : a;
    a = mod(b, r);
    b = r;
  }
}

bool is_fundamental_discriminant(i64 d) {
  if (d == 0 || d == 1) return false;
  const i64 r = mod(d, 4);
  if (r == 1) return is_squarefree(d);
  if (r != 0) return false;
  const i64 m = d / 4;
  const i64 rm = mod(m, 4);
  return (rm == 2 || rm == 3) && is_squarefree(m);
}

DiscriminantSplit split_discriminant(i64 D) {
  if (D >= 0 || (mod(D, 4) != 0 && mod(D, 4) != 1))
    throw std::domain_error("split_discriminant: need D < 0 with D = 0, 1 mod 4");
  DiscriminantSplit out;
  out.D = D;
  i64 ell = 1;
  for (const auto& f : factorize(-D).factors) {
    if (f.p == 2) continue;
    ell *= ipow(f.p, f.e / 2);
  }
  i64 d = D / (ell * ell);
  // strip 4s while the quotient is still a discriminant
  while (mod(d, 4) == 0 && (mod(d / 4, 4) == 0 || mod(d / 4, 4) == 1)) {
    d /= 4;
    ell *= 2;
  }
  out.d = d;
  out.ell = ell;
  return out;
}

int units_count(i64 d) {
  if (d == -3) return 6;
  if (d == -4) return 4;
  return 2;
}

i64 class_number_by_forms(i64 d) {
  if (d >= 0 || !is_fundamental_discriminant(d))
    throw std::domain_error("class number requested for a non-fundamental or nonnegative discriminant " +
                            std::to_string(d));
  const i64 absd = -d;
  i64 h = 0;
  for (i64 a = 1; 3 * a * a <= absd; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      if (mod(b - d, 2) != 0) continue;
      const i64 num = b * b - d;
      if (num % (4 * a) != 0) continue;
      const i64 c = num / (4 * a);
      if (c < a) continue;
      if (b < 0 && a == c) continue;
      ++h;
    }
  }
  return h;
}

i64 class_number_by_character_sum(i64 d) {
  if (d >= 0 || !is_fundamental_discriminant(d))
    throw std::domain_error("class number requested for a non-fundamental or nonnegative discriminant " +
                            std::to_string(d));
  const i64 absd = -d;
  i64 s = 0;
  for (i64 j = 1; j < absd; ++j) s += kronecker(d, j) * j;
  s = std::llabs(s);
  const i64 num = units_count(d) * s;
  if (num % (2 * absd) != 0) throw std::logic_error("class number character sum is not integral");
  return num / (2 * absd);
}

namespace {

struct ClassCache {
  std::shared_mutex mutex;
  std::map<i64, ClassData> entries;  // keyed by |d|
};

ClassCache& class_cache() {
  static ClassCache cache;
  return cache;
}

}  // namespace

ClassData class_data(i64 d) {
  auto& cache = class_cache();
  {
    std::shared_lock lock(cache.mutex);
    auto it = cache.entries.find(-d);
    if (it != cache.entries.end() && it->second.d == d) return it->second;
  }
  ClassData out{d, class_number_by_forms(d), units_count(d)};
  std::unique_lock lock(cache.mutex);
  cache.entries.emplace(-d, out);
  return out;
}

std::vector<ClassData> class_cache_snapshot() {
  auto& cache = class_cache();
  std::shared_lock lock(cache.mutex);
  std::vector<ClassData> out;
  out.reserve(cache.entries.size());
  for (const auto& [key, v] : cache.entries) out.push_back(v);
  return out;
}

void clear_class_cache() {
  auto& cache = class_cache();
  std::unique_lock lock(cache.mutex);
  cache.entries.clear();
}

void load_class_cache(const std::string& path) {
  std::ifstream in(path);
  if (!in) return;
  std::map<i64, ClassData> loaded;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ClassData c;
    char comma1 = 0, comma2 = 0;
    std::istringstream fields(line);
    if (!(fields >> c.d >> comma1 >> c.h >> comma2 >> c.w) || comma1 != ',' || comma2 != ',' || c.d >= 0 ||
        !is_fundamental_discriminant(c.d) || c.w != units_count(c.d)) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed class-number line '" + line + "'");
    }
    loaded[-c.d] = c;
  }
  auto& cache = class_cache();
  std::unique_lock lock(cache.mutex);
  for (const auto& [key, v] : loaded) cache.entries.emplace(key, v);
}

void save_class_cache(const std::string& path) {
  const auto entries = class_cache_snapshot();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write class-number cache " + tmp);
    for (const auto& c : entries) out << c.d << "," << c.h << "," << c.w << "\n";
    if (!out) throw std::runtime_error("error writing class-number cache " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

namespace {

// Root of a quadratic residue a modulo an odd prime p (Tonelli-Shanks).
i64 sqrt_mod_prime(i64 a, i64 p) {
  a = mod(a, p);
  if (a == 0) return 0;
  if (p == 2) return a;
  if (powmod(a, (p - 1) / 2, p) != 1) throw std::domain_error("not a quadratic residue");
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  i64 q = p - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  i64 z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  i64 m = s;
  i64 c = powmod(z, q, p);
  i64 t = powmod(a, q, p);
  i64 r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    i64 i = 0, t2 = t;
    while (t2 != 1) {
      t2 = mulmod(t2, t2, p);
      ++i;
    }
    i64 b = c;
    for (i64 j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

// Unit square root modulo p^e (p odd) or 2^E, then the smallest of the roots.
i64 sqrt_unit(i64 a, i64 p, int e) {
  const i64 n = ipow(p, e);
  if (p != 2) {
    i64 r = sqrt_mod_prime(a, p);
    for (int k = 1; k < e; ++k) {
      // Newton step modulo p^e
      const i64 f = mod(mulmod(r, r, n) - a, n);
      r = mod(r - mulmod(f, invmod(mod(2 * r, n), n), n), n);
    }
    if (mulmod(r, r, n) != mod(a, n)) throw std::logic_error("Hensel lift failed");
    return std::min(r, mod(-r, n));
  }
  if (e <= 2) {
    for (i64 x = 0; x < n; ++x)
      if (mod(x * x - a, n) == 0) return x;
    throw std::domain_error("not a square");
  }
  if (mod(a, 8) != 1) throw std::domain_error("not a square");
  i64 r = 1;
  for (int k = 3; k < e; ++k)
    if (mod(mulmod(r, r, ipow(2, k + 1)) - a, ipow(2, k + 1)) != 0) r += ipow(2, k - 1);
  r = mod(r, n);
  if (mulmod(r, r, n) != mod(a, n)) throw std::logic_error("2-adic lift failed");
  const i64 half = n / 2;
  return std::min({r, mod(-r, n), mod(r + half, n), mod(-r + half, n)});
}

}  // namespace

i64 sqrt_mod_prime_power(i64 a, i64 p, int e) {
  const int E = p == 2 ? e + 2 : e;
  const i64 n = ipow(p, E);
  const i64 r = mod(a, n);
  if (r == 0) return 0;
  try {
    if (r % p != 0) return sqrt_unit(r, p, E);
  } catch (const std::domain_error&) {
    throw std::domain_error(std::to_string(a) + " is not a square modulo " + std::to_string(p) + "^" +
                            std::to_string(E));
  }
  // non-unit: brute force, only reached from tests and small moduli
  for (i64 x = 0; x < n; ++x)
    if (mulmod(x, x, n) == r) return x;
  throw std::domain_error(std::to_string(a) + " is not a square modulo " + std::to_string(p) + "^" +
                          std::to_string(E));
}

}  // namespace tmtrace
