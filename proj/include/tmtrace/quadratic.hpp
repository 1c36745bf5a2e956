#pragma once

// Imaginary quadratic data for the elliptic terms: Kronecker symbols,
// discriminant splitting, class numbers and square roots modulo prime powers.

#include <string>
#include <vector>

#include "tmtrace/arith.hpp"

namespace tmtrace {

/// Kronecker symbol (a/b), full extension to b = 2, b <= 0 and negative a.
int kronecker(i64 a, i64 b);

bool is_fundamental_discriminant(i64 d);

struct DiscriminantSplit {
  i64 D = 0;    // t^2 - 4n
  i64 d = 0;    // fundamental
  i64 ell = 1;  // D = d * ell^2
};

/// Throws std::domain_error unless D < 0 and D = 0, 1 mod 4.
DiscriminantSplit split_discriminant(i64 D);

struct ClassData {
  i64 d = 0;
  i64 h = 0;
  int w = 2;
  bool operator==(const ClassData&) const = default;
};

/// Reduced-form count; cached. Throws std::domain_error for non-fundamental or nonnegative d.
ClassData class_data(i64 d);

/// Uncached reduced-form count.
i64 class_number_by_forms(i64 d);

/// h(d) = w / (2|d|) * |sum_{j < |d|} (d/j) j|, the independent check.
i64 class_number_by_character_sum(i64 d);

int units_count(i64 d);

/// Every cached entry, sorted by |d|.
std::vector<ClassData> class_cache_snapshot();
/// Merge lines "d,h,w" from a file into the cache. Missing file is not an error.
/// Throws std::runtime_error on malformed lines.
void load_class_cache(const std::string& path);
/// Write the cache atomically (temp file + rename), sorted by |d|.
void save_class_cache(const std::string& path);
void clear_class_cache();

/// Smallest nonnegative u with u^2 = a mod p^e, or mod 2^(e+2) when p = 2.
/// Throws std::domain_error when a is not a square in that ring.
i64 sqrt_mod_prime_power(i64 a, i64 p, int e);

}  // namespace tmtrace
