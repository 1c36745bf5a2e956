#pragma once

// Dirichlet characters stored as prime-power local components (Conrey labelling).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tmtrace/arith.hpp"
#include "tmtrace/cyclo.hpp"

namespace tmtrace {

/// A character modulo p^e.
///
/// Odd p: chi(g) = exp(2 pi i c / phi(p^e)), g the smallest primitive root mod p^e.
/// p = 2, e >= 3: chi(-1) = (-1)^a, chi(5) = exp(2 pi i c / 2^(e-2)).
/// p = 2, e = 2: chi(-1) = (-1)^a. p = 2, e = 1: trivial.
struct LocalCharacter {
  i64 p = 2;
  int e = 0;
  int a = 0;
  i64 c = 0;

  i64 modulus() const { return ipow(p, e); }
  /// Exponent of the group of values used for c: phi(p^e), or 2^(e-2) / 2 for p = 2.
  i64 value_group_order() const;
  i64 order() const;
  /// s with conductor p^s.
  int conductor_exponent() const;
  bool is_trivial() const { return a == 0 && c == 0; }
  bool is_primitive() const { return conductor_exponent() == e; }

  /// chi(x) as k / value_group_order(); nullopt when p | x.
  std::optional<i64> raw_exponent(i64 x) const;

  /// The same character viewed at modulus p^new_e (requires conductor_exponent() <= new_e).
  LocalCharacter at_exponent(int new_e) const;
  LocalCharacter conj() const;
  LocalCharacter mul(const LocalCharacter& o) const;  // same p and e
  LocalCharacter pow(i64 n) const;
  /// Conrey index modulo p^e.
  i64 conrey_index() const;
  static LocalCharacter from_conrey(i64 p, int e, i64 q);

  bool operator==(const LocalCharacter&) const = default;
};

class DirichletCharacter {
 public:
  DirichletCharacter();  // trivial mod 1
  DirichletCharacter(i64 modulus, std::vector<LocalCharacter> components);

  static DirichletCharacter trivial(i64 modulus);
  /// Conrey character chi_N(q, .); throws std::invalid_argument when gcd(q, N) != 1.
  static DirichletCharacter from_conrey(i64 modulus, i64 index);
  /// Parse "N.q".
  static DirichletCharacter from_label(const std::string& label);

  i64 modulus() const { return modulus_; }
  i64 order() const { return order_; }
  i64 conductor() const { return conductor_; }
  i64 conrey_index() const;
  std::string label() const;
  int parity() const;  // chi(-1) as +-1
  bool is_trivial() const { return order_ == 1; }
  bool is_primitive() const { return conductor_ == modulus_; }
  const std::vector<LocalCharacter>& components() const { return components_; }

  /// Local component at p (trivial mod p^0 when p does not divide the modulus).
  LocalCharacter local_component(i64 p) const;

  /// chi(x) as an exponent k meaning zeta_order^k; nullopt when gcd(x, N) > 1.
  std::optional<i64> exponent(i64 x) const;
  /// chi(x) as an exponent of zeta_ambient (order() must divide ambient).
  std::optional<i64> exponent_in(i64 x, i64 ambient) const;
  CycloNumber eval(i64 x) const;
  CycloNumber eval_in(i64 x, int ambient) const;
  /// chi(a^{-1}); throws std::domain_error when gcd(a, N) != 1.
  CycloNumber eval_inv(i64 a) const;

  DirichletCharacter mul(const DirichletCharacter& o) const;  // moduli may differ: result mod lcm
  DirichletCharacter conj() const;
  DirichletCharacter pow(i64 n) const;
  DirichletCharacter primitive_inducing() const;
  /// The same character at another modulus divisible by the conductor.
  DirichletCharacter at_modulus(i64 modulus) const;

  bool operator==(const DirichletCharacter& o) const;

 private:
  void finalize();

  i64 modulus_ = 1;
  std::vector<LocalCharacter> components_;
  i64 order_ = 1;
  i64 conductor_ = 1;
};

/// The local condition list for twist-minimal characters at one prime.
bool is_twist_minimal(const LocalCharacter& chi);
bool is_twist_minimal(const DirichletCharacter& chi);

struct CharacterFilter {
  std::optional<i64> conductor;
  std::optional<i64> order;
  std::optional<int> parity;
  bool twist_minimal_only = false;
};

/// All characters mod N ordered by Conrey index, filtered.
std::vector<DirichletCharacter> enumerate_characters(i64 modulus, const CharacterFilter& filter = {});

/// Primitive characters of conductor exactly p^s (as characters mod p^s), Conrey order.
std::vector<DirichletCharacter> primitive_characters(i64 conductor);

}  // namespace tmtrace
