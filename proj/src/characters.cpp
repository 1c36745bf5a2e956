#include "tmtrace/characters.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>

namespace tmtrace {

namespace {

// Discrete logarithms modulo p^e. Odd p: log base the smallest primitive root.
// p = 2: x = (-1)^s 5^r packed as s + 2r. Non-units map to -1.
using DlogTable = std::vector<std::int32_t>;

std::shared_ptr<const DlogTable> build_dlog(i64 p, int e) {
  const i64 n = ipow(p, e);
  auto table = std::make_shared<DlogTable>(n, -1);
  if (n == 1) {
    (*table)[0] = 0;
    return table;
  }
  if (p != 2) {
    const i64 g = smallest_primitive_root(p, e);
    const i64 phi = (p - 1) * ipow(p, e - 1);
    i64 x = 1;
    for (i64 k = 0; k < phi; ++k) {
      (*table)[x] = static_cast<std::int32_t>(k);
      x = x * g % n;
    }
    return table;
  }
  if (e == 1) {
    (*table)[1] = 0;
    return table;
  }
  if (e == 2) {
    (*table)[1] = 0;
    (*table)[3] = 1;
    return table;
  }
  const i64 half = ipow(2, e - 2);
  i64 x = 1;
  for (i64 r = 0; r < half; ++r) {
    (*table)[x] = static_cast<std::int32_t>(2 * r);
    (*table)[n - x] = static_cast<std::int32_t>(2 * r + 1);
    x = x * 5 % n;
  }
  return table;
}

const DlogTable& dlog_table(i64 p, int e) {
  static std::shared_mutex mutex;
  static std::map<std::pair<i64, int>, std::shared_ptr<const DlogTable>> cache;
  const auto key = std::make_pair(p, e);
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto built = build_dlog(p, e);
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(built));
  return *it->second;
}

}  // namespace

i64 LocalCharacter::value_group_order() const {
  if (e == 0) return 1;
  if (p != 2) return (p - 1) * ipow(p, e - 1);
  if (e == 1) return 1;
  if (e == 2) return 2;
  return std::max<i64>(2, ipow(2, e - 2));
}

i64 LocalCharacter::order() const {
  const i64 L = value_group_order();
  if (p != 2) return L / gcd(c, L);
  i64 ord = a ? 2 : 1;
  if (e >= 3) {
    const i64 five = ipow(2, e - 2);
    ord = lcm(ord, five / gcd(c, five));
  }
  return ord;
}

int LocalCharacter::conductor_exponent() const {
  if (e == 0) return 0;
  if (p != 2) {
    if (mod(c, value_group_order()) == 0) return 0;
    return 1 + valuation(p, order());
  }
  if (e >= 3) {
    const i64 five = ipow(2, e - 2);
    const i64 ord5 = five / gcd(c, five);
    if (ord5 > 1) return valuation(2, ord5) + 2;
  }
  return a ? 2 : 0;
}

std::optional<i64> LocalCharacter::raw_exponent(i64 x) const {
  if (e == 0) return 0;
  const i64 n = modulus();
  const std::int32_t d = dlog_table(p, e)[mod(x, n)];
  if (d < 0) return std::nullopt;
  const i64 L = value_group_order();
  if (p != 2) return static_cast<i64>(static_cast<__int128>(c) * d % L);
  const i64 s = d & 1;
  const i64 r = d >> 1;
  return mod(a * s * (L / 2) + static_cast<i64>(static_cast<__int128>(c) * r % L), L);
}

LocalCharacter LocalCharacter::at_exponent(int new_e) const {
  if (new_e == e) return *this;
  if (conductor_exponent() > new_e)
    throw std::invalid_argument("LocalCharacter::at_exponent: conductor does not divide new modulus");
  LocalCharacter out{p, new_e, 0, 0};
  if (new_e == 0 || is_trivial()) return out;
  if (p != 2) {
    const i64 g = smallest_primitive_root(p, new_e);
    const i64 v = *raw_exponent(g);
    const i64 L_old = value_group_order();
    const i64 L_new = out.value_group_order();
    const __int128 num = static_cast<__int128>(v) * L_new;
    if (num % L_old != 0) throw std::logic_error("LocalCharacter::at_exponent: non-integral exponent");
    out.c = static_cast<i64>(num / L_old);
    return out;
  }
  out.a = new_e >= 2 ? a : 0;
  if (e >= 3 && new_e >= 3) {
    const __int128 num = static_cast<__int128>(c) * ipow(2, new_e - 2);
    const i64 den = ipow(2, e - 2);
    if (num % den != 0) throw std::logic_error("LocalCharacter::at_exponent: non-integral exponent");
    out.c = static_cast<i64>(num / den);
  }
  return out;
}

LocalCharacter LocalCharacter::conj() const { return pow(-1); }

LocalCharacter LocalCharacter::mul(const LocalCharacter& o) const {
  if (p != o.p || e != o.e) throw std::invalid_argument("LocalCharacter::mul: mismatched moduli");
  LocalCharacter out = *this;
  out.a = (a + o.a) % 2;
  const i64 L = p == 2 ? (e >= 3 ? ipow(2, e - 2) : 1) : value_group_order();
  out.c = mod(c + o.c, L);
  return out;
}

LocalCharacter LocalCharacter::pow(i64 n) const {
  LocalCharacter out = *this;
  out.a = static_cast<int>(mod(a * n, 2));
  const i64 L = p == 2 ? (e >= 3 ? ipow(2, e - 2) : 1) : value_group_order();
  out.c = static_cast<i64>(mod(static_cast<i64>(static_cast<__int128>(c) * mod(n, L) % L), L));
  return out;
}

i64 LocalCharacter::conrey_index() const {
  const i64 n = modulus();
  if (n == 1) return 1;
  if (p != 2) return powmod(smallest_primitive_root(p, e), c, n);
  if (e == 1) return 1;
  i64 q = e >= 3 ? powmod(5, c, n) : 1;
  if (a) q = n - q;
  return q;
}

LocalCharacter LocalCharacter::from_conrey(i64 p, int e, i64 q) {
  LocalCharacter out{p, e, 0, 0};
  if (e == 0) return out;
  const std::int32_t d = dlog_table(p, e)[mod(q, ipow(p, e))];
  if (d < 0) throw std::invalid_argument("Conrey index not coprime to modulus");
  if (p != 2) {
    out.c = d;
  } else if (e >= 2) {
    out.a = d & 1;
    out.c = e >= 3 ? (d >> 1) : 0;
  }
  return out;
}

DirichletCharacter::DirichletCharacter() { finalize(); }

DirichletCharacter::DirichletCharacter(i64 modulus, std::vector<LocalCharacter> components)
    : modulus_(modulus), components_(std::move(components)) {
  i64 prod = 1;
  for (const auto& lc : components_) prod *= lc.modulus();
  if (prod != modulus_) throw std::invalid_argument("DirichletCharacter: component moduli do not multiply to modulus");
  finalize();
}

void DirichletCharacter::finalize() {
  std::erase_if(components_, [](const LocalCharacter& lc) { return lc.e == 0; });
  std::sort(components_.begin(), components_.end(),
            [](const LocalCharacter& x, const LocalCharacter& y) { return x.p < y.p; });
  order_ = 1;
  conductor_ = 1;
  for (const auto& lc : components_) {
    order_ = lcm(order_, lc.order());
    conductor_ *= ipow(lc.p, lc.conductor_exponent());
  }
}

DirichletCharacter DirichletCharacter::trivial(i64 modulus) {
  std::vector<LocalCharacter> comps;
  for (const auto& f : factorize(modulus).factors) comps.push_back({f.p, f.e, 0, 0});
  return DirichletCharacter(modulus, std::move(comps));
}

DirichletCharacter DirichletCharacter::from_conrey(i64 modulus, i64 index) {
  if (modulus < 1) throw std::invalid_argument("character modulus must be positive");
  if (gcd(index, modulus) != 1) {
    std::ostringstream msg;
    msg << "Conrey index " << index << " is not coprime to modulus " << modulus;
    throw std::invalid_argument(msg.str());
  }
  std::vector<LocalCharacter> comps;
  for (const auto& f : factorize(modulus).factors) comps.push_back(LocalCharacter::from_conrey(f.p, f.e, index));
  return DirichletCharacter(modulus, std::move(comps));
}

DirichletCharacter DirichletCharacter::from_label(const std::string& label) {
  const auto dot = label.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == label.size())
    throw std::invalid_argument("character label must look like N.q, got '" + label + "'");
  std::size_t used = 0;
  i64 n = 0, q = 0;
  try {
    n = std::stoll(label.substr(0, dot), &used);
    if (used != dot) throw std::invalid_argument("");
    const std::string rest = label.substr(dot + 1);
    q = std::stoll(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("character label must look like N.q, got '" + label + "'");
  }
  if (n < 1 || q < 1) throw std::invalid_argument("character label must have positive N and q: '" + label + "'");
  return from_conrey(n, q);
}

i64 DirichletCharacter::conrey_index() const {
  i64 q = 0, m = 1;
  for (const auto& lc : components_) {
    auto [x, l] = crt(q, m, lc.conrey_index(), lc.modulus());
    q = x;
    m = l;
  }
  return modulus_ == 1 ? 1 : q;
}

std::string DirichletCharacter::label() const {
  return std::to_string(modulus_) + "." + std::to_string(conrey_index());
}

int DirichletCharacter::parity() const {
  const auto k = exponent(-1);
  return (k && *k != 0) ? -1 : 1;
}

LocalCharacter DirichletCharacter::local_component(i64 p) const {
  for (const auto& lc : components_)
    if (lc.p == p) return lc;
  return LocalCharacter{p, 0, 0, 0};
}

std::optional<i64> DirichletCharacter::exponent(i64 x) const {
  i64 total = 0;
  for (const auto& lc : components_) {
    const auto v = lc.raw_exponent(x);
    if (!v) return std::nullopt;
    // v / L as a multiple of 1 / order_
    const i64 L = lc.value_group_order();
    const __int128 num = static_cast<__int128>(*v) * order_;
    total += static_cast<i64>(num / L);
  }
  return mod(total, order_);
}

std::optional<i64> DirichletCharacter::exponent_in(i64 x, i64 ambient) const {
  if (ambient % order_ != 0) throw std::invalid_argument("exponent_in: character order does not divide ambient order");
  const auto k = exponent(x);
  if (!k) return std::nullopt;
  return *k * (ambient / order_);
}

CycloNumber DirichletCharacter::eval(i64 x) const { return eval_in(x, static_cast<int>(order_)); }

CycloNumber DirichletCharacter::eval_in(i64 x, int ambient) const {
  const auto k = exponent_in(x, ambient);
  if (!k) return CycloNumber::zero(ambient);
  return CycloNumber::root_of_unity(ambient, *k);
}

CycloNumber DirichletCharacter::eval_inv(i64 a) const {
  if (gcd(a, modulus_) != 1) throw std::domain_error("eval_inv: argument not coprime to modulus");
  return eval(invmod(a, modulus_));
}

DirichletCharacter DirichletCharacter::at_modulus(i64 modulus) const {
  if (modulus % conductor_ != 0) {
    std::ostringstream msg;
    msg << "character " << label() << " (conductor " << conductor_ << ") cannot be taken modulo " << modulus;
    throw std::invalid_argument(msg.str());
  }
  if (modulus == modulus_) return *this;
  std::vector<LocalCharacter> comps;
  for (const auto& f : factorize(modulus).factors) comps.push_back(local_component(f.p).at_exponent(f.e));
  return DirichletCharacter(modulus, std::move(comps));
}

DirichletCharacter DirichletCharacter::mul(const DirichletCharacter& o) const {
  const i64 m = lcm(modulus_, o.modulus_);
  const DirichletCharacter x = at_modulus(m);
  const DirichletCharacter y = o.at_modulus(m);
  std::vector<LocalCharacter> comps;
  for (std::size_t i = 0; i < x.components_.size(); ++i) comps.push_back(x.components_[i].mul(y.components_[i]));
  return DirichletCharacter(m, std::move(comps));
}

DirichletCharacter DirichletCharacter::conj() const { return pow(-1); }

DirichletCharacter DirichletCharacter::pow(i64 n) const {
  std::vector<LocalCharacter> comps;
  for (const auto& lc : components_) comps.push_back(lc.pow(n));
  return DirichletCharacter(modulus_, std::move(comps));
}

DirichletCharacter DirichletCharacter::primitive_inducing() const { return at_modulus(conductor_); }

bool DirichletCharacter::operator==(const DirichletCharacter& o) const {
  return modulus_ == o.modulus_ && components_ == o.components_;
}

bool is_twist_minimal(const LocalCharacter& chi) {
  const i64 p = chi.p;
  const int e = chi.e;
  if (e == 0) return true;
  const int s = chi.conductor_exponent();
  if (s == e) return true;
  if (p > 2) {
    if (chi.is_trivial()) return true;
    return chi.order() == ipow(2, valuation(2, p - 1));
  }
  if (s == e / 2) return true;
  if (s == 2 && e > 3 && e % 2 == 1) return true;
  if (chi.is_trivial() && (e % 2 == 1 || e == 2)) return true;
  return false;
}

bool is_twist_minimal(const DirichletCharacter& chi) {
  for (const auto& lc : chi.components())
    if (!is_twist_minimal(lc)) return false;
  return true;
}

std::vector<DirichletCharacter> enumerate_characters(i64 modulus, const CharacterFilter& filter) {
  std::vector<DirichletCharacter> out;
  for (i64 q = 1; q <= modulus; ++q) {
    if (gcd(q, modulus) != 1) continue;
    auto chi = DirichletCharacter::from_conrey(modulus, q);
    if (filter.conductor && chi.conductor() != *filter.conductor) continue;
    if (filter.order && chi.order() != *filter.order) continue;
    if (filter.parity && chi.parity() != *filter.parity) continue;
    if (filter.twist_minimal_only && !is_twist_minimal(chi)) continue;
    out.push_back(std::move(chi));
  }
  return out;
}

std::vector<DirichletCharacter> primitive_characters(i64 conductor) {
  CharacterFilter f;
  f.conductor = conductor;
  return enumerate_characters(conductor, f);
}

}  // namespace tmtrace
