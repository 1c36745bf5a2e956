#include "tmtrace/basis.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>

#include "tmtrace/oracle.hpp"

namespace tmtrace {

QExpansion QExpansion::zero(const SpaceSpec& spec, i64 B, int order) {
  QExpansion f;
  f.spec = spec;
  f.B = B;
  f.order = order;
  f.coeffs.assign(B > 0 ? B : 0, CycloNumber::zero(order));
  return f;
}

const CycloNumber& QExpansion::at(i64 n) const {
  if (n < 1 || n > B) throw std::out_of_range("q-expansion index " + std::to_string(n) + " outside 1.." + std::to_string(B));
  return coeffs[n - 1];
}

QExpansion QExpansion::embedded(int new_order) const {
  QExpansion f = *this;
  f.order = new_order;
  for (auto& c : f.coeffs) c = c.embed_into(new_order);
  return f;
}

QExpansion trace_form(const SpaceSpec& spec, i64 B) {
  if (spec.kind != SpaceKind::Min) throw std::invalid_argument("trace_form: space kind must be min");
  QExpansion f;
  f.spec = spec;
  f.B = B;
  f.order = spec.value_order();
  f.coeffs = trace_min_range(spec, B);
  return f;
}

QExpansion trace_form_new_oracle(const SpaceSpec& spec, i64 B) {
  QExpansion f = QExpansion::zero(spec, B, spec.value_order());
  for (i64 n = 1; n <= B; ++n) f.coeffs[n - 1] = trace_new(spec, n);
  return f;
}

namespace {

Integer int_pow(i64 base, int e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), Integer(base).get_mpz_t(), e);
  return out;
}

// (T_n a)_j for j = 1..count, where a(i) returns a_i in Q(zeta_order)
template <class Coef>
std::vector<CycloNumber> hecke_row(i64 n, i64 count, const DirichletCharacter& chi, int k, int order, Coef a) {
  std::vector<CycloNumber> out;
  out.reserve(count);
  for (i64 j = 1; j <= count; ++j) {
    CycloAccumulator acc(order);
    for (i64 d : divisors(gcd(j, n))) {
      const auto ex = chi.exponent_in(d, order);
      if (!ex) continue;
      const CycloNumber& c = a(j * n / (d * d));
      if (c.is_zero()) continue;
      const Rational w(int_pow(d, k - 1));
      const auto& cc = c.coeffs();
      for (std::size_t i = 0; i < cc.size(); ++i)
        if (sgn(cc[i]) != 0) acc.add_root(static_cast<i64>(i) + *ex, cc[i] * w);
    }
    out.push_back(acc.result());
  }
  return out;
}

}  // namespace

QExpansion hecke_apply(i64 n, const QExpansion& f) {
  if (n < 1) throw std::invalid_argument("hecke_apply: n must be positive");
  const int order = static_cast<int>(lcm(f.order, f.spec.chi.order()));
  const QExpansion g = order == f.order ? f : f.embedded(order);
  QExpansion out;
  out.spec = f.spec;
  out.B = f.B / n;
  out.order = order;
  out.coeffs = hecke_row(n, out.B, f.spec.chi, f.spec.k, order, [&](i64 i) -> const CycloNumber& { return g.at(i); });
  return out;
}

QExpansion twist_qexp(const QExpansion& f, const DirichletCharacter& psi, const std::optional<SpaceSpec>& target) {
  const int order = static_cast<int>(lcm(f.order, psi.order()));
  QExpansion out = QExpansion::zero(f.spec, f.B, order);
  if (target) {
    out.spec = *target;
  } else {
    out.spec.chi = f.spec.chi.mul(psi.pow(2));
    out.spec.N = out.spec.chi.modulus();
  }
  for (i64 n = 1; n <= f.B; ++n) {
    const auto ex = psi.exponent_in(n, order);
    if (!ex) continue;
    out.coeffs[n - 1] = f.at(n).embed_into(order) * CycloNumber::root_of_unity(order, *ex);
  }
  return out;
}

QExpansion lift(const QExpansion& f, i64 d, const std::optional<SpaceSpec>& target) {
  if (d < 1) throw std::invalid_argument("lift: d must be positive");
  QExpansion out = QExpansion::zero(f.spec, f.B, f.order);
  if (target) {
    out.spec = *target;
  } else {
    out.spec.N = f.spec.N * d;
    out.spec.chi = f.spec.chi.at_modulus(out.spec.N);
  }
  for (i64 n = 1; n * d <= f.B; ++n) out.coeffs[n * d - 1] = f.at(n);
  return out;
}

i64 sturm_bound(const SpaceSpec& spec) {
  i64 index = spec.N;
  for (i64 p : prime_divisors(spec.N)) index = index / p * (p + 1);
  const i64 num = spec.k * index;
  return (num + 11) / 12;
}

namespace {

i64 as_dimension(const CycloNumber& x, const std::string& what) {
  const auto q = x.as_rational();
  if (!q || q->get_den() != 1 || sgn(*q) < 0)
    throw std::logic_error(what + ": Tr T_1 is not a nonnegative integer: " + x.to_string());
  return q->get_num().get_si();
}

}  // namespace

i64 space_dimension(const SpaceSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case SpaceKind::Min: {
      if (is_twist_minimal(spec.chi)) return as_dimension(trace_min(spec, 1), "min space");
      return as_dimension(trace_min(nonminimal_bridge(spec).minimal, 1), "min space");
    }
    case SpaceKind::New:
      return as_dimension(trace_new(spec, 1), "new space");
    case SpaceKind::Full:
      return as_dimension(trace_full(spec, 1), "full space");
  }
  return 0;
}

std::string BasisRow::label() const {
  std::ostringstream out;
  out << "T_" << m << " of " << (from_new_trace_form ? "new" : "min") << "(" << level << "," << source_chi << ")";
  if (psi != "1.1") out << " twisted by conj(" << psi << ")";
  if (d != 1) out << " at " << d << "z";
  return out.str();
}

namespace {

// Incremental row echelon form with unit pivots.
class Echelon {
 public:
  explicit Echelon(int order) : order_(order) {}

  bool insert(std::vector<CycloNumber> row) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const int pc = pivots_[i];
      if (row[pc].is_zero()) continue;
      const CycloNumber f = row[pc];
      for (std::size_t j = pc; j < row.size(); ++j)
        if (!rows_[i][j].is_zero()) row[j] -= f * rows_[i][j];
    }
    int pc = -1;
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!row[j].is_zero()) {
        pc = static_cast<int>(j);
        break;
      }
    if (pc < 0) return false;
    const CycloNumber inv = row[pc].inverse();
    for (std::size_t j = pc; j < row.size(); ++j)
      if (!row[j].is_zero()) row[j] *= inv;
    rows_.push_back(std::move(row));
    pivots_.push_back(pc);
    return true;
  }

  i64 rank() const { return static_cast<i64>(rows_.size()); }

 private:
  int order_;
  std::vector<std::vector<CycloNumber>> rows_;
  std::vector<int> pivots_;
};

// Trace-form coefficients computed on demand.
class LazyTraceForm {
 public:
  LazyTraceForm(SpaceSpec spec, bool new_oracle) : spec_(std::move(spec)), new_oracle_(new_oracle) {}

  const CycloNumber& at(i64 n) {
    ensure(n);
    return a_[n - 1];
  }

  void ensure(i64 n) {
    const i64 have = static_cast<i64>(a_.size());
    if (n <= have) return;
    const i64 want = std::max({n, 2 * have, i64{32}});
    if (new_oracle_) {
      for (i64 i = have + 1; i <= want; ++i) a_.push_back(trace_new(spec_, i));
    } else {
      auto more = trace_min_span(spec_, have + 1, want);
      for (auto& x : more) a_.push_back(std::move(x));
    }
  }

  const SpaceSpec& spec() const { return spec_; }
  bool new_oracle() const { return new_oracle_; }

 private:
  SpaceSpec spec_;
  bool new_oracle_;
  std::vector<CycloNumber> a_;
};

struct Generator {
  std::shared_ptr<LazyTraceForm> form;
  DirichletCharacter psi;  // primitive; the twist applied is conj(psi)
  std::vector<i64> lifts;
};

std::shared_ptr<LazyTraceForm> form_for(std::map<std::pair<i64, i64>, std::shared_ptr<LazyTraceForm>>& forms,
                                        const SpaceSpec& spec, bool new_oracle) {
  const auto key = std::make_pair(spec.N, new_oracle ? -spec.chi.conrey_index() : spec.chi.conrey_index());
  auto it = forms.find(key);
  if (it != forms.end()) return it->second;
  auto f = std::make_shared<LazyTraceForm>(spec, new_oracle);
  forms.emplace(key, f);
  return f;
}

}  // namespace

i64 exact_rank(const std::vector<std::vector<CycloNumber>>& rows) {
  if (rows.empty()) return 0;
  Echelon ech(rows.front().empty() ? 1 : rows.front().front().order());
  for (const auto& r : rows) ech.insert(r);
  return ech.rank();
}

BasisMatrix basis_for(const SpaceSpec& spec, i64 B) {
  spec.validate();
  if (B < 1) throw std::invalid_argument("basis truncation must be positive");
  if (spec.kind == SpaceKind::Min && !is_twist_minimal(spec.chi))
    throw std::invalid_argument("basis for min spaces needs a twist-minimal character; " + spec.chi.label() + " is not");

  BasisMatrix out;
  out.spec = spec;
  out.B = B;
  out.target_dimension = space_dimension(spec);

  std::map<std::pair<i64, i64>, std::shared_ptr<LazyTraceForm>> forms;
  std::vector<Generator> gens;
  auto add_pairs = [&](i64 L, const DirichletCharacter& chiL, std::vector<i64> lifts) {
    if (!is_twist_minimal(chiL)) {
      const SpaceSpec s{L, spec.k, chiL, SpaceKind::New};
      gens.push_back({form_for(forms, s, true), DirichletCharacter(), std::move(lifts)});
      return;
    }
    for (const auto& pair : twist_pairs(L, chiL)) {
      const SpaceSpec s{pair.M, spec.k, pair.twisted_chi, SpaceKind::Min};
      gens.push_back({form_for(forms, s, false), pair.psi, lifts});
    }
  };
  switch (spec.kind) {
    case SpaceKind::Min:
      gens.push_back({form_for(forms, spec, false), DirichletCharacter(), {1}});
      break;
    case SpaceKind::New:
      add_pairs(spec.N, spec.chi, {1});
      break;
    case SpaceKind::Full:
      for (i64 L : divisors(spec.N))
        if (L % spec.chi.conductor() == 0) add_pairs(L, spec.chi.at_modulus(L), divisors(spec.N / L));
      break;
  }

  i64 order = spec.chi.order();
  for (const auto& g : gens) order = lcm(order, lcm(g.psi.order(), g.form->spec().chi.order()));
  out.order = static_cast<int>(order);
  const int A = out.order;

  Echelon ech(A);
  for (i64 m = 1; ech.rank() < out.target_dimension; ++m) {
    if (m > B)
      throw RankNotReached("rank " + std::to_string(ech.rank()) + " of " + std::to_string(out.target_dimension) +
                           " after sweeping m up to " + std::to_string(B));
    for (const auto& g : gens) {
      const SpaceSpec& src = g.form->spec();
      g.form->ensure(m * B);
      auto row = hecke_row(m, B, src.chi, src.k, A, [&](i64 i) { return g.form->at(i).embed_into(A); });
      // twist by conj(psi)
      for (i64 j = 1; j <= B; ++j) {
        const auto ex = g.psi.exponent_in(j, A);
        if (!ex)
          row[j - 1] = CycloNumber::zero(A);
        else if (*ex != 0)
          row[j - 1] *= CycloNumber::root_of_unity(A, -*ex);
      }
      for (i64 d : g.lifts) {
        std::vector<CycloNumber> lifted(B, CycloNumber::zero(A));
        for (i64 j = 1; j * d <= B; ++j) lifted[j * d - 1] = row[j - 1];
        if (!ech.insert(lifted)) continue;
        out.entries.push_back(std::move(lifted));
        BasisRow r;
        r.m = m;
        r.level = src.N;
        r.source_chi = src.chi.label();
        r.psi = g.psi.label();
        r.d = d;
        r.from_new_trace_form = g.form->new_oracle();
        out.rows.push_back(std::move(r));
        if (ech.rank() == out.target_dimension) break;
      }
      if (ech.rank() == out.target_dimension) break;
    }
  }
  out.certified_rank = ech.rank();
  return out;
}

std::vector<std::vector<CycloNumber>> gram_matrix(const SpaceSpec& spec, i64 size) {
  const QExpansion tf = trace_form(spec, size * size);
  std::vector<std::vector<CycloNumber>> out;
  for (i64 n = 1; n <= size; ++n) {
    const QExpansion row = hecke_apply(n, tf);
    out.emplace_back(row.coeffs.begin(), row.coeffs.begin() + size);
  }
  return out;
}

Bridge nonminimal_bridge(const SpaceSpec& spec) {
  spec.validate();
  if (is_twist_minimal(spec.chi))
    throw std::invalid_argument("nonminimal_bridge: " + spec.chi.label() + " is already twist-minimal");
  for (i64 Q : {spec.N, 2 * spec.N}) {
    for (const auto& psi : enumerate_characters(Q)) {
      const DirichletCharacter c = spec.chi.mul(psi.pow(2));
      if (spec.N % c.conductor() != 0) continue;
      const DirichletCharacter cN = c.at_modulus(spec.N);
      if (!is_twist_minimal(cN)) continue;
      SpaceSpec minimal = spec;
      minimal.chi = cN;
      return {psi.primitive_inducing(), minimal};
    }
  }
  throw std::logic_error("nonminimal_bridge: no twisting character found for " + spec.chi.label());
}

TwistedNewform newform_coeffs_from_min(const QExpansion& f, const DirichletCharacter& psi_in) {
  if (f.B < 1 || f.at(1) != CycloNumber::one(f.order))
    throw std::invalid_argument("newform_coeffs_from_min: expansion is not normalised (a_1 != 1)");
  const DirichletCharacter& chi = f.spec.chi;
  const DirichletCharacter psi = psi_in.primitive_inducing();
  const DirichletCharacter psi_prime = chi.mul(psi).primitive_inducing();
  const i64 M = lcm(f.spec.N, psi.conductor() * psi_prime.conductor());
  const DirichletCharacter chi_new = chi.mul(psi.pow(2)).at_modulus(M);

  const int A = static_cast<int>(
      lcm(lcm(f.order, chi.order()), lcm(psi.order(), lcm(psi_prime.order(), chi_new.order()))));
  const QExpansion a = f.embedded(A);
  std::vector<CycloNumber> b(f.B + 1, CycloNumber::zero(A));
  b[1] = CycloNumber::one(A);

  auto value = [&](const DirichletCharacter& c, i64 x) {
    const auto ex = c.exponent_in(x, A);
    return ex ? CycloNumber::root_of_unity(A, *ex) : CycloNumber::zero(A);
  };
  auto prime_coeff = [&](i64 p) {
    bool second_case = false;
    if (psi.conductor() % p == 0) {
      const LocalCharacter psi_p = psi.local_component(p);
      const LocalCharacter chi_p = chi.local_component(p);
      const int s = chi_p.conductor_exponent();
      const LocalCharacter chi_conj = chi_p.at_exponent(s).conj();
      second_case = chi_conj.e == psi_p.e && chi_conj == psi_p;
    }
    if (!second_case) return a.at(p) * value(psi, p);
    return a.at(p).conjugate() * value(psi_prime, p);
  };

  for (i64 p = 2; p <= f.B; ++p) {
    if (!is_prime(p)) continue;
    b[p] = prime_coeff(p);
    const CycloNumber chip = value(chi_new, p) * CycloNumber::from_rational(A, Rational(int_pow(p, f.spec.k - 1)));
    i64 prev = 1, cur = p;
    while (cur <= f.B / p) {
      const i64 next = cur * p;
      b[next] = b[p] * b[cur] - chip * b[prev];
      prev = cur;
      cur = next;
    }
  }
  for (i64 n = 2; n <= f.B; ++n) {
    const auto fac = factorize(n).factors;
    if (fac.size() < 2) continue;
    CycloNumber prod = CycloNumber::one(A);
    for (const auto& pp : fac) prod *= b[ipow(pp.p, pp.e)];
    b[n] = prod;
  }

  TwistedNewform out;
  out.level = M;
  out.chi = chi_new;
  out.coeffs = QExpansion::zero(SpaceSpec{M, f.spec.k, chi_new, SpaceKind::New}, f.B, A);
  for (i64 n = 1; n <= f.B; ++n) out.coeffs.coeffs[n - 1] = b[n];
  return out;
}

}  // namespace tmtrace
