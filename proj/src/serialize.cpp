#include "tmtrace/serialize.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tmtrace {

namespace {

std::string fmt_double(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;  // no "-0"
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

}  // namespace

nlohmann::ordered_json to_json(const CycloNumber& x) {
  nlohmann::ordered_json j;
  j["order"] = x.order();
  auto cs = nlohmann::ordered_json::array();
  for (const auto& c : x.coeffs()) cs.push_back({c.get_num().get_str(), c.get_den().get_str()});
  j["coeffs"] = std::move(cs);
  const auto z = x.to_complex();
  j["approx"] = {std::abs(z.real()) < 1e-12 ? 0.0 : z.real(), std::abs(z.imag()) < 1e-12 ? 0.0 : z.imag()};
  return j;
}

CycloNumber cyclo_from_json(const nlohmann::json& j) {
  try {
    const int order = j.at("order").get<int>();
    std::vector<Rational> coeffs;
    for (const auto& c : j.at("coeffs")) {
      // numerators may exceed 64 bits, so they travel as strings
      Rational q(Integer(c.at(0).get<std::string>()), Integer(c.at(1).get<std::string>()));
      q.canonicalize();
      coeffs.push_back(q);
    }
    return CycloNumber::from_coeffs(order, coeffs);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed cyclotomic number: ") + e.what());
  }
}

nlohmann::ordered_json to_json(const SpaceSpec& spec) {
  nlohmann::ordered_json j;
  j["level"] = spec.N;
  j["weight"] = spec.k;
  j["character"] = spec.chi.label();
  j["kind"] = to_string(spec.kind);
  return j;
}

nlohmann::ordered_json to_json(const QExpansion& f) {
  nlohmann::ordered_json j;
  j["space"] = to_json(f.spec);
  j["B"] = f.B;
  j["order"] = f.order;
  auto cs = nlohmann::ordered_json::array();
  for (const auto& c : f.coeffs) cs.push_back(to_json(c));
  j["coeffs"] = std::move(cs);
  return j;
}

nlohmann::ordered_json to_json(const BasisMatrix& m) {
  nlohmann::ordered_json j;
  j["space"] = to_json(m.spec);
  j["B"] = m.B;
  j["order"] = m.order;
  j["dimension"] = m.target_dimension;
  j["certified_rank"] = m.certified_rank;
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    const auto& r = m.rows[i];
    nlohmann::ordered_json row;
    row["label"] = r.label();
    row["m"] = r.m;
    row["level"] = r.level;
    row["source_character"] = r.source_chi;
    row["psi"] = r.psi;
    row["d"] = r.d;
    row["source"] = r.from_new_trace_form ? "new" : "min";
    auto es = nlohmann::ordered_json::array();
    for (const auto& e : m.entries[i]) es.push_back(to_json(e));
    row["entries"] = std::move(es);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string pretty(const CycloNumber& x) {
  if (const auto q = x.as_rational(); q && q->get_den() == 1) return q->get_num().get_str();
  const auto z = x.to_complex();
  const std::string re = fmt_double(z.real());
  const double im = std::abs(z.imag()) < 1e-12 ? 0.0 : z.imag();
  if (im == 0.0) return re;
  return re + (im > 0 ? "+" : "") + fmt_double(im) + "i";
}

void write_csv_header(std::ostream& out) { out << "n,value_pretty,order,coeffs\n"; }

void write_csv_row(std::ostream& out, i64 n, const CycloNumber& x) {
  out << n << ',' << pretty(x) << ',' << x.order() << ',';
  const auto& cs = x.coeffs();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) out << ';';
    out << cs[i].get_str();
  }
  out << '\n';
}

}  // namespace tmtrace
