#pragma once

// JSON and CSV encodings shared by the CLI and the tests.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tmtrace/basis.hpp"

namespace tmtrace {

/// {order, coeffs: [[num, den], ...], approx: [re, im]}; approx is advisory.
nlohmann::ordered_json to_json(const CycloNumber& x);
/// Inverse of to_json; ignores approx. Throws std::invalid_argument on malformed input.
CycloNumber cyclo_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const SpaceSpec& spec);
nlohmann::ordered_json to_json(const QExpansion& f);
nlohmann::ordered_json to_json(const BasisMatrix& m);

/// Complex approximation with 12 significant digits, e.g. "-24" or "0.5+0.866025403784i".
std::string pretty(const CycloNumber& x);

/// Header `n,value_pretty,order,coeffs`.
void write_csv_header(std::ostream& out);
/// coeffs are `num/den` joined by ';'.
void write_csv_row(std::ostream& out, i64 n, const CycloNumber& x);

}  // namespace tmtrace
