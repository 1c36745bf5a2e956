// tmtrace: Hecke traces on twist-minimal, new and full cusp form spaces.
//
// Exit codes: 0 ok, 2 usage or precondition, 3 verification failure, 4 internal inconsistency.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "checks.hpp"
#include "tmtrace/basis.hpp"
#include "tmtrace/oracle.hpp"
#include "tmtrace/serialize.hpp"

using namespace tmtrace;
using json = nlohmann::ordered_json;

namespace {

constexpr int kUsage = 2;
constexpr int kVerify = 3;
constexpr int kInternal = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VerifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpaceArgs {
  i64 level = 1;
  int weight = 2;
  std::string character;  // defaults to the trivial character mod level
  std::string kind = "min";

  void add_to(CLI::App* app, bool with_kind = true) {
    app->add_option("--level,-N", level, "level N")->required()->check(CLI::PositiveNumber);
    app->add_option("--weight,-k", weight, "weight k >= 2")->required();
    app->add_option("--character,-c", character, "Conrey label N.q (default N.1)");
    if (with_kind) app->add_option("--kind", kind, "min, new or full")->check(CLI::IsMember({"min", "new", "full"}));
  }

  SpaceSpec spec() const {
    SpaceSpec s;
    s.N = level;
    s.k = weight;
    s.kind = parse_space_kind(kind);
    try {
      s.chi = character.empty() ? DirichletCharacter::trivial(level) : DirichletCharacter::from_label(character);
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad character label: ") + e.what());
    }
    if (s.chi.modulus() != level)
      throw UsageError("character " + s.chi.label() + " has modulus " + std::to_string(s.chi.modulus()) + ", level is " +
                       std::to_string(level));
    if (weight < 2) throw UsageError("weight must be at least 2");
    if (s.kind == SpaceKind::Min && !is_twist_minimal(s.chi))
      throw UsageError("character " + s.chi.label() + " is not twist-minimal; the min kind needs a twist-minimal character");
    return s;
  }
};

CycloNumber trace_of(const SpaceSpec& s, i64 n) {
  switch (s.kind) {
    case SpaceKind::Min:
      return trace_min(s, n);
    case SpaceKind::New:
      return trace_new(s, n);
    case SpaceKind::Full:
      return trace_full(s, n);
  }
  return CycloNumber::zero(1);
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_trace(const SpaceArgs& a, i64 nmax, bool verify, const std::string& format) {
  const SpaceSpec s = a.spec();
  if (nmax < 1) throw UsageError("--nmax must be positive");
  if (verify && s.kind != SpaceKind::Min) throw UsageError("--verify compares the two min-space paths; use --kind min");
  std::vector<CycloNumber> values = s.kind == SpaceKind::Min ? trace_min_range(s, nmax) : std::vector<CycloNumber>{};
  if (s.kind != SpaceKind::Min)
    for (i64 n = 1; n <= nmax; ++n) values.push_back(trace_of(s, n));

  std::vector<CycloNumber> oracle;
  std::vector<i64> mismatches;
  if (verify)
    for (i64 n = 1; n <= nmax; ++n) {
      oracle.push_back(trace_min_sieved(s, n));
      if (!same_value(values[n - 1], oracle.back())) mismatches.push_back(n);
    }

  if (format == "csv") {
    write_csv_header(std::cout);
    for (i64 n = 1; n <= nmax; ++n) write_csv_row(std::cout, n, values[n - 1]);
  } else {
    json j;
    j["space"] = to_json(s);
    auto rows = json::array();
    for (i64 n = 1; n <= nmax; ++n) {
      json r;
      r["n"] = n;
      r["value"] = to_json(values[n - 1]);
      if (verify) r["oracle"] = to_json(oracle[n - 1]);
      rows.push_back(std::move(r));
    }
    j["traces"] = std::move(rows);
    if (verify) j["verified"] = mismatches.empty();
    emit(j);
  }
  if (!mismatches.empty()) {
    std::ostringstream msg;
    msg << "dual-path mismatch at n =";
    for (i64 n : mismatches) msg << ' ' << n;
    throw VerifyError(msg.str());
  }
  return 0;
}

int cmd_dim(const SpaceArgs& a, const std::string& format) {
  const SpaceSpec s = a.spec();
  const i64 d = space_dimension(s);
  if (format == "json") {
    json j;
    j["space"] = to_json(s);
    j["dimension"] = d;
    emit(j);
  } else {
    std::cout << d << "\n";
  }
  return 0;
}

int cmd_basis(const SpaceArgs& a, i64 B, const std::string& format) {
  const SpaceSpec s = a.spec();
  const i64 sturm = sturm_bound(s);
  if (B == 0) B = sturm;
  if (B < sturm) throw UsageError("--B " + std::to_string(B) + " is below the Sturm bound " + std::to_string(sturm));
  const BasisMatrix m = basis_for(s, B);
  if (format == "csv") {
    std::cout << "row,label,n,value_pretty,order,coeffs\n";
    for (std::size_t i = 0; i < m.rows.size(); ++i)
      for (i64 n = 1; n <= B; ++n) {
        std::cout << i + 1 << ",\"" << m.rows[i].label() << "\",";
        write_csv_row(std::cout, n, m.entries[i][n - 1]);
      }
  } else {
    emit(to_json(m));
  }
  return 0;
}

int cmd_newform(const SpaceArgs& a, const std::string& psi_label, i64 B, const std::string& format) {
  SpaceArgs min_args = a;
  min_args.kind = "min";
  const SpaceSpec s = min_args.spec();
  DirichletCharacter psi;
  try {
    psi = DirichletCharacter::from_label(psi_label);
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad psi label: ") + e.what());
  }
  if (B < 1) throw UsageError("--B must be positive");
  const i64 dim = space_dimension(s);
  if (dim != 1)
    throw UsageError("the min space has dimension " + std::to_string(dim) +
                     "; its trace form is an eigenform only in dimension 1");
  const TwistedNewform t = newform_coeffs_from_min(trace_form(s, B), psi);
  if (format == "csv") {
    write_csv_header(std::cout);
    for (i64 n = 1; n <= B; ++n) write_csv_row(std::cout, n, t.coeffs.at(n));
  } else {
    json j;
    j["source"] = to_json(s);
    j["psi"] = psi.primitive_inducing().label();
    j["level"] = t.level;
    j["character"] = t.chi.label();
    j["B"] = B;
    auto cs = json::array();
    for (const auto& c : t.coeffs.coeffs) cs.push_back(to_json(c));
    j["coeffs"] = std::move(cs);
    emit(j);
  }
  return 0;
}

int cmd_class_numbers(i64 dmin, i64 dmax, const std::string& cache) {
  if (dmin >= 0 || dmax >= 0 || dmin > dmax) throw UsageError("need --min <= --max < 0");
  if (cache.empty()) throw UsageError("no cache path: pass --cache or set TMTRACE_CLASS_CACHE");
  i64 count = 0;
  for (i64 d = dmax; d >= dmin; --d)
    if (is_fundamental_discriminant(d)) {
      class_data(d);
      ++count;
    }
  save_class_cache(cache);
  std::cout << count << " fundamental discriminants in [" << dmin << ", " << dmax << "]; cache " << cache << " holds "
            << class_cache_snapshot().size() << " entries\n";
  return 0;
}

std::vector<int> parse_criteria(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    const auto dash = tok.find('-');
    const int lo = std::stoi(tok.substr(0, dash));
    const int hi = dash == std::string::npos ? lo : std::stoi(tok.substr(dash + 1));
    for (int c = lo; c <= hi; ++c) out.push_back(c);
  }
  return out;
}

int cmd_selftest(i64 max_level, const std::vector<int>& weights, i64 nmax, const std::string& criteria_arg) {
  if (max_level < 1 || nmax < 1 || weights.empty()) throw UsageError("selftest bounds must be positive");
  std::vector<int> criteria;
  try {
    criteria = parse_criteria(criteria_arg);
  } catch (const std::exception&) {
    throw UsageError("bad --criteria list: " + criteria_arg);
  }
  auto on = [&](int c) { return std::find(criteria.begin(), criteria.end(), c) != criteria.end(); };
  std::vector<int> even;
  for (int k : weights)
    if (k % 2 == 0) even.push_back(k);

  bool ok = true;
  i64 total = 0;
  auto report = [&](int id, const std::string& name, const checks::Outcome& o) {
    ok = ok && o.pass;
    total += o.count;
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << ' ' << name << ": " << o.count << " checks";
    if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
    std::cout << "\n";
  };
  if (on(1) || on(6) || on(7)) {
    const auto s = checks::trace_sweep({max_level, weights, nmax});
    if (on(1)) report(1, "dual-path exactness", s.dual_path);
    if (on(6)) report(6, "u-sign invariance", s.u_sign);
    if (on(7)) report(7, "integrality and rationality", s.integrality);
  }
  if (on(2)) report(2, "genus dimensions", checks::genus_dimensions(max_level));
  if (on(3)) report(3, "Ramanujan tau", checks::ramanujan_tau(nmax));
  if (on(4)) report(4, "parity and square-free gates", checks::gates(200, 20240611, max_level));
  if (on(5)) report(5, "class numbers", checks::class_numbers(1000));
  if (on(8)) report(8, "basis rank and Gram symmetry", checks::basis_rank(max_level, even, 12));
  if (on(9)) report(9, "decomposition dimensions", checks::decomposition(max_level, weights));
  if (on(10)) report(10, "newform coefficient transfer", checks::newform_transfer(50));
  std::cout << (ok ? "PASS" : "FAIL") << " (" << total << " checks)\n";
  if (!ok) throw VerifyError("selftest failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traces of Hecke operators on spaces of cusp forms"};
  app.require_subcommand(1);

  std::string cache;
  if (const char* env = std::getenv("TMTRACE_CLASS_CACHE")) cache = env;
  app.add_option("--cache", cache, "class-number cache file (default $TMTRACE_CLASS_CACHE)");

  std::string format = "json";
  auto add_format = [&](CLI::App* sub, const std::string& fallback) {
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->default_str(fallback);
  };

  SpaceArgs space;
  i64 nmax = 10, B = 0;
  bool verify = false;

  auto* trace = app.add_subcommand("trace", "Tr T_n for n = 1..nmax");
  space.add_to(trace);
  trace->add_option("--nmax", nmax, "largest n");
  trace->add_flag("--verify", verify, "min kind: also run the oracle path, exit 3 on any mismatch");
  add_format(trace, "json");

  auto* dim = app.add_subcommand("dim", "dimension Tr T_1");
  space.add_to(dim);
  std::string dim_format = "text";
  dim->add_option("--format", dim_format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* basis = app.add_subcommand("basis", "basis matrix with certified rank");
  space.add_to(basis);
  basis->add_option("--B", B, "truncation (default: Sturm bound)");
  add_format(basis, "json");

  std::string psi_label;
  i64 coeff_bound = 50;
  auto* newform = app.add_subcommand("newform-coeffs", "coefficients of a twisted one-dimensional min space");
  space.add_to(newform, false);
  newform->add_option("--psi", psi_label, "twisting character N.q")->required();
  newform->add_option("--B", coeff_bound, "number of coefficients");
  add_format(newform, "json");

  i64 dmin = -1000, dmax = -3;
  auto* classes = app.add_subcommand("class-numbers", "fill the class-number cache");
  classes->add_option("--min", dmin, "most negative discriminant");
  classes->add_option("--max", dmax, "least negative discriminant");
  classes->add_option("--cache", cache, "cache file");

  i64 max_level = 30;
  std::vector<int> weights{2, 3, 4};
  i64 self_nmax = 10;
  std::string criteria = "1-10";
  auto* selftest = app.add_subcommand("selftest", "acceptance checks at reduced bounds");
  selftest->add_option("--max-level", max_level, "largest level");
  selftest->add_option("--weights", weights, "weights")->delimiter(',');
  selftest->add_option("--nmax", self_nmax, "largest n");
  selftest->add_option("--criteria", criteria, "criteria to run, e.g. 1-9 or 2,5");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (!cache.empty()) load_class_cache(cache);
    const std::size_t cached = class_cache_snapshot().size();
    int rc = 0;
    if (*trace) rc = cmd_trace(space, nmax, verify, format);
    if (*dim) rc = cmd_dim(space, dim_format);
    if (*basis) rc = cmd_basis(space, B, format);
    if (*newform) rc = cmd_newform(space, psi_label, coeff_bound, format);
    if (*classes) rc = cmd_class_numbers(dmin, dmax, cache);
    if (*selftest) rc = cmd_selftest(max_level, weights, self_nmax, criteria);
    if (!cache.empty() && !*classes && class_cache_snapshot().size() != cached) save_class_cache(cache);
    return rc;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const VerifyError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerify;
  } catch (const RankNotReached& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return kInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return kInternal;
  }
}
