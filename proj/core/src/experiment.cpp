#include "rittlab/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include <json.hpp>

#include "rittlab/opcalc.hpp"
#include "rittlab/serialize.hpp"

namespace rittlab {

namespace {

using nlohmann::json;

const json* find(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

void require_object(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw ConfigError(ptr + ": expected an object");
}

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& ptr) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return it.key() == k; });
    if (!known) throw ConfigError(ptr + ": unknown key '" + it.key() + "'");
  }
}

double num_field(const json& j, const char* key, double dflt, const std::string& ptr) {
  const json* v = find(j, key);
  if (!v) return dflt;
  if (!v->is_number()) throw ConfigError(ptr + "/" + key + ": expected a number");
  return v->get<double>();
}

std::uint64_t uint_field(const json& j, const char* key, std::uint64_t dflt, const std::string& ptr) {
  const json* v = find(j, key);
  if (!v) return dflt;
  if (!v->is_number_integer() || (v->is_number_integer() && v->get<std::int64_t>() < 0))
    throw ConfigError(ptr + "/" + key + ": expected a nonnegative integer");
  return v->get<std::uint64_t>();
}

std::string str_field(const json& j, const char* key, const std::string& dflt, const std::string& ptr) {
  const json* v = find(j, key);
  if (!v) return dflt;
  if (!v->is_string()) throw ConfigError(ptr + "/" + key + ": expected a string");
  return v->get<std::string>();
}

std::vector<double> num_array_field(const json& j, const char* key, const std::string& ptr) {
  const json* v = find(j, key);
  if (!v) return {};
  if (!v->is_array()) throw ConfigError(ptr + "/" + key + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    if (!v->at(i).is_number())
      throw ConfigError(ptr + "/" + key + "/" + std::to_string(i) + ": expected a number");
    out.push_back(v->at(i).get<double>());
  }
  return out;
}

FamilySpec parse_family(const json& j, const std::string& ptr) {
  require_object(j, ptr);
  require_keys(j,
               {"kind", "length", "alpha", "beta", "s", "eps", "m", "outer_length", "quad_order",
                "terms", "perturbation", "weights", "components"},
               ptr);
  FamilySpec spec;
  spec.kind = str_field(j, "kind", "", ptr);
  if (spec.kind.empty()) throw ConfigError(ptr + ": missing required key 'kind'");
  spec.length = static_cast<std::size_t>(uint_field(j, "length", 0, ptr));
  spec.alpha = num_field(j, "alpha", spec.alpha, ptr);
  spec.beta = num_field(j, "beta", spec.beta, ptr);
  spec.s = num_field(j, "s", spec.s, ptr);
  spec.eps = num_field(j, "eps", spec.eps, ptr);
  spec.m = uint_field(j, "m", spec.m, ptr);
  spec.outer_length = static_cast<std::size_t>(uint_field(j, "outer_length", spec.outer_length, ptr));
  spec.quad_order = static_cast<int>(uint_field(j, "quad_order", std::uint64_t(spec.quad_order), ptr));
  if (const json* terms = find(j, "terms")) {
    if (!terms->is_array()) throw ConfigError(ptr + "/terms: expected an array");
    for (std::size_t i = 0; i < terms->size(); ++i) {
      const std::string tptr = ptr + "/terms/" + std::to_string(i);
      require_object(terms->at(i), tptr);
      require_keys(terms->at(i), {"c", "alpha"}, tptr);
      PowerTailTerm t;
      t.c = num_field(terms->at(i), "c", 0.0, tptr);
      t.alpha = num_field(terms->at(i), "alpha", 0.0, tptr);
      spec.terms.push_back(t);
    }
  }
  spec.perturbation = num_array_field(j, "perturbation", ptr);
  spec.weights = num_array_field(j, "weights", ptr);
  if (const json* comps = find(j, "components")) {
    if (!comps->is_array()) throw ConfigError(ptr + "/components: expected an array");
    for (std::size_t i = 0; i < comps->size(); ++i)
      spec.components.push_back(parse_family(comps->at(i), ptr + "/components/" + std::to_string(i)));
  }
  return spec;
}

DiagnosticKind parse_diagnostic(const std::string& s, const std::string& ptr) {
  if (s == "ritt_table") return DiagnosticKind::ritt_table;
  if (s == "half_table") return DiagnosticKind::half_table;
  if (s == "semigroup_table") return DiagnosticKind::semigroup_table;
  if (s == "sector_report") return DiagnosticKind::sector_report;
  if (s == "class_a_report") return DiagnosticKind::class_a_report;
  throw ConfigError(ptr + ": unknown diagnostic '" + s + "'");
}

OperatorSuiteSpec parse_suite(const json& j, const std::string& ptr) {
  require_object(j, ptr);
  require_keys(j, {"source", "dim", "seed", "alpha", "checks"}, ptr);
  OperatorSuiteSpec s;
  s.source = str_field(j, "source", s.source, ptr);
  static const std::set<std::string> sources = {"volterra", "shift", "random_normal", "psi_of_family"};
  if (!sources.count(s.source)) throw ConfigError(ptr + "/source: unknown source '" + s.source + "'");
  s.dim = static_cast<std::size_t>(uint_field(j, "dim", s.dim, ptr));
  if (s.dim < 1 || s.dim > 4096) throw ConfigError(ptr + "/dim: expected 1..4096");
  s.seed = uint_field(j, "seed", s.seed, ptr);
  s.alpha = num_field(j, "alpha", s.alpha, ptr);
  if (!(s.alpha > 0.0) || !(s.alpha < 1.0)) throw ConfigError(ptr + "/alpha: expected a value in (0,1)");
  const json* checks = find(j, "checks");
  if (!checks || !checks->is_array() || checks->empty())
    throw ConfigError(ptr + "/checks: expected a nonempty array of check names");
  static const std::set<std::string> known = {"ritt_scan",      "kreiss_scan",       "spectral_map",
                                              "subordination",  "frac_power_square", "kritt_suite"};
  for (std::size_t i = 0; i < checks->size(); ++i) {
    const std::string cptr = ptr + "/checks/" + std::to_string(i);
    if (!checks->at(i).is_string()) throw ConfigError(cptr + ": expected a string");
    const std::string c = checks->at(i).get<std::string>();
    if (!known.count(c)) throw ConfigError(cptr + ": unknown check '" + c + "'");
    s.checks.push_back(c);
  }
  return s;
}

bool valid_name(const std::string& name) {
  if (name.empty() || name.size() > 128) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
  });
}

ExperimentSpec parse_experiment(const json& j, const std::string& ptr) {
  require_object(j, ptr);
  require_keys(j,
               {"name", "family", "method", "diagnostics", "n_grid", "t_grid", "window", "xi_points",
                "operator_suite"},
               ptr);
  ExperimentSpec ex;
  ex.name = str_field(j, "name", "", ptr);
  if (!valid_name(ex.name))
    throw ConfigError(ptr + "/name: expected a nonempty [A-Za-z0-9._-] identifier");
  const json* fam = find(j, "family");
  if (!fam) throw ConfigError(ptr + ": missing required key 'family'");
  ex.family = parse_family(*fam, ptr + "/family");

  const std::string method = str_field(j, "method", "fft", ptr);
  if (method == "fft") ex.method = ConvMethod::fft;
  else if (method == "direct") ex.method = ConvMethod::direct;
  else throw ConfigError(ptr + "/method: expected 'direct' or 'fft'");

  if (const json* diags = find(j, "diagnostics")) {
    if (!diags->is_array()) throw ConfigError(ptr + "/diagnostics: expected an array");
    for (std::size_t i = 0; i < diags->size(); ++i) {
      const std::string dptr = ptr + "/diagnostics/" + std::to_string(i);
      if (!diags->at(i).is_string()) throw ConfigError(dptr + ": expected a string");
      ex.diagnostics.push_back(parse_diagnostic(diags->at(i).get<std::string>(), dptr));
    }
  }
  auto parse_range = [&](const char* key, std::uint64_t& first, std::uint64_t& last) {
    const json* r = find(j, key);
    if (!r) return;
    const std::string rptr = ptr + "/" + key;
    require_object(*r, rptr);
    require_keys(*r, {"first", "last"}, rptr);
    first = uint_field(*r, "first", first, rptr);
    last = uint_field(*r, "last", last, rptr);
    if (first < 1 || last < first) throw ConfigError(rptr + ": need 1 <= first <= last");
  };
  parse_range("n_grid", ex.n_first, ex.n_last);
  parse_range("t_grid", ex.t_first, ex.t_last);
  ex.window = uint_field(j, "window", 0, ptr);
  if (ex.window == 1) throw ConfigError(ptr + "/window: expected 0 (family length) or >= 2");
  ex.xi_points = static_cast<int>(uint_field(j, "xi_points", 40, ptr));
  if (ex.xi_points < 4 || ex.xi_points > 60) throw ConfigError(ptr + "/xi_points: expected 4..60");
  if (const json* suite = find(j, "operator_suite"))
    ex.suite = parse_suite(*suite, ptr + "/operator_suite");
  if (ex.diagnostics.empty() && !ex.suite)
    throw ConfigError(ptr + ": at least one diagnostic or an operator_suite is required");
  return ex;
}

bool wants(const ExperimentSpec& ex, DiagnosticKind k) {
  return std::find(ex.diagnostics.begin(), ex.diagnostics.end(), k) != ex.diagnostics.end();
}

void run_suite(const ExperimentSpec& ex, const ProbSeq& f, const ConvOptions& conv,
               const std::function<void(const std::string&, const std::string&)>& emit) {
  const OperatorSuiteSpec& s = *ex.suite;
  DenseOp t;
  if (s.source == "volterra") t = volterra_op(s.dim);
  else if (s.source == "shift") t = shift_op(s.dim);
  else if (s.source == "random_normal") t = make_random_normal_contraction(s.dim, s.seed);
  else t = psi_op(f, make_random_normal_contraction(s.dim, s.seed)).op;
  emit("operator.json", json_matrix(t));

  json summary = json::object();
  for (const std::string& c : s.checks) {
    if (c == "ritt_scan" || c == "kreiss_scan") {
      const ResolventKind kind = c == "ritt_scan" ? ResolventKind::ritt : ResolventKind::kreiss;
      const ResolventScan scan = resolvent_scan(t, kind);
      emit(c + ".csv", csv_resolvent_scan(scan));
      emit(c + ".json", json_resolvent_summary(scan));
    } else if (c == "spectral_map") {
      const SpectralMapCheck r = spectral_map_check(f, t);
      summary["spectral_map"] = {{"distance", r.distance},
                                 {"budget", r.budget},
                                 {"eig_condition", r.eig_condition},
                                 {"ok", r.ok}};
    } else if (c == "subordination") {
      const ResidualCheck r = subordination_identity_check(f, t, 8, conv);
      summary["subordination"] = {{"residual", r.residual}, {"budget", r.budget}, {"ok", r.ok}};
    } else if (c == "frac_power_square") {
      const FracPowerResult half = frac_power(t, s.alpha);
      const FracPowerResult quarter = frac_power(t, s.alpha / 2.0);
      const double residual = operator_norm(quarter.op * quarter.op - half.op);
      summary["frac_power_square"] = {{"alpha", s.alpha},
                                      {"residual", residual},
                                      {"budget", half.budget + 2.0 * quarter.budget + 1e-12}};
    } else if (c == "kritt_suite") {
      const std::vector<double> gammas = {1.05, 1.1, 1.25};
      const KrittSuiteReport rep = kritt_equivalence_suite(t, gammas, 1e6);
      json rows = json::array();
      for (const GammaRittRow& row : rep.rows)
        rows.push_back({{"gamma", row.gamma},
                        {"constant", row.constant},
                        {"near_singular", row.near_singular},
                        {"pass", row.pass}});
      summary["kritt_suite"] = {{"base_ritt_constant", rep.base_ritt_constant},
                                {"rows", rows},
                                {"largest_pass", rep.largest_pass}};
    }
  }
  if (!summary.empty()) emit("suite_summary.json", summary.dump(2) + "\n");
}

bool num_close(double a, double b, double tol) {
  if (std::isnan(a) && std::isnan(b)) return true;
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool parse_cell(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

bool json_close(const json& a, const json& b, double tol, std::string& why, const std::string& ptr) {
  if (a.is_number() && b.is_number()) {
    if (!num_close(a.get<double>(), b.get<double>(), tol)) {
      why = ptr + ": " + a.dump() + " vs " + b.dump();
      return false;
    }
    return true;
  }
  if (a.type() != b.type()) {
    why = ptr + ": type mismatch";
    return false;
  }
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) {
        why = ptr + "/" + it.key() + ": missing on the right";
        return false;
      }
      if (!json_close(it.value(), b.at(it.key()), tol, why, ptr + "/" + it.key())) return false;
    }
    for (auto it = b.begin(); it != b.end(); ++it) {
      if (!a.contains(it.key())) {
        why = ptr + "/" + it.key() + ": missing on the left";
        return false;
      }
    }
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) {
      why = ptr + ": array length " + std::to_string(a.size()) + " vs " + std::to_string(b.size());
      return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!json_close(a.at(i), b.at(i), tol, why, ptr + "/" + std::to_string(i))) return false;
    }
    return true;
  }
  if (a != b) {
    why = ptr + ": " + a.dump() + " vs " + b.dump();
    return false;
  }
  return true;
}

std::vector<std::string> split(const std::string& body, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= body.size()) {
    const std::size_t end = body.find(sep, start);
    if (end == std::string::npos) {
      out.push_back(body.substr(start));
      break;
    }
    out.push_back(body.substr(start, end - start));
    start = end + 1;
  }
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

bool csv_close(const std::string& a, const std::string& b, double tol, std::string& why) {
  const auto la = split(a, '\n');
  const auto lb = split(b, '\n');
  if (la.size() != lb.size()) {
    why = "row count " + std::to_string(la.size()) + " vs " + std::to_string(lb.size());
    return false;
  }
  for (std::size_t i = 0; i < la.size(); ++i) {
    const auto ca = split(la[i], ',');
    const auto cb = split(lb[i], ',');
    if (ca.size() != cb.size()) {
      why = "line " + std::to_string(i + 1) + ": column count differs";
      return false;
    }
    for (std::size_t j = 0; j < ca.size(); ++j) {
      double xa = 0.0, xb = 0.0;
      const bool na = parse_cell(ca[j], xa);
      const bool nb = parse_cell(cb[j], xb);
      const bool match = (na && nb) ? num_close(xa, xb, tol) : ca[j] == cb[j];
      if (!match) {
        why = "line " + std::to_string(i + 1) + " col " + std::to_string(j + 1) + ": '" + ca[j] +
              "' vs '" + cb[j] + "'";
        return false;
      }
    }
  }
  return true;
}

std::vector<std::string> manifest_names(const std::filesystem::path& manifest) {
  std::vector<std::string> names;
  for (const std::string& line : split(read_text_file(manifest), '\n')) {
    if (line.empty()) continue;
    const std::size_t sep = line.find("  ");
    if (sep == std::string::npos || sep + 2 >= line.size())
      throw std::runtime_error("malformed manifest line in " + manifest.string() + ": " + line);
    names.push_back(line.substr(sep + 2));
  }
  return names;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config JSON parse failure: ") + e.what());
  }
  require_object(j, "");
  require_keys(j, {"version", "experiments"}, "");
  const json* version = find(j, "version");
  if (!version || !version->is_number_integer() || version->get<std::int64_t>() != 1)
    throw ConfigError("/version: expected the integer 1");
  const json* exps = find(j, "experiments");
  if (!exps || !exps->is_array() || exps->empty())
    throw ConfigError("/experiments: expected a nonempty array");
  ExperimentConfig cfg;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < exps->size(); ++i) {
    ExperimentSpec ex = parse_experiment(exps->at(i), "/experiments/" + std::to_string(i));
    if (!seen.insert(ex.name).second)
      throw ConfigError("/experiments/" + std::to_string(i) + "/name: duplicate name '" + ex.name + "'");
    cfg.experiments.push_back(std::move(ex));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path));
}

RunResult run_experiments(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                          std::optional<ConvMethod> force_method) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::pair<std::string, std::uint64_t>> manifest;
  RunResult result;

  for (const ExperimentSpec& ex : cfg.experiments) {
    const std::filesystem::path dir = out_dir / ex.name;
    const auto emit = std::function<void(const std::string&, const std::string&)>(
        [&](const std::string& rel, const std::string& body) {
          write_text_file(dir / rel, body);
          manifest.emplace_back(ex.name + "/" + rel, fnv1a64(body));
          ++result.artifacts;
        });
    try {
      const ProbSeq f = build_family(ex.family);
      ConvOptions conv;
      conv.method = force_method.value_or(ex.method);
      conv.cap = ex.window ? static_cast<std::size_t>(ex.window)
                           : std::max<std::size_t>(f.coeffs.size(), 2);
      emit("family.csv", csv_prob_seq(f));

      const bool want_ritt = wants(ex, DiagnosticKind::ritt_table);
      const bool want_half = wants(ex, DiagnosticKind::half_table);
      const bool want_semi = wants(ex, DiagnosticKind::semigroup_table);
      const bool want_sector = wants(ex, DiagnosticKind::sector_report);
      const bool want_classa = wants(ex, DiagnosticKind::class_a_report);
      bool have_ritt = false, have_half = false, have_semi = false, have_sector = false;

      const std::vector<double> n_grid = dyadic_grid(double(ex.n_first), double(ex.n_last));
      const std::vector<double> t_grid = dyadic_grid(double(ex.t_first), double(ex.t_last));

      if (want_classa) {
        ClassAConfig cc;
        cc.n_grid = n_grid;
        cc.t_grid = t_grid;
        cc.xi_grid = geometric_xi_grid(ex.xi_points);
        cc.include_semigroup = want_semi;
        cc.conv = conv;
        const ClassAReport rep = class_a_report(f, cc);
        emit("class_a_report.json", json_class_a_report(rep));
        if (rep.tables_computed) {
          if (want_ritt) { emit("ritt_table.csv", csv_diag_table(rep.ritt)); have_ritt = true; }
          if (want_half) { emit("half_table.csv", csv_diag_table(rep.half)); have_half = true; }
          if (want_semi && rep.semigroup) {
            emit("semigroup_table.csv", csv_diag_table(*rep.semigroup));
            have_semi = true;
          }
          if (want_sector) { emit("sector_report.csv", csv_sector_report(rep.sector)); have_sector = true; }
        }
      }
      if ((want_ritt && !have_ritt) || (want_half && !have_half)) {
        const DiffTables dt = diff_tables(f, n_grid, conv);
        if (want_ritt && !have_ritt) emit("ritt_table.csv", csv_diag_table(dt.ritt));
        if (want_half && !have_half) emit("half_table.csv", csv_diag_table(dt.half));
      }
      if (want_semi && !have_semi) {
        ConvExpOptions eo;
        eo.conv = conv;
        emit("semigroup_table.csv", csv_diag_table(semigroup_table(f, t_grid, eo)));
      }
      if (want_sector && !have_sector) {
        const std::vector<double> grid = geometric_xi_grid(ex.xi_points);
        emit("sector_report.csv", csv_sector_report(sector_report(f, grid)));
      }
      if (ex.suite) run_suite(ex, f, conv, emit);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw std::runtime_error("experiment '" + ex.name + "': " + e.what());
    }
  }

  result.manifest = out_dir / "MANIFEST";
  write_text_file(result.manifest, render_manifest(std::move(manifest)));
  return result;
}

std::string CompareReport::render() const {
  std::string out;
  for (const CompareRow& r : rows) {
    out += r.status;
    out += "  ";
    out += r.name;
    if (!r.detail.empty()) {
      out += "  (";
      out += r.detail;
      out += ')';
    }
    out += '\n';
  }
  out += ok ? "compare: all artifacts agree\n" : "compare: differences found\n";
  return out;
}

CompareReport compare_runs(const std::filesystem::path& manifest_a,
                           const std::filesystem::path& manifest_b, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("compare_runs: tolerance must be >= 0");
  const std::vector<std::string> names_a = manifest_names(manifest_a);
  const std::vector<std::string> names_b = manifest_names(manifest_b);
  const std::set<std::string> set_a(names_a.begin(), names_a.end());
  const std::set<std::string> set_b(names_b.begin(), names_b.end());
  std::set<std::string> all = set_a;
  all.insert(set_b.begin(), set_b.end());

  const std::filesystem::path base_a = manifest_a.parent_path();
  const std::filesystem::path base_b = manifest_b.parent_path();

  CompareReport rep;
  rep.ok = true;
  for (const std::string& name : all) {
    CompareRow row;
    row.name = name;
    if (!set_a.count(name)) {
      row.status = "missing_a";
      rep.ok = false;
    } else if (!set_b.count(name)) {
      row.status = "missing_b";
      rep.ok = false;
    } else {
      const std::string body_a = read_text_file(base_a / name);
      const std::string body_b = read_text_file(base_b / name);
      std::string why;
      bool same = false;
      if (body_a == body_b) {
        same = true;
      } else if (name.size() > 5 && name.substr(name.size() - 5) == ".json") {
        try {
          same = json_close(json::parse(body_a), json::parse(body_b), tol, why, "");
        } catch (const json::parse_error& e) {
          same = false;
          why = std::string("JSON parse failure: ") + e.what();
        }
      } else {
        same = csv_close(body_a, body_b, tol, why);
      }
      row.status = same ? "pass" : "diff";
      row.detail = same ? "" : why;
      rep.ok = rep.ok && same;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace rittlab
