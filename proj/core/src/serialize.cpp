#include "rittlab/serialize.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace rittlab {

namespace {

using nlohmann::json;

void append_row(std::string& out, std::initializer_list<double> cells) {
  bool first = true;
  for (double c : cells) {
    if (!first) out += ',';
    out += format_double(c);
    first = false;
  }
  out += '\n';
}

const char* verdict_name(ClassAVerdict v) {
  switch (v) {
    case ClassAVerdict::consistent_with_A: return "consistent_with_A";
    case ClassAVerdict::inconsistent_with_A: return "inconsistent_with_A";
    default: return "inconclusive";
  }
}

const char* screen_name(ScreenVerdict v) {
  switch (v) {
    case ScreenVerdict::bounded: return "bounded";
    case ScreenVerdict::growing: return "growing";
    default: return "inconclusive";
  }
}

const char* periodicity_name(Periodicity::Kind k) {
  switch (k) {
    case Periodicity::Kind::not_adapted: return "not_adapted";
    case Periodicity::Kind::adapted_not_aperiodic: return "adapted_not_aperiodic";
    default: return "aperiodic";
  }
}

const char* kind_name(DiagKind k) {
  switch (k) {
    case DiagKind::ritt_n: return "ritt_n";
    case DiagKind::half_n: return "half_n";
    default: return "semigroup_t";
  }
}

json fit_json(const LineFit& f) {
  return json{{"slope", f.slope},
              {"intercept", f.intercept},
              {"residual", f.residual},
              {"points", f.points},
              {"valid", f.valid}};
}

json screen_json(const TableScreen& s) {
  return json{{"verdict", screen_name(s.verdict)}, {"degenerate", s.degenerate},
              {"flat", s.flat},                    {"flatness", s.flatness},
              {"slope", fit_json(s.slope)},        {"note", s.note}};
}

json table_summary_json(const DiagTable& t) {
  return json{{"kind", kind_name(t.kind)}, {"rows", t.rows.size()}, {"slope_fit", fit_json(t.slope_fit)}};
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string csv_prob_seq(const ProbSeq& f) {
  std::string out = "k,value\n";
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
    out += std::to_string(k);
    out += ',';
    out += format_double(f.coeffs[k]);
    out += '\n';
  }
  return out;
}

std::string csv_trunc_seq(const TruncSeq& f) {
  std::string out = "k,re,im\n";
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
    out += std::to_string(k);
    out += ',';
    out += format_double(f.coeffs[k].real());
    out += ',';
    out += format_double(f.coeffs[k].imag());
    out += '\n';
  }
  return out;
}

std::string csv_diag_table(const DiagTable& table) {
  std::string out = "index,lower,upper\n";
  for (const DiagRow& r : table.rows) append_row(out, {r.index, r.lower, r.upper});
  return out;
}

std::string csv_sector_report(const SectorReport& rep) {
  std::string out = "xi,re,im,modulus,arg,eval_error\n";
  for (const SectorPoint& p : rep.points)
    append_row(out, {p.xi, p.value.real(), p.value.imag(), p.modulus, p.arg, p.eval_error});
  return out;
}

std::string csv_resolvent_scan(const ResolventScan& s) {
  std::string out = "re_lambda,im_lambda,value\n";
  for (const ResolventPoint& p : s.points)
    append_row(out, {p.lambda.real(), p.lambda.imag(), p.value});
  return out;
}

std::string json_matrix(const DenseOp& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows.dump(2) + "\n";
}

DenseOp parse_json_matrix(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("matrix JSON parse failure: ") + e.what());
  }
  if (!j.is_array() || j.empty()) throw std::runtime_error("matrix JSON: expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  if (cols < 1) throw std::runtime_error("matrix JSON: empty first row");
  DenseOp m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw std::runtime_error("matrix JSON: ragged rows");
    for (Eigen::Index k = 0; k < cols; ++k) {
      const json& cell = row.at(static_cast<std::size_t>(k));
      if (!cell.is_array() || cell.size() != 2 || !cell.at(0).is_number() || !cell.at(1).is_number())
        throw std::runtime_error("matrix JSON: entries must be [re, im] pairs");
      m(i, k) = cdouble(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return m;
}

std::string json_class_a_report(const ClassAReport& rep) {
  json j;
  j["verdict"] = verdict_name(rep.verdict);
  j["periodicity"] = json{{"kind", periodicity_name(rep.periodicity.kind)},
                          {"modulus", rep.periodicity.modulus},
                          {"offset", rep.periodicity.offset},
                          {"inspected_len", rep.periodicity.inspected_len},
                          {"support_eps", rep.periodicity.support_eps}};
  j["rescaled_by"] = rep.rescaled_by;
  j["moment"] = json{{"partial_sum", rep.moment.partial_sum},
                     {"slope_fit", fit_json(rep.moment.slope_fit)},
                     {"divergent_evidence", rep.moment.divergent_evidence},
                     {"partial_sum_converged", rep.moment.partial_sum_converged}};
  j["sector"] = json{{"points", rep.sector.points.size()},
                     {"sup_angle", rep.sector.sup_angle},
                     {"limit_trend", fit_json(rep.sector.limit_trend)},
                     {"limit_estimate", rep.sector.limit_estimate},
                     {"limit_valid", rep.sector.limit_valid}};
  j["sector_flags"] = json{{"affirmative", rep.sector_flags.affirmative},
                           {"violation", rep.sector_flags.violation},
                           {"sup_angle", rep.sector_flags.sup_angle},
                           {"limit_estimate", rep.sector_flags.limit_estimate},
                           {"limit_valid", rep.sector_flags.limit_valid}};
  j["tables_computed"] = rep.tables_computed;
  if (rep.tables_computed) {
    j["ritt"] = table_summary_json(rep.ritt);
    j["ritt_screen"] = screen_json(rep.ritt_screen);
    j["half"] = table_summary_json(rep.half);
    j["half_screen"] = screen_json(rep.half_screen);
  }
  if (rep.semigroup) j["semigroup"] = table_summary_json(*rep.semigroup);
  if (rep.semigroup_screen) j["semigroup_screen"] = screen_json(*rep.semigroup_screen);
  j["moment_violation"] = rep.moment_violation;
  j["sector_violation"] = rep.sector_violation;
  j["ritt_violation"] = rep.ritt_violation;
  j["evidence"] = rep.evidence;
  return j.dump(2) + "\n";
}

std::string json_resolvent_summary(const ResolventScan& s) {
  json j;
  j["kind"] = s.kind == ResolventKind::ritt ? "ritt" : "kreiss";
  j["constant"] = s.constant;
  j["radii"] = s.radii;
  j["radius_sup"] = s.radius_sup;
  j["any_near_singular"] = s.any_near_singular;
  j["points"] = s.points.size();
  return j.dump(2) + "\n";
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xfu];
    h >>= 4;
  }
  return out;
}

std::string render_manifest(std::vector<std::pair<std::string, std::uint64_t>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out;
  for (const auto& [name, hash] : entries) {
    out += hash_hex(hash);
    out += "  ";
    out += name;
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw std::runtime_error("write failure: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return body;
}

}  // namespace rittlab
