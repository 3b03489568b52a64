#pragma once
// Artifact emission: locale-free CSV and JSON with round-trip-exact doubles,
// matrix (de)serialization, and the content hashes used by run manifests.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rittlab/opcalc.hpp"
#include "rittlab/ritt_diag.hpp"

namespace rittlab {

// Shortest-of-17-significant-digits via to_chars; '.' decimal, no locale.
std::string format_double(double x);

// CSV bodies (header line + rows, '\n' terminated).
std::string csv_prob_seq(const ProbSeq& f);              // k,value
std::string csv_trunc_seq(const TruncSeq& f);            // k,re,im
std::string csv_diag_table(const DiagTable& table);      // index,lower,upper
std::string csv_sector_report(const SectorReport& rep);  // xi,re,im,modulus,arg,eval_error
std::string csv_resolvent_scan(const ResolventScan& s);  // re_lambda,im_lambda,value

// Matrices as JSON nested arrays of [re, im] pairs.
std::string json_matrix(const DenseOp& m);
DenseOp parse_json_matrix(const std::string& text);

// Reports as JSON (tables stay in CSV; these carry verdicts and fits).
std::string json_class_a_report(const ClassAReport& rep);
std::string json_resolvent_summary(const ResolventScan& s);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t h);  // 16 lowercase hex digits

// One "hash  name" line per artifact, sorted by name.
std::string render_manifest(std::vector<std::pair<std::string, std::uint64_t>> entries);

void write_text_file(const std::filesystem::path& path, std::string_view body);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace rittlab
