#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hspkit {

enum class Algorithm { DecideCyclic, IdentifyCyclic, DecideAbelian, IdentifyAbelian, BruteForce };

std::string_view algorithm_name(Algorithm a);
/// Throws HspError on an unknown name.
Algorithm parse_algorithm(std::string_view name);
bool is_identification(Algorithm a);

/// One solver execution.
struct RunRecord {
  std::string id;
  std::string sig;
  std::string gens;  // semicolon-separated element strings
  std::uint64_t order_g = 0;
  std::uint64_t order_h = 0;
  Algorithm algo = Algorithm::IdentifyAbelian;
  std::string result;  // verdict or canonical recovered subgroup
  std::uint64_t queries_distinct = 0;
  std::uint64_t queries_raw = 0;
  double upper_bound = 0.0;
  std::optional<double> lower_bound;
  bool pass = false;
  double ms = 0.0;
  /// Whether the result was checked against brute force (or ground truth).
  bool cross_checked = false;
};

inline constexpr std::string_view kCsvHeader =
    "id,sig,gens,orderG,orderH,algo,result,queries_distinct,queries_raw,upper_bound,lower_bound,"
    "pass,ms";

/// One CSV row. With `include_time` false the ms column is left empty, which
/// makes rows comparable across runs.
std::string to_csv_row(const RunRecord& r, bool include_time = true);
std::string to_csv(const std::vector<RunRecord>& records, bool include_time = true);
std::string to_json(const std::vector<RunRecord>& records);

}  // namespace hspkit
