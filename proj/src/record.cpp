#include "hspkit/record.hpp"

#include <array>
#include <cstdio>

#include <json.hpp>

#include "hspkit/group.hpp"

namespace hspkit {

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 5> kNames{{
    {Algorithm::DecideCyclic, "decide-cyclic"},
    {Algorithm::IdentifyCyclic, "identify-cyclic"},
    {Algorithm::DecideAbelian, "decide-abelian"},
    {Algorithm::IdentifyAbelian, "identify-abelian"},
    {Algorithm::BruteForce, "brute-force"},
}};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  for (const auto& [alg, name] : kNames) {
    if (alg == a) return name;
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (const auto& [alg, n] : kNames) {
    if (n == name) return alg;
  }
  throw HspError("unknown algorithm '" + std::string(name) + "'");
}

bool is_identification(Algorithm a) {
  return a == Algorithm::IdentifyCyclic || a == Algorithm::IdentifyAbelian ||
         a == Algorithm::BruteForce;
}

std::string to_csv_row(const RunRecord& r, bool include_time) {
  std::string out;
  out += csv_field(r.id) + ',';
  out += csv_field(r.sig) + ',';
  out += csv_field(r.gens) + ',';
  out += std::to_string(r.order_g) + ',';
  out += std::to_string(r.order_h) + ',';
  out += std::string(algorithm_name(r.algo)) + ',';
  out += csv_field(r.result) + ',';
  out += std::to_string(r.queries_distinct) + ',';
  out += std::to_string(r.queries_raw) + ',';
  out += fixed(r.upper_bound, 3) + ',';
  out += (r.lower_bound ? fixed(*r.lower_bound, 3) : std::string("n/a")) + ',';
  out += (r.pass ? "true" : "false");
  out += ',';
  if (include_time) out += fixed(r.ms, 3);
  return out;
}

std::string to_csv(const std::vector<RunRecord>& records, bool include_time) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) out += to_csv_row(r, include_time) + '\n';
  return out;
}

std::string to_json(const std::vector<RunRecord>& records) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["sig"] = r.sig;
    j["gens"] = r.gens;
    j["orderG"] = r.order_g;
    j["orderH"] = r.order_h;
    j["algo"] = std::string(algorithm_name(r.algo));
    j["result"] = r.result;
    j["queries_distinct"] = r.queries_distinct;
    j["queries_raw"] = r.queries_raw;
    j["upper_bound"] = r.upper_bound;
    if (r.lower_bound) {
      j["lower_bound"] = *r.lower_bound;
    } else {
      j["lower_bound"] = "n/a";
    }
    j["pass"] = r.pass;
    j["ms"] = r.ms;
    arr.push_back(j);
  }
  return arr.dump(2);
}

}  // namespace hspkit
