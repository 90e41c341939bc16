// hspkit: run hidden-subgroup solvers against synthetic instances.
//
//   hspkit solve  --group 2,2 --gens "(1,1)" --algo identify-abelian
//   hspkit bench  --group 2^2,3 --mode all --algo decide-abelian --out runs.csv
//   hspkit verify

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hspkit/bench.hpp"
#include "hspkit/oracle.hpp"

namespace {

using namespace hspkit;

std::vector<std::string> expand_family(const std::string& spec) {
  // "p:lo..hi" -> Z_p^n for n in [lo, hi]
  auto colon = spec.find(':');
  auto dots = spec.find("..");
  if (colon == std::string::npos || dots == std::string::npos || dots < colon) {
    throw ParseError("family must look like p:lo..hi, got '" + spec + "'");
  }
  const auto p = std::stoull(spec.substr(0, colon));
  const auto lo = std::stoul(spec.substr(colon + 1, dots - colon - 1));
  const auto hi = std::stoul(spec.substr(dots + 2));
  if (!is_prime(p) || lo < 1 || hi < lo) throw ParseError("bad family '" + spec + "'");
  std::vector<std::string> out;
  for (auto n = lo; n <= hi; ++n) {
    std::string s;
    for (unsigned long i = 0; i < n; ++i) s += (i ? "," : "") + std::to_string(p);
    out.push_back(s);
  }
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw HspError("cannot write " + path);
  out << text;
}

std::string render(const std::vector<RunRecord>& records, const std::string& format) {
  return format == "json" ? to_json(records) + "\n" : to_csv(records);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic hidden subgroup solvers for finite Abelian groups"};
  app.require_subcommand(1);

  std::uint64_t cap = enumeration_cap();
  app.add_option("--cap", cap, "enumeration cap (default 10^6, or $HSPKIT_CAP)");

  // solve
  auto* solve = app.add_subcommand("solve", "run one solver on one instance");
  std::string group, gens, algo = "identify-abelian", instance_file, out_path, format = "csv";
  solve->add_option("--group", group, "signature, e.g. 2^3,3");
  solve->add_option("--gens", gens, "semicolon-separated generators, e.g. \"(1,0);(0,2)\"");
  solve->add_option("--instance-file", instance_file, "JSON instance file");
  solve->add_option("--algo", algo, "decide-cyclic|identify-cyclic|decide-abelian|identify-abelian|brute-force");
  solve->add_option("--out", out_path, "output file (default stdout)");
  solve->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  // bench
  auto* bench = app.add_subcommand("bench", "run a suite of instances and audit query bounds");
  std::vector<std::string> groups, families, algos;
  std::string mode = "trivial", bench_out, bench_format = "csv";
  std::uint64_t count = 8, seed = 1;
  AuditConfig audit_config;
  bench->add_option("--group", groups, "signature (repeatable)");
  bench->add_option("--family", families, "Z_p^n family p:lo..hi (repeatable)");
  bench->add_option("--mode", mode)->check(CLI::IsMember({"all", "random", "trivial"}));
  bench->add_option("--count", count, "random mode: generator draws per signature");
  bench->add_option("--seed", seed, "random mode seed");
  bench->add_option("--algo", algos, "algorithm (repeatable)");
  bench->add_option("--out", bench_out, "records file (default stdout)");
  bench->add_option("--format", bench_format)->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--cd", audit_config.decide_scale, "decision bound scale");
  bench->add_option("--cd-offset", audit_config.decide_offset, "decision bound offset");
  bench->add_option("--ci", audit_config.identify_scale, "identification bound scale");

  auto* verify = app.add_subcommand("verify", "run the built-in property batteries");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      GroupSignature sig;
      std::vector<GroupElement> elems;
      if (!instance_file.empty()) {
        auto spec = load_instance_file(instance_file);
        sig = spec.sig;
        elems = spec.generators;
      } else {
        if (group.empty()) throw HspError("solve needs --group or --instance-file");
        sig = parse_signature(group);
        for (auto& g : parse_element_list(gens)) elems.push_back(canonicalize(sig, g));
      }
      auto rec = run_solve(sig, elems, parse_algorithm(algo), "solve", {}, cap);
      write_output(out_path, render({rec}, format));
      return rec.pass ? 0 : 1;
    }
    if (*bench) {
      SuiteConfig config;
      config.signatures = groups;
      for (const auto& f : families) {
        for (auto& s : expand_family(f)) config.signatures.push_back(s);
      }
      config.mode = mode == "all" ? SuiteMode::AllSubgroups
                                  : mode == "random" ? SuiteMode::RandomSubgroups : SuiteMode::TrivialOnly;
      config.random_count = count;
      config.seed = seed;
      for (const auto& a : algos) config.algorithms.push_back(parse_algorithm(a));
      config.cap = cap;
      config.audit = audit_config;
      auto result = run_bench(config);
      write_output(bench_out, render(result.records, bench_format));
      (bench_out.empty() || bench_out == "-" ? std::cerr : std::cout) << format_summary(result);
      bool ok = true;
      for (const auto& r : result.audit.reports) ok = ok && r.pass;
      for (const auto& c : result.audit.classes) ok = ok && c.consistent;
      return ok ? 0 : 1;
    }
    if (*verify) {
      bool ok = true;
      for (const auto& b : run_verify_batteries(cap)) {
        std::cout << (b.ok() ? "PASS " : "FAIL ") << b.name << ": " << b.passed << " passed, " << b.failed
                  << " failed, " << b.skipped << " skipped";
        if (!b.ok()) std::cout << "  first failure: " << b.first_failure;
        std::cout << '\n';
        ok = ok && b.ok();
      }
      return ok ? 0 : 1;
    }
  } catch (const HspError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
