#include "hspkit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "hspkit/oracle.hpp"
#include "hspkit/solvers.hpp"

namespace hspkit {

namespace {

// Partitions of n into parts <= max_part, parts non-increasing.
void partitions(unsigned n, unsigned max_part, std::vector<unsigned>& cur,
                std::vector<std::vector<unsigned>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (unsigned part = std::min(n, max_part); part >= 1; --part) {
    cur.push_back(part);
    partitions(n - part, part, cur, out);
    cur.pop_back();
  }
}

std::string join_elements(const std::vector<GroupElement>& gens) {
  std::string out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i) out += ';';
    out += format_element(gens[i]);
  }
  return out;
}

bool ambient_or_zero(const GroupSignature& sig, const ExponentVector& v) {
  for (std::size_t i = 0; i < sig.rank(); ++i) {
    if (v.exps[i] != 0 && v.exps[i] != sig.factors()[i].exponent) return false;
  }
  return true;
}

}  // namespace

std::vector<GroupSignature> abelian_signatures(const std::vector<std::uint64_t>& primes,
                                               std::uint64_t max_order) {
  std::vector<GroupSignature> out;
  std::function<void(std::size_t, std::uint64_t, std::vector<Factor>&)> rec =
      [&](std::size_t pi, std::uint64_t order, std::vector<Factor>& factors) {
        if (pi == primes.size()) {
          if (!factors.empty()) out.emplace_back(factors);
          return;
        }
        const auto p = primes[pi];
        unsigned e = 0;
        for (std::uint64_t pe = 1; order * pe <= max_order; pe *= p, ++e) {
          std::vector<std::vector<unsigned>> parts;
          std::vector<unsigned> cur;
          partitions(e, e, cur, parts);
          for (const auto& part : parts) {
            const auto size = factors.size();
            for (auto k : part) factors.push_back(Factor{p, k});
            rec(pi + 1, order * pe, factors);
            factors.resize(size);
          }
        }
      };
  std::vector<Factor> factors;
  rec(0, 1, factors);
  std::sort(out.begin(), out.end(), [](const GroupSignature& a, const GroupSignature& b) {
    return std::pair(a.order(), a.to_string()) < std::pair(b.order(), b.to_string());
  });
  return out;
}

RunRecord run_solve(const GroupSignature& sig, const std::vector<GroupElement>& gens, Algorithm algo,
                    const std::string& id, const AuditConfig& audit_config, std::uint64_t cap,
                    std::uint64_t small_group_cap) {
  if ((algo == Algorithm::DecideCyclic || algo == Algorithm::IdentifyCyclic) && sig.rank() != 1) {
    throw HspError(std::string(algorithm_name(algo)) + " needs a single-factor signature");
  }
  auto instance = std::make_shared<const HspInstance>(build_instance(sig, gens, cap));
  const Subgroup& hidden = instance->hidden();
  CountingOracle oracle(instance);

  SolverChecks checks;
#ifndef NDEBUG
  checks.reference = &hidden;
  checks.check_bounds = true;
#endif

  RunRecord rec;
  rec.id = id;
  rec.sig = sig.to_string();
  rec.gens = join_elements(gens);
  rec.order_g = sig.order();
  rec.order_h = hidden.order();
  rec.algo = algo;

  std::optional<Verdict> verdict;
  std::optional<Subgroup> recovered;
  const auto t0 = std::chrono::steady_clock::now();
  switch (algo) {
    case Algorithm::DecideCyclic:
      verdict = decide_cyclic_prime_power(oracle).verdict;
      break;
    case Algorithm::IdentifyCyclic:
      recovered = identify_cyclic_prime_power(oracle).recovered;
      break;
    case Algorithm::DecideAbelian:
      verdict = decide_abelian(oracle, checks).verdict;
      break;
    case Algorithm::IdentifyAbelian:
      recovered = identify_abelian(oracle, checks).recovered;
      break;
    case Algorithm::BruteForce:
      recovered = brute_force_identify(oracle, cap);
      break;
  }
  const auto t1 = std::chrono::steady_clock::now();
  rec.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  rec.queries_distinct = oracle.count();
  rec.queries_raw = oracle.raw_calls();
  rec.result = verdict ? to_string(*verdict) : recovered->canonical_string();

  if (sig.order() <= cap) {
    CountingOracle reference(instance);
    const Subgroup truth = brute_force_identify(reference, cap);
    const bool agree = verdict ? (*verdict == Verdict::NonTrivial) == (truth.order() > 1)
                               : *recovered == truth;
    if (!agree) {
      throw InvariantViolation(std::string(algorithm_name(algo)) + " disagrees with brute force on " +
                               rec.sig + " <" + rec.gens + ">: got " + rec.result + ", expected " +
                               truth.canonical_string());
    }
    rec.cross_checked = true;
  }

  rec.upper_bound = upper_bound_value(algo, sig, rec.order_h, audit_config);
  rec.pass = static_cast<double>(rec.queries_distinct) <= rec.upper_bound;
  if (is_identification(algo)) {
    if (auto count = count_subgroups_of_order(sig, rec.order_h, small_group_cap); count && *count > 0) {
      rec.lower_bound = lower_bound_value(sig.order(), rec.order_h, *count);
    }
  }
  return rec;
}

void SuiteConfig::validate() const {
  if (algorithms.empty()) throw HspError("bench: no algorithms selected");
  if (signatures.empty()) throw HspError("bench: no signatures given");
  for (const auto& s : signatures) {
    const auto sig = parse_signature(s);
    if (mode == SuiteMode::AllSubgroups && sig.order() > small_group_cap) {
      throw HspError("bench: all-subgroups mode needs |G| <= " + std::to_string(small_group_cap) +
                     ", got " + std::to_string(sig.order()) + " for " + s);
    }
    for (auto a : algorithms) {
      if ((a == Algorithm::DecideCyclic || a == Algorithm::IdentifyCyclic) && sig.rank() != 1) {
        throw HspError("bench: " + std::string(algorithm_name(a)) + " needs single-factor signatures, got " + s);
      }
    }
  }
}

std::vector<std::vector<GroupElement>> suite_instances(const GroupSignature& sig,
                                                       const SuiteConfig& config,
                                                       std::uint64_t sig_index) {
  std::vector<std::vector<GroupElement>> out;
  switch (config.mode) {
    case SuiteMode::TrivialOnly:
      out.emplace_back();
      break;
    case SuiteMode::AllSubgroups:
      for (const auto& h : enumerate_subgroups(sig, config.small_group_cap)) out.push_back(h.generators());
      break;
    case SuiteMode::RandomSubgroups: {
      std::mt19937_64 rng(config.seed + 0x9e3779b97f4a7c15ULL * sig_index);
      std::uniform_int_distribution<int> size_dist(1, 3);
      std::uniform_int_distribution<Code> elem_dist(0, sig.order() - 1);
      std::unordered_set<Subgroup, SubgroupHash> seen;
      for (std::uint64_t k = 0; k < config.random_count; ++k) {
        std::vector<GroupElement> gens;
        const int n = size_dist(rng);
        for (int m = 0; m < n; ++m) gens.push_back(decode(sig, elem_dist(rng)));
        if (seen.insert(closure(sig, gens, config.cap)).second) out.push_back(std::move(gens));
      }
      break;
    }
  }
  return out;
}

BenchResult run_bench(const SuiteConfig& config) {
  config.validate();
  BenchResult result;
  std::uint64_t counter = 0;
  for (std::size_t si = 0; si < config.signatures.size(); ++si) {
    const auto sig = parse_signature(config.signatures[si]);
    const auto instances = suite_instances(sig, config, si);
    for (std::size_t hi = 0; hi < instances.size(); ++hi) {
      for (auto algo : config.algorithms) {
        std::ostringstream id;
        id << 'r' << counter++ << "-g" << si << "-h" << hi;
        result.records.push_back(run_solve(sig, instances[hi], algo, id.str(), config.audit,
                                           config.cap, config.small_group_cap));
      }
    }
  }
  result.audit = audit(result.records, config.audit, config.small_group_cap);
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    result.records[i].lower_bound = result.audit.reports[i].lower_bound_value;
  }

  std::vector<std::pair<double, double>> points;
  for (const auto& r : result.records) {
    const double x = static_cast<double>(r.order_g) / static_cast<double>(r.order_h);
    if (x >= 2.0 && r.queries_distinct >= 1) points.emplace_back(x, static_cast<double>(r.queries_distinct));
  }
  std::set<double> xs;
  for (const auto& p : points) xs.insert(p.first);
  if (points.size() >= 4 && xs.size() > 1) result.fitted_exponent = fit_scaling_exponent(points);
  return result;
}

std::string format_summary(const BenchResult& result) {
  std::ostringstream out;
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> per_algo;  // total, passed
  std::map<std::string, std::uint64_t> checked;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& r = result.records[i];
    auto& [total, passed] = per_algo[std::string(algorithm_name(r.algo))];
    ++total;
    passed += result.audit.reports[i].pass;
    checked[std::string(algorithm_name(r.algo))] += r.cross_checked;
  }
  out << "records: " << result.records.size() << '\n';
  for (const auto& [name, tp] : per_algo) {
    out << "  " << name << ": " << tp.first << " runs, " << tp.second << " within upper bound, "
        << checked[name] << " cross-checked against brute force\n";
  }
  if (!result.audit.classes.empty()) {
    out << "worst-case queries per class (sig, |H|, algo): worst / ceil(lower bound)\n";
    for (const auto& c : result.audit.classes) {
      out << "  " << c.sig << "  |H|=" << c.order_h << "  " << c.algorithm << ": " << c.worst_measured
          << " / ";
      if (c.lower_bound) {
        out << static_cast<std::uint64_t>(std::ceil(*c.lower_bound - 1e-9))
            << (c.consistent ? "  ok" : "  BELOW LOWER BOUND");
      } else {
        out << "n/a";
      }
      out << '\n';
    }
  }
  out << "fitted scaling exponent: ";
  if (result.fitted_exponent) {
    out << *result.fitted_exponent;
  } else {
    out << "n/a";
  }
  out << '\n';
  return out.str();
}

std::string check_generating_pair(const GroupSignature& sig, const ExponentVector& v,
                                  std::uint64_t r, const GeneratingPair& pair) {
  const auto n = v.size(sig);
  std::ostringstream why;
  if (pair.w1.size() > w1_size_bound(n, r)) {
    why << "|W1| = " << pair.w1.size() << " > " << w1_size_bound(n, r);
  } else if (pair.w2.size() > w2_size_bound(n, r)) {
    why << "|W2| = " << pair.w2.size() << " > " << w2_size_bound(n, r);
  }
  if (!why.str().empty()) return why.str();

  std::vector<char> diff(sig.order(), 0);
  std::uint64_t distinct = 0;
  std::vector<Code> minus_w2;
  for (const auto& y : pair.w2) minus_w2.push_back(encode(sig, neg(sig, y)));
  for (const auto& x : pair.w1) {
    const Code xc = encode(sig, x);
    for (auto my : minus_w2) {
      const auto c = add_codes(sig, xc, my);
      distinct += !diff[c];
      diff[c] = 1;
    }
  }
  std::vector<Code> v_codes{0};
  for (std::size_t i = 0; i < sig.rank(); ++i) {
    const auto range = checked_pow(sig.factors()[i].prime, v.exps[i]);
    const auto base = v_codes.size();
    for (Code d = 1; d < range; ++d) {
      for (std::size_t m = 0; m < base; ++m) v_codes.push_back(v_codes[m] + d * sig.stride(i));
    }
  }
  for (auto c : v_codes) {
    if (!diff[c]) {
      why << "W1 - W2 misses " << format_element(decode(sig, c));
      return why.str();
    }
  }
  if (ambient_or_zero(sig, v) && distinct != n) {
    why << "W1 - W2 has " << distinct << " elements, expected exactly |V| = " << n;
  }
  return why.str();
}

std::vector<BatteryResult> run_verify_batteries(std::uint64_t cap) {
  std::vector<BatteryResult> out;
  const std::vector<std::uint64_t> primes{2, 3, 5, 7};

  {
    BatteryResult b;
    b.name = "promise";
    for (const auto& sig : abelian_signatures(primes, 64)) {
      if (sig.order() > cap) {
        ++b.skipped;
        continue;
      }
      for (const auto& h : enumerate_subgroups(sig, kDefaultSmallGroupCap)) {
        const auto inst = build_instance(sig, h.generators(), cap);
        if (verify_promise(inst, cap) && inst.hidden() == h) {
          ++b.passed;
        } else if (b.failed++ == 0) {
          b.first_failure = sig.to_string() + " " + h.canonical_string();
        }
      }
    }
    out.push_back(b);
  }
  {
    BatteryResult b;
    b.name = "findPair";
    for (const auto& sig : abelian_signatures(primes, 512)) {
      if (sig.order() > cap) {
        ++b.skipped;
        continue;
      }
      auto v = ExponentVector::zeros(sig);
      // Odometer over 0 <= j_i <= k_i.
      while (true) {
        for (std::uint64_t r = 1; r <= 4; ++r) {
          const auto why = check_generating_pair(sig, v, r, find_pair(sig, v, r, cap));
          if (why.empty()) {
            ++b.passed;
          } else if (b.failed++ == 0) {
            b.first_failure = sig.to_string() + " v=" + format_exponents(v) + " r=" + std::to_string(r) + ": " + why;
          }
        }
        std::size_t i = 0;
        while (i < sig.rank() && v.exps[i] == sig.factors()[i].exponent) v.exps[i++] = 0;
        if (i == sig.rank()) break;
        ++v.exps[i];
      }
    }
    out.push_back(b);
  }
  {
    BatteryResult b;
    b.name = "lemma-scaling";
    for (auto p : primes) {
      for (unsigned k = 1; checked_pow(p, k) <= 1024; ++k) {
        if (checked_pow(p, k) > cap) {
          ++b.skipped;
        } else if (check_lemma_scaling(p, k, cap)) {
          ++b.passed;
        } else if (b.failed++ == 0) {
          b.first_failure = std::to_string(p) + "^" + std::to_string(k);
        }
      }
    }
    out.push_back(b);
  }
  {
    BatteryResult b;
    b.name = "subgroup-count";
    for (auto p : primes) {
      for (unsigned n = 1; checked_pow(p, n) <= 256; ++n) {
        if (checked_pow(p, n) > cap) {
          ++b.skipped;
          continue;
        }
        std::vector<Factor> fs(n, Factor{p, 1});
        const GroupSignature sig(fs);
        std::map<std::uint64_t, std::uint64_t> by_order;
        for (const auto& h : enumerate_subgroups(sig, 256)) ++by_order[h.order()];
        for (unsigned k = 0; k <= n; ++k) {
          if (count_subgroups_zpn(p, n, k) == by_order[checked_pow(p, k)]) {
            ++b.passed;
          } else if (b.failed++ == 0) {
            b.first_failure = "Z_" + std::to_string(p) + "^" + std::to_string(n) + " k=" + std::to_string(k);
          }
        }
      }
    }
    out.push_back(b);
  }
  {
    BatteryResult b;
    b.name = "solver-agreement";
    for (const auto& sig : abelian_signatures(primes, 128)) {
      if (sig.order() > cap) {
        ++b.skipped;
        continue;
      }
      std::vector<Algorithm> algos{Algorithm::DecideAbelian, Algorithm::IdentifyAbelian};
      if (sig.rank() == 1) {
        algos.push_back(Algorithm::DecideCyclic);
        algos.push_back(Algorithm::IdentifyCyclic);
      }
      for (const auto& h : enumerate_subgroups(sig, kDefaultSmallGroupCap)) {
        for (auto a : algos) {
          try {
            auto rec = run_solve(sig, h.generators(), a, "verify", {}, cap);
            if (rec.pass && rec.cross_checked) {
              ++b.passed;
            } else if (b.failed++ == 0) {
              b.first_failure = sig.to_string() + " " + h.canonical_string() + " " +
                                std::string(algorithm_name(a)) + " exceeded its query bound";
            }
          } catch (const HspError& e) {
            if (b.failed++ == 0) b.first_failure = e.what();
          }
        }
      }
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace hspkit
