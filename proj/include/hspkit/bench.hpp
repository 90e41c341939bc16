#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hspkit/group.hpp"
#include "hspkit/record.hpp"
#include "hspkit/solvers.hpp"
#include "hspkit/verify.hpp"

namespace hspkit {

/// Every signature over `primes` with order <= max_order, one per isomorphism
/// type: primes ascending, exponents non-increasing within a prime.
std::vector<GroupSignature> abelian_signatures(const std::vector<std::uint64_t>& primes,
                                               std::uint64_t max_order);

/// Runs one solver on a fresh oracle for <gens> and cross-checks the answer
/// against brute force when |G| <= cap. A disagreement throws InvariantViolation.
RunRecord run_solve(const GroupSignature& sig, const std::vector<GroupElement>& gens,
                    Algorithm algo, const std::string& id, const AuditConfig& audit_config = {},
                    std::uint64_t cap = enumeration_cap(),
                    std::uint64_t small_group_cap = kDefaultSmallGroupCap);

enum class SuiteMode { AllSubgroups, RandomSubgroups, TrivialOnly };

struct SuiteConfig {
  std::vector<std::string> signatures;
  SuiteMode mode = SuiteMode::TrivialOnly;
  std::uint64_t random_count = 8;
  std::uint64_t seed = 1;
  std::vector<Algorithm> algorithms;
  std::uint64_t cap = enumeration_cap();
  std::uint64_t small_group_cap = kDefaultSmallGroupCap;
  AuditConfig audit;

  /// Throws HspError on an empty algorithm list, an unparsable signature, or a
  /// group too large for all-subgroups mode.
  void validate() const;
};

/// Hidden-subgroup generator lists for one signature under the suite mode.
std::vector<std::vector<GroupElement>> suite_instances(const GroupSignature& sig,
                                                       const SuiteConfig& config,
                                                       std::uint64_t sig_index);

struct BenchResult {
  std::vector<RunRecord> records;
  AuditResult audit;
  std::optional<double> fitted_exponent;  // over all records with |G|/|H| >= 2
};

BenchResult run_bench(const SuiteConfig& config);

std::string format_summary(const BenchResult& result);

struct BatteryResult {
  std::string name;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::uint64_t skipped = 0;
  std::string first_failure;

  bool ok() const { return failed == 0; }
};

/// Desk-scale property batteries: promise checks, findPair sweep, scalar-multiple
/// sweep, subgroup-count cross-checks, and solver-vs-brute-force agreement.
/// Cases larger than `cap` are counted as skipped.
std::vector<BatteryResult> run_verify_batteries(std::uint64_t cap = enumeration_cap());

/// Checks one generating pair against its size bounds, coverage of V, and
/// exactness when V's exponents are ambient. Empty string means it passed.
std::string check_generating_pair(const GroupSignature& sig, const ExponentVector& v,
                                  std::uint64_t r, const GeneratingPair& pair);

}  // namespace hspkit
