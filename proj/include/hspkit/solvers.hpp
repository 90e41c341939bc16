#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hspkit/group.hpp"
#include "hspkit/oracle.hpp"

namespace hspkit {

/// Sets W1, W2 whose ambient difference set W1 - W2 covers the representative
/// set V, so |W1| + |W2| queries test every member of V for membership in H.
struct GeneratingPair {
  std::vector<GroupElement> w1;  // sorted, unique
  std::vector<GroupElement> w2;  // sorted, unique
  ExponentVector over;
  std::uint64_t balance = 1;
};

/// Builds a generating pair for V with balance r. Makes no oracle queries.
///
/// With s = ceil(sqrt(|V|/r)), the pivot i is the unique factor where the
/// suffix product of V's ranges crosses s; W1 spans the ranges before the pivot
/// and a short run {0..b-1} on it, W2 the strided run {0,-b,..,-(a-1)b} on the
/// pivot and the negated ranges after it. Negatives are reduced modulo the
/// ambient moduli, which is what the oracle subtracts with.
GeneratingPair find_pair(const GroupSignature& sig, const ExponentVector& v, std::uint64_t r,
                         std::uint64_t cap = enumeration_cap());

/// Upper bounds a generating pair must respect: 2*ceil(sqrt(|V| r)) and ceil(sqrt(|V|/r)).
std::uint64_t w1_size_bound(std::uint64_t v_size, std::uint64_t r);
std::uint64_t w2_size_bound(std::uint64_t v_size, std::uint64_t r);

/// Smallest s >= 0 with s*s*den >= num, i.e. ceil(sqrt(num/den)).
std::uint64_t ceil_sqrt_ratio(std::uint64_t num, std::uint64_t den);

struct Collision {
  GroupElement x;
  GroupElement y;
  friend bool operator==(const Collision&, const Collision&) = default;
};

/// Queries all of A, then all of B, and returns the least (x, y) in A x B
/// (ordered by x, then y) with f(x) == f(y).
std::optional<Collision> scan_collision(CountingOracle& oracle, std::span<const GroupElement> a,
                                        std::span<const GroupElement> b);

enum class Verdict { Trivial, NonTrivial };

std::string to_string(Verdict v);

struct DecisionOutcome {
  Verdict verdict = Verdict::Trivial;
  std::uint64_t queries = 0;
  std::optional<Collision> witness;
};

struct PhaseRecord {
  std::size_t index = 0;        // 1-based factor index
  unsigned t = 0;               // exponent recorded for V at this factor
  std::optional<GroupElement> collision;  // x - y when found
  std::uint64_t r_after = 0;
};

struct IdentificationOutcome {
  Subgroup recovered;
  std::uint64_t queries = 0;
  std::vector<PhaseRecord> trace;
};

/// Test-harness hooks. With `reference` set, identify_abelian checks after each
/// phase that <H'> equals the reference's prefix subgroup and that
/// |<H'>| * |V| = |G_i|; decide_abelian checks its query bound on a Trivial
/// verdict when `check_bounds` is set. Failures throw InvariantViolation.
struct SolverChecks {
  const Subgroup* reference = nullptr;
  bool check_bounds = false;
};

/// Two queries: f(0) and f(p^{k-1}). Single-factor signatures only.
DecisionOutcome decide_cyclic_prime_power(CountingOracle& oracle);

/// Queries 0, then p^0, p^1, ... until f(0) == f(p^i); returns <p^i> or {0}.
IdentificationOutcome identify_cyclic_prime_power(CountingOracle& oracle);

DecisionOutcome decide_abelian(CountingOracle& oracle, const SolverChecks& checks = {});

IdentificationOutcome identify_abelian(CountingOracle& oracle, const SolverChecks& checks = {});

/// 2(sqrt|G_{l-1}|+1) + sqrt|G_{l-1}|/(1-1/sqrt2) + l: the query bound the
/// decision procedure obeys when it runs all l phases.
double decide_abelian_trivial_bound(const GroupSignature& sig);

}  // namespace hspkit
