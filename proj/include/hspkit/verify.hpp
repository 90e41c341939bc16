#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hspkit/group.hpp"
#include "hspkit/oracle.hpp"
#include "hspkit/record.hpp"

namespace hspkit {

/// Queries every element of G and returns {g : f(g) = f(0)}. Exactly |G| queries.
Subgroup brute_force_identify(CountingOracle& oracle, std::uint64_t cap = enumeration_cap());

/// All subgroups of G, found by breadth-first search over the subgroup lattice
/// from the trivial subgroup, adjoining one element at a time. Results are in
/// discovery order (non-decreasing order of subgroup size within each layer).
///
/// Throws CapExceeded when |G| > group_cap or more than max_subgroups
/// subgroups turn up.
std::vector<Subgroup> enumerate_subgroups(const GroupSignature& sig,
                                          std::uint64_t group_cap = kDefaultSmallGroupCap,
                                          std::uint64_t max_subgroups = UINT64_MAX);

/// Number of subgroups of order p^k in Z_p^n (the Gaussian binomial), via the
/// product of (p^n - p^j)/(p^k - p^j) over j < k in exact arithmetic.
std::uint64_t count_subgroups_zpn(std::uint64_t p, unsigned n, unsigned k);

/// log(count_h) / log(order_g / order_h); nullopt when order_g / order_h < 2,
/// where the bound says nothing.
std::optional<double> lower_bound_value(std::uint64_t order_g, std::uint64_t order_h,
                                        std::uint64_t count_h);

/// Number of subgroups of the given order: closed form for Z_p^n, enumeration
/// when |G| <= group_cap, otherwise nullopt.
std::optional<std::uint64_t> count_subgroups_of_order(const GroupSignature& sig,
                                                      std::uint64_t order_h,
                                                      std::uint64_t group_cap = kDefaultSmallGroupCap);

/// For every nonzero h in Z_{p^k}, some b has b*h = p^{k-1} (mod p^k).
/// Checked by exhaustive search over b, and the constructed witness
/// b = (h mod p)^{-1} p^{k-1} is checked as well.
bool check_lemma_scaling(std::uint64_t p, unsigned k, std::uint64_t cap = enumeration_cap());

struct AuditConfig {
  double decide_scale = 10.0;   // C_d
  double decide_offset = 10.0;  // C_d'
  double identify_scale = 12.0; // C_i
};

/// Concrete query ceiling for a run of `algo` on G with |H| = order_h.
double upper_bound_value(Algorithm algo, const GroupSignature& sig, std::uint64_t order_h,
                         const AuditConfig& config = {});

struct BoundReport {
  std::string instance_id;
  std::string algorithm;
  std::uint64_t measured = 0;
  double upper_bound_value = 0.0;
  std::optional<double> lower_bound_value;  // class-level; see ClassBound
  bool pass = false;
};

/// Worst case of one (signature, |H|, algorithm) class against the
/// decision-tree lower bound.
struct ClassBound {
  std::string sig;
  std::uint64_t order_h = 0;
  std::string algorithm;
  std::uint64_t worst_measured = 0;
  std::uint64_t instances = 0;
  std::optional<std::uint64_t> count_h;
  std::optional<double> lower_bound;
  /// worst_measured >= ceil(lower_bound); true when no bound is available.
  bool consistent = true;
};

struct AuditResult {
  std::vector<BoundReport> reports;
  std::vector<ClassBound> classes;
};

/// Checks every record against its algorithm's ceiling and every
/// identification class against the lower bound.
AuditResult audit(const std::vector<RunRecord>& records, const AuditConfig& config = {},
                  std::uint64_t group_cap = kDefaultSmallGroupCap);

/// Least-squares slope of log y against log x.
double fit_scaling_exponent(const std::vector<std::pair<double, double>>& points);

}  // namespace hspkit
