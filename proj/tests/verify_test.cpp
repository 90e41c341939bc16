#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "hspkit/bench.hpp"
#include "hspkit/verify.hpp"

using namespace hspkit;

namespace {

// Gaussian binomial by the q-Pascal recurrence [n,k] = [n-1,k-1] + p^k [n-1,k].
std::uint64_t gaussian_recurrence(std::uint64_t p, unsigned n, unsigned k) {
  if (k == 0 || k == n) return 1;
  if (k > n) return 0;
  return gaussian_recurrence(p, n - 1, k - 1) + checked_pow(p, k) * gaussian_recurrence(p, n - 1, k);
}

std::shared_ptr<const HspInstance> make(const char* sig, std::vector<GroupElement> gens) {
  return std::make_shared<const HspInstance>(build_instance(parse_signature(sig), gens));
}

RunRecord record(const char* sig, std::uint64_t order_h, Algorithm algo, std::uint64_t queries) {
  RunRecord r;
  r.id = "t";
  r.sig = sig;
  r.order_g = parse_signature(sig).order();
  r.order_h = order_h;
  r.algo = algo;
  r.queries_distinct = queries;
  r.queries_raw = queries;
  return r;
}

}  // namespace

TEST(BruteForce, Examples) {
  CountingOracle a(make("2^2", {{2}}));
  EXPECT_EQ(brute_force_identify(a).canonical_string(), "{(0),(2)}");
  EXPECT_EQ(a.count(), 4u);

  CountingOracle b(make("2,3", {{1, 0}}));
  EXPECT_EQ(brute_force_identify(b).canonical_string(), "{(0,0),(1,0)}");

  CountingOracle c(make("3,5", {}));
  EXPECT_TRUE(brute_force_identify(c).is_trivial());
  EXPECT_EQ(c.count(), 15u);

  CountingOracle d(make("2^4", {}));
  EXPECT_THROW(brute_force_identify(d, 8), CapExceeded);
}

TEST(EnumerateSubgroups, Examples) {
  auto z4 = enumerate_subgroups(parse_signature("2^2"));
  ASSERT_EQ(z4.size(), 3u);
  std::map<std::uint64_t, std::string> by_order;
  for (const auto& h : z4) by_order[h.order()] = h.canonical_string();
  EXPECT_EQ(by_order[1], "{(0)}");
  EXPECT_EQ(by_order[2], "{(0),(2)}");
  EXPECT_EQ(by_order[4], "{(0),(1),(2),(3)}");

  EXPECT_EQ(enumerate_subgroups(parse_signature("2,2")).size(), 5u);
  EXPECT_EQ(enumerate_subgroups(parse_signature("3")).size(), 2u);
  EXPECT_THROW(enumerate_subgroups(parse_signature("2^9")), CapExceeded);
  EXPECT_THROW(enumerate_subgroups(parse_signature("2,2,2,2"), 256, 10), CapExceeded);
}

TEST(EnumerateSubgroups, CyclicGroupsHaveChainLattices) {
  for (const char* s : {"2^6", "3^4", "5^3", "7^2"}) {
    auto sig = parse_signature(s);
    EXPECT_EQ(enumerate_subgroups(sig).size(), sig.factors()[0].exponent + 1u) << s;
  }
  // Z_n for squarefree n has 2^(number of primes) subgroups.
  EXPECT_EQ(enumerate_subgroups(parse_signature("2,3,5,7")).size(), 16u);
}

TEST(CountSubgroupsZpn, Examples) {
  EXPECT_EQ(count_subgroups_zpn(2, 2, 1), 3u);
  EXPECT_EQ(count_subgroups_zpn(2, 4, 2), 35u);
  EXPECT_EQ(count_subgroups_zpn(5, 3, 0), 1u);
  EXPECT_THROW(count_subgroups_zpn(2, 2, 3), HspError);
  EXPECT_THROW(count_subgroups_zpn(4, 2, 1), HspError);
}

TEST(CountSubgroupsZpn, MatchesRecurrenceSymmetryAndStrictBound) {
  for (std::uint64_t p : {2, 3, 5, 7, 11}) {
    for (unsigned n = 0; n <= 8; ++n) {
      for (unsigned k = 0; k <= n; ++k) {
        const auto c = count_subgroups_zpn(p, n, k);
        EXPECT_EQ(c, gaussian_recurrence(p, n, k)) << p << " " << n << " " << k;
        EXPECT_EQ(c, count_subgroups_zpn(p, n, n - k));
        if (0 < k && k < n) EXPECT_GT(c, checked_pow(p, (n - k) * k));
      }
    }
  }
}

TEST(CountSubgroupsZpn, MatchesEnumeration) {
  auto sig = parse_signature("2,2,2,2");
  std::map<std::uint64_t, std::uint64_t> by_order;
  for (const auto& h : enumerate_subgroups(sig)) ++by_order[h.order()];
  EXPECT_EQ(by_order[4], 35u);
  for (unsigned k = 0; k <= 4; ++k) EXPECT_EQ(by_order[checked_pow(2, k)], count_subgroups_zpn(2, 4, k));
}

TEST(CountSubgroupsOfOrder, ClosedFormEnumerationOrUnavailable) {
  EXPECT_EQ(count_subgroups_of_order(parse_signature("2,2,2,2,2,2,2,2,2,2"), 4), count_subgroups_zpn(2, 10, 2));
  EXPECT_EQ(count_subgroups_of_order(parse_signature("2,2"), 3), 0u);
  EXPECT_EQ(count_subgroups_of_order(parse_signature("2^2,2"), 2), 3u);  // Z_4 x Z_2
  EXPECT_EQ(count_subgroups_of_order(parse_signature("2^10,3"), 2), std::nullopt);
}

TEST(LowerBound, Examples) {
  auto v = lower_bound_value(16, 4, 35);
  ASSERT_TRUE(v);
  EXPECT_NEAR(*v, std::log(35.0) / std::log(4.0), 1e-12);
  EXPECT_NEAR(*v, 2.5646, 1e-4);
  EXPECT_EQ(std::ceil(*v), 3.0);
  EXPECT_EQ(lower_bound_value(16, 4, 1), 0.0);
  EXPECT_EQ(lower_bound_value(8, 1, 1), 0.0);
  EXPECT_FALSE(lower_bound_value(8, 8, 1));
  EXPECT_FALSE(lower_bound_value(12, 8, 1));
}

TEST(LemmaScaling, Examples) {
  // 3 * 4 = 12 = 4 (mod 8).
  EXPECT_EQ((3u * 4u) % 8u, 4u);
  EXPECT_TRUE(check_lemma_scaling(2, 3));
  EXPECT_TRUE(check_lemma_scaling(2, 1));
  for (std::uint64_t p : {2, 3, 5, 7}) {
    for (unsigned k = 1; checked_pow(p, k) <= 1024; ++k) EXPECT_TRUE(check_lemma_scaling(p, k)) << p << "^" << k;
  }
  EXPECT_THROW(check_lemma_scaling(6, 1), HspError);
  EXPECT_THROW(check_lemma_scaling(2, 11, 1024), CapExceeded);
}

TEST(Audit, CyclicAndGeneralBounds) {
  std::vector<RunRecord> recs{
      record("2^3", 8, Algorithm::DecideCyclic, 2),
      record("2^3", 4, Algorithm::IdentifyCyclic, 3),  // H = <2>, j = 1
      record("2^3", 1, Algorithm::IdentifyCyclic, 4),  // trivial: k + 1
      record("2^3", 1, Algorithm::IdentifyCyclic, 5),
      record("2,2,2,2", 1, Algorithm::IdentifyAbelian, 10000),
      record("2,2,2,2", 4, Algorithm::DecideAbelian, 30),
  };
  auto res = audit(recs);
  ASSERT_EQ(res.reports.size(), recs.size());
  EXPECT_TRUE(res.reports[0].pass);
  EXPECT_DOUBLE_EQ(res.reports[1].upper_bound_value, 3.0);
  EXPECT_TRUE(res.reports[1].pass);
  EXPECT_DOUBLE_EQ(res.reports[2].upper_bound_value, 4.0);
  EXPECT_TRUE(res.reports[2].pass);
  EXPECT_FALSE(res.reports[3].pass);
  EXPECT_FALSE(res.reports[4].pass);
  EXPECT_DOUBLE_EQ(res.reports[5].upper_bound_value, 10.0 * 2.0 + 10.0);
  EXPECT_TRUE(res.reports[5].pass);

  // Identification bound: 12 (sqrt((G/H)(1 + log2 H)) + log2 H + 1).
  EXPECT_NEAR(upper_bound_value(Algorithm::IdentifyAbelian, parse_signature("2,2,2,2"), 4),
              12.0 * (std::sqrt(4.0 * 3.0) + 3.0), 1e-9);
  AuditConfig loose{1, 1, 100};
  EXPECT_DOUBLE_EQ(upper_bound_value(Algorithm::DecideAbelian, parse_signature("2,2"), 1, loose), 3.0);
}

TEST(Audit, LowerBoundIsPerClassWorstCase) {
  std::vector<RunRecord> recs{
      record("2,2,2,2", 4, Algorithm::IdentifyAbelian, 2),
      record("2,2,2,2", 4, Algorithm::IdentifyAbelian, 3),
  };
  auto res = audit(recs);
  ASSERT_EQ(res.classes.size(), 1u);
  EXPECT_EQ(res.classes[0].worst_measured, 3u);
  EXPECT_EQ(res.classes[0].count_h, 35u);
  EXPECT_TRUE(res.classes[0].consistent);
  ASSERT_TRUE(res.reports[0].lower_bound_value);
  EXPECT_NEAR(*res.reports[0].lower_bound_value, 2.5646, 1e-4);

  recs.pop_back();
  EXPECT_FALSE(audit(recs).classes[0].consistent);
}

TEST(FitScaling, SyntheticPoints) {
  std::vector<std::pair<double, double>> sq, flat;
  for (double x : {2.0, 4.0, 16.0, 100.0, 1000.0}) {
    sq.emplace_back(x, std::sqrt(x));
    flat.emplace_back(x, 7.0);
  }
  EXPECT_NEAR(fit_scaling_exponent(sq), 0.5, 1e-9);
  EXPECT_NEAR(fit_scaling_exponent(flat), 0.0, 1e-12);
  EXPECT_THROW(fit_scaling_exponent({{2, 1}, {4, 2}, {8, 3}}), HspError);
  EXPECT_THROW(fit_scaling_exponent({{4, 1}, {4, 2}, {4, 3}, {4, 4}}), HspError);
  EXPECT_THROW(fit_scaling_exponent({{1, 1}, {4, 2}, {8, 3}, {9, 4}}), HspError);
}

TEST(FitScaling, IdentifyOnElementaryTwoGroups) {
  std::vector<std::pair<double, double>> pts;
  for (unsigned n = 4; n <= 14; ++n) {
    std::vector<Factor> fs(n, Factor{2, 1});
    auto inst = std::make_shared<const HspInstance>(build_instance(GroupSignature(fs), {}));
    CountingOracle o(inst);
    pts.emplace_back(std::ldexp(1.0, static_cast<int>(n)), static_cast<double>(identify_abelian(o).queries));
  }
  const double slope = fit_scaling_exponent(pts);
  EXPECT_GE(slope, 0.45);
  EXPECT_LE(slope, 0.6);
}
