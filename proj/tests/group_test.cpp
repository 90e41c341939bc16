#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "hspkit/bench.hpp"
#include "hspkit/group.hpp"

using namespace hspkit;

namespace {

// Closure by fixed-point iteration over the whole group: keep adding
// pairwise sums and negations until nothing changes.
std::set<GroupElement> fixed_point_closure(const GroupSignature& sig, const std::vector<GroupElement>& gens) {
  std::set<GroupElement> s{identity(sig)};
  for (const auto& g : gens) s.insert(canonicalize(sig, g));
  while (true) {
    std::set<GroupElement> next = s;
    for (const auto& a : s) {
      next.insert(neg(sig, a));
      for (const auto& b : s) next.insert(add(sig, a, b));
    }
    if (next == s) return s;
    s = std::move(next);
  }
}

std::set<GroupElement> as_set(const Subgroup& h) {
  auto e = h.elements();
  return {e.begin(), e.end()};
}

GroupElement random_element(const GroupSignature& sig, std::mt19937_64& rng) {
  std::uniform_int_distribution<Code> d(0, sig.order() - 1);
  return decode(sig, d(rng));
}

}  // namespace

TEST(ParseSignature, Examples) {
  auto s = parse_signature("2^3");
  ASSERT_EQ(s.rank(), 1u);
  EXPECT_EQ(s.factors()[0], (Factor{2, 3}));
  EXPECT_EQ(s.order(), 8u);

  s = parse_signature("2^3,3^2");
  ASSERT_EQ(s.rank(), 2u);
  EXPECT_EQ(s.factors()[1], (Factor{3, 2}));
  EXPECT_EQ(s.order(), 72u);

  EXPECT_THROW(parse_signature("4^2"), ParseError);
}

TEST(ParseSignature, RejectsMalformedInput) {
  for (const char* bad : {"", "2^0", "2,", ",3", "2^", "^2", "2 ,3", "2^3 ", "x", "1", "2^-1", "2^^3"}) {
    EXPECT_THROW(parse_signature(bad), ParseError) << bad;
  }
}

TEST(ParseSignature, KeepsOrderAndRepeatsAndRoundTrips) {
  auto s = parse_signature("3,2,2^2,2");
  EXPECT_EQ(s.to_string(), "3,2,2^2,2");
  EXPECT_EQ(s.order(), 48u);
}

TEST(ElementText, ParseAndFormat) {
  EXPECT_EQ(parse_element("(1,0,2)"), (GroupElement{1, 0, 2}));
  EXPECT_EQ(format_element(GroupElement{1, 0, 2}), "(1,0,2)");
  EXPECT_THROW(parse_element("1,0"), ParseError);
  EXPECT_THROW(parse_element("()"), ParseError);
  EXPECT_THROW(parse_element("(1,,2)"), ParseError);
  EXPECT_TRUE(parse_element_list("").empty());
  EXPECT_EQ(parse_element_list("(1,0);(0,2)").size(), 2u);
}

TEST(Arithmetic, Examples) {
  auto s = parse_signature("2^2,3");
  EXPECT_EQ(add(s, {3, 2}, {2, 2}), (GroupElement{1, 1}));
  EXPECT_EQ(neg(parse_signature("2^3"), {3}), (GroupElement{5}));
  EXPECT_EQ(scalar_mul(s, -1, {1, 1}), (GroupElement{3, 2}));
  EXPECT_EQ(sub(s, {0, 0}, {1, 1}), (GroupElement{3, 2}));
}

TEST(Arithmetic, LengthMismatchThrows) {
  auto s = parse_signature("2^2,3");
  EXPECT_THROW(add(s, {1}, {1, 1}), HspError);
  EXPECT_THROW(neg(s, {1, 1, 1}), HspError);
  EXPECT_THROW(scalar_mul(s, 2, {1}), HspError);
}

TEST(Arithmetic, GroupLawsHoldOnRandomElements) {
  std::mt19937_64 rng(7);
  for (const auto& sig : abelian_signatures({2, 3, 5, 7}, 200)) {
    for (int it = 0; it < 20; ++it) {
      auto a = random_element(sig, rng);
      auto b = random_element(sig, rng);
      auto c = random_element(sig, rng);
      EXPECT_EQ(add(sig, a, b), add(sig, b, a));
      EXPECT_EQ(add(sig, add(sig, a, b), c), add(sig, a, add(sig, b, c)));
      EXPECT_EQ(add(sig, a, neg(sig, a)), identity(sig));
      EXPECT_EQ(sub(sig, a, b), add(sig, a, neg(sig, b)));
      EXPECT_TRUE(conforms(sig, add(sig, a, b)));
    }
    for (std::size_t i = 0; i < sig.rank(); ++i) {
      EXPECT_EQ(scalar_mul(sig, static_cast<std::int64_t>(sig.modulus(i)), unit_vector(sig, i)), identity(sig));
    }
  }
}

TEST(Encoding, CodeOrderMatchesLexicographicOrder) {
  auto sig = parse_signature("2,3^2,5");
  for (Code c = 0; c + 1 < sig.order(); ++c) {
    EXPECT_LT(decode(sig, c), decode(sig, c + 1));
    EXPECT_EQ(encode(sig, decode(sig, c)), c);
  }
}

TEST(MaxNonzeroIndex, Examples) {
  EXPECT_EQ(max_nonzero_index({0, 0, 0}), 0u);
  EXPECT_EQ(max_nonzero_index({0, 5, 0}), 2u);
  EXPECT_EQ(max_nonzero_index({1, 0, 2}), 3u);
}

TEST(Closure, Examples) {
  auto z4 = parse_signature("2^2");
  EXPECT_EQ(closure(z4, std::vector<GroupElement>{}).canonical_string(), "{(0)}");
  auto h = closure(z4, std::vector<GroupElement>{{2}});
  EXPECT_EQ(h.canonical_string(), "{(0),(2)}");
  EXPECT_EQ(h.order(), 2u);

  auto v4 = parse_signature("2,2");
  std::vector<GroupElement> gens{{1, 1}};
  auto k = closure(v4, gens);
  EXPECT_EQ(as_set(k), fixed_point_closure(v4, gens));
  EXPECT_EQ(k.canonical_string(), "{(0,0),(1,1)}");
}

TEST(Closure, CapExceededFailsLoudly) {
  auto sig = parse_signature("2^10");
  std::vector<GroupElement> gens{{1}};
  EXPECT_THROW(closure(sig, gens, 100), CapExceeded);
  EXPECT_EQ(closure(sig, gens, 1024).order(), 1024u);
}

TEST(Closure, MatchesFixedPointOracleOnAllSmallGroups) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> ngens(0, 3);
  for (const auto& sig : abelian_signatures({2, 3, 5, 7}, 512)) {
    for (int it = 0; it < 3; ++it) {
      std::vector<GroupElement> gens;
      const int n = ngens(rng);
      for (int m = 0; m < n; ++m) gens.push_back(random_element(sig, rng));
      auto h = closure(sig, gens);
      const auto oracle = fixed_point_closure(sig, gens);
      ASSERT_EQ(as_set(h), oracle) << sig.to_string();
      EXPECT_EQ(sig.order() % h.order(), 0u) << "Lagrange fails on " << sig.to_string();
      EXPECT_TRUE(h.contains(identity(sig)));
    }
  }
}

TEST(Subgroup, EqualityIgnoresGenerators) {
  auto sig = parse_signature("2^3");
  std::vector<GroupElement> a{{2}};
  std::vector<GroupElement> b{{6}, {4}};
  EXPECT_EQ(closure(sig, a), closure(sig, b));
  EXPECT_EQ(SubgroupHash{}(closure(sig, a)), SubgroupHash{}(closure(sig, b)));
}

TEST(PrefixSubgroup, Examples) {
  auto v4 = parse_signature("2,2");
  auto h = closure(v4, std::vector<GroupElement>{{1, 1}});
  EXPECT_EQ(prefix_subgroup(h, 1).canonical_string(), "{(0,0)}");
  EXPECT_EQ(prefix_subgroup(h, 0).canonical_string(), "{(0,0)}");
  EXPECT_THROW(prefix_subgroup(h, 3), HspError);

  auto z4 = parse_signature("2^2");
  auto full = closure(z4, std::vector<GroupElement>{{1}});
  EXPECT_EQ(prefix_subgroup(full, 1), full);
}

TEST(PrefixSubgroup, MatchesFiltrationAndStepsArePrimePowers) {
  std::mt19937_64 rng(3);
  for (const auto& sig : abelian_signatures({2, 3, 5}, 180)) {
    for (int it = 0; it < 4; ++it) {
      std::vector<GroupElement> gens{random_element(sig, rng), random_element(sig, rng)};
      auto h = closure(sig, gens);
      std::uint64_t prev = 1;
      for (std::size_t i = 0; i <= sig.rank(); ++i) {
        auto hi = prefix_subgroup(h, i);
        std::set<GroupElement> filtered;
        for (const auto& e : h.elements()) {
          if (max_nonzero_index(e) <= i) filtered.insert(e);
        }
        ASSERT_EQ(as_set(hi), filtered);
        EXPECT_EQ(as_set(hi), fixed_point_closure(sig, hi.elements())) << "H_i not closed";
        EXPECT_EQ(closure(sig, hi.generators()), hi);
        if (i == 0) {
          EXPECT_EQ(hi.order(), 1u);
        } else {
          // |H_i| / |H_{i-1}| is a power of p_i dividing p_i^{k_i}.
          ASSERT_EQ(hi.order() % prev, 0u);
          std::uint64_t step = hi.order() / prev;
          EXPECT_EQ(sig.modulus(i - 1) % step, 0u) << sig.to_string();
        }
        prev = hi.order();
      }
    }
  }
}

TEST(RepresentativeSet, Examples) {
  auto z8 = parse_signature("2^3");
  auto v = representative_set_elements(z8, ExponentVector{{2}});
  EXPECT_EQ(v, (std::vector<GroupElement>{{0}, {1}, {2}, {3}}));

  auto s = parse_signature("2,3");
  EXPECT_EQ(representative_set_elements(s, ExponentVector{{0, 0}}), (std::vector<GroupElement>{{0, 0}}));
  auto six = representative_set_elements(s, ExponentVector{{1, 1}});
  std::set<GroupElement> expected;
  for (Residue a = 0; a < 2; ++a) {
    for (Residue b = 0; b < 3; ++b) expected.insert({a, b});
  }
  EXPECT_EQ(std::set<GroupElement>(six.begin(), six.end()), expected);
  EXPECT_THROW(representative_set_elements(s, ExponentVector{{1, 1}}, 5), CapExceeded);
  EXPECT_THROW(representative_set_elements(s, ExponentVector{{2, 0}}), HspError);
}

TEST(EnumerationCap, EnvironmentOverride) {
  ::setenv("HSPKIT_CAP", "1234", 1);
  EXPECT_EQ(enumeration_cap(), 1234u);
  ::setenv("HSPKIT_CAP", "nonsense", 1);
  EXPECT_EQ(enumeration_cap(), kDefaultEnumerationCap);
  ::unsetenv("HSPKIT_CAP");
  EXPECT_EQ(enumeration_cap(), kDefaultEnumerationCap);
}
