#include "hspkit/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace hspkit {

namespace {

void sort_unique(std::vector<GroupElement>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

Residue neg_mod(std::uint64_t x, std::uint64_t m) {
  return static_cast<Residue>((m - x % m) % m);
}

// Elements of W with coordinate i replaced by `value`.
std::vector<GroupElement> with_coordinate(std::span<const GroupElement> w, std::size_t i,
                                          Residue value) {
  std::vector<GroupElement> out(w.begin(), w.end());
  for (auto& g : out) g.coords[i] = value;
  return out;
}

// Labels of a query set A, keyed to the least element of A carrying each label.
class CollisionIndex {
 public:
  CollisionIndex(CountingOracle& oracle, std::span<const GroupElement> a) {
    for (const auto& x : a) {
      auto l = oracle.query(x);
      auto [it, inserted] = least_.emplace(std::move(l), x);
      if (!inserted && x < it->second) it->second = x;
    }
  }

  // Queries all of B, then reports the least matching pair.
  std::optional<Collision> scan(CountingOracle& oracle, std::span<const GroupElement> b) const {
    std::vector<Label> labels;
    labels.reserve(b.size());
    for (const auto& y : b) labels.push_back(oracle.query(y));
    std::optional<Collision> best;
    for (std::size_t k = 0; k < b.size(); ++k) {
      auto it = least_.find(labels[k]);
      if (it == least_.end()) continue;
      Collision c{it->second, b[k]};
      if (!best || std::tie(c.x, c.y) < std::tie(best->x, best->y)) best = std::move(c);
    }
    return best;
  }

 private:
  std::unordered_map<Label, GroupElement, LabelHash> least_;
};

void require_cyclic(const CountingOracle& oracle, const char* who) {
  if (oracle.signature().rank() != 1) {
    throw HspError(std::string(who) + " needs a single-factor signature, got " +
                   oracle.signature().to_string());
  }
}

}  // namespace

std::uint64_t ceil_sqrt_ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw HspError("ceil_sqrt_ratio: zero denominator");
  if (num == 0) return 0;
  auto fits = [&](std::uint64_t s) {
    const auto lhs = static_cast<unsigned __int128>(s) * s * den;
    return lhs >= num;
  };
  auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(num) / static_cast<double>(den)));
  while (s > 0 && fits(s - 1)) --s;
  while (!fits(s)) ++s;
  return s;
}

std::uint64_t w1_size_bound(std::uint64_t v_size, std::uint64_t r) {
  return 2 * ceil_sqrt_ratio(v_size * r, 1);
}

std::uint64_t w2_size_bound(std::uint64_t v_size, std::uint64_t r) {
  return ceil_sqrt_ratio(v_size, r);
}

GeneratingPair find_pair(const GroupSignature& sig, const ExponentVector& v, std::uint64_t r,
                         std::uint64_t cap) {
  if (r < 1) throw HspError("find_pair: balance r must be >= 1");
  v.validate(sig);
  const std::uint64_t n = v.size(sig);
  if (n > cap) {
    throw CapExceeded("find_pair: |V| = " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  }
  GeneratingPair pair{{}, {}, v, r};
  const std::size_t l = sig.rank();
  const std::uint64_t s = ceil_sqrt_ratio(n, r);

  if (n == 1) {
    pair.w1 = {identity(sig)};
    pair.w2 = {identity(sig)};
    return pair;
  }
  if (s <= 1) {
    // Only reachable for r >= |V|; then |W1| = |V| <= 2 ceil(sqrt(|V| r)).
    pair.w1 = representative_set_elements(sig, v, cap);
    pair.w2 = {identity(sig)};
    return pair;
  }

  // suffix[i] = prod_{m >= i} p_m^{j_m}; suffix[l] = 1 < s <= suffix[0] = |V|.
  std::vector<std::uint64_t> suffix(l + 1, 1);
  for (std::size_t i = l; i > 0; --i) suffix[i - 1] = suffix[i] * v.range(sig, i - 1);
  std::size_t pivot = 0;
  for (std::size_t i = l; i > 0; --i) {
    if (suffix[i - 1] >= s) {
      pivot = i - 1;
      break;
    }
  }
  if (!(suffix[pivot + 1] < s && s <= suffix[pivot])) {
    throw InvariantViolation("find_pair: no pivot satisfies the suffix-product inequality");
  }

  const std::uint64_t a = s / suffix[pivot + 1];
  const std::uint64_t pivot_range = v.range(sig, pivot);
  const std::uint64_t b = (pivot_range + a - 1) / a;
  const std::uint64_t pivot_mod = sig.modulus(pivot);

  // W1: full ranges before the pivot, {0..b-1} on it.
  ExponentVector head = ExponentVector::zeros(sig);
  for (std::size_t m = 0; m < pivot; ++m) head.exps[m] = v.exps[m];
  for (auto& g : representative_set_elements(sig, head, cap)) {
    for (std::uint64_t x = 0; x < b; ++x) {
      g.coords[pivot] = static_cast<Residue>(x % pivot_mod);
      pair.w1.push_back(g);
    }
  }

  // W2: {-c*b : c < a} on the pivot, negated full ranges after it.
  ExponentVector tail = ExponentVector::zeros(sig);
  for (std::size_t m = pivot + 1; m < l; ++m) tail.exps[m] = v.exps[m];
  for (auto g : representative_set_elements(sig, tail, cap)) {
    for (std::size_t m = pivot + 1; m < l; ++m) {
      g.coords[m] = neg_mod(static_cast<std::uint64_t>(g.coords[m]), sig.modulus(m));
    }
    for (std::uint64_t c = 0; c < a; ++c) {
      const auto cb = static_cast<std::uint64_t>((static_cast<unsigned __int128>(c) * b) % pivot_mod);
      g.coords[pivot] = neg_mod(cb, pivot_mod);
      pair.w2.push_back(g);
    }
  }
  sort_unique(pair.w1);
  sort_unique(pair.w2);
  return pair;
}

std::optional<Collision> scan_collision(CountingOracle& oracle, std::span<const GroupElement> a,
                                        std::span<const GroupElement> b) {
  CollisionIndex index(oracle, a);
  return index.scan(oracle, b);
}

std::string to_string(Verdict v) { return v == Verdict::Trivial ? "Trivial" : "NonTrivial"; }

DecisionOutcome decide_cyclic_prime_power(CountingOracle& oracle) {
  require_cyclic(oracle, "decide_cyclic_prime_power");
  const auto& sig = oracle.signature();
  const auto start = oracle.count();
  const auto& f = sig.factors()[0];
  const GroupElement zero = identity(sig);
  const GroupElement top{static_cast<Residue>(checked_pow(f.prime, f.exponent - 1))};

  DecisionOutcome out;
  if (oracle.query(zero) == oracle.query(top)) {
    out.verdict = Verdict::NonTrivial;
    out.witness = Collision{zero, top};
  }
  out.queries = oracle.count() - start;
  return out;
}

IdentificationOutcome identify_cyclic_prime_power(CountingOracle& oracle) {
  require_cyclic(oracle, "identify_cyclic_prime_power");
  const auto& sig = oracle.signature();
  const auto start = oracle.count();
  const auto& f = sig.factors()[0];
  const GroupElement zero = identity(sig);
  const Label base = oracle.query(zero);

  IdentificationOutcome out;
  PhaseRecord phase{1, f.exponent, std::nullopt, 0};
  std::vector<GroupElement> gens;
  for (unsigned i = 0; i < f.exponent; ++i) {
    const GroupElement power{static_cast<Residue>(checked_pow(f.prime, i))};
    if (oracle.query(power) == base) {
      phase.t = i;
      phase.collision = power;
      gens.push_back(power);
      break;
    }
  }
  out.recovered = closure(sig, gens);
  out.trace.push_back(std::move(phase));
  out.queries = oracle.count() - start;
  return out;
}

double decide_abelian_trivial_bound(const GroupSignature& sig) {
  const double root = std::sqrt(static_cast<double>(sig.prefix_order(sig.rank() - 1)));
  return 2.0 * (root + 1.0) + root / (1.0 - 1.0 / std::sqrt(2.0)) + static_cast<double>(sig.rank());
}

DecisionOutcome decide_abelian(CountingOracle& oracle, const SolverChecks& checks) {
  const auto& sig = oracle.signature();
  const auto start = oracle.count();
  std::vector<GroupElement> w1{identity(sig)};
  std::vector<GroupElement> w2{identity(sig)};

  DecisionOutcome out;
  for (std::size_t i = 0; i < sig.rank(); ++i) {
    const auto& f = sig.factors()[i];
    const auto top = static_cast<Residue>(checked_pow(f.prime, f.exponent - 1));
    const auto a = with_coordinate(w1, i, 0);
    const auto b = with_coordinate(w2, i, top);
    if (auto hit = scan_collision(oracle, a, b)) {
      out.verdict = Verdict::NonTrivial;
      out.witness = std::move(hit);
      out.queries = oracle.count() - start;
      return out;
    }
    if (i + 1 < sig.rank()) {
      auto pair = find_pair(sig, ExponentVector::prefix(sig, i + 1), 1);
      w1 = std::move(pair.w1);
      w2 = std::move(pair.w2);
    }
  }
  out.queries = oracle.count() - start;
  if (checks.check_bounds && static_cast<double>(out.queries) > decide_abelian_trivial_bound(sig)) {
    throw InvariantViolation("decide_abelian used " + std::to_string(out.queries) +
                             " queries on a trivial instance over " + sig.to_string() +
                             ", above the bound " + std::to_string(decide_abelian_trivial_bound(sig)));
  }
  return out;
}

IdentificationOutcome identify_abelian(CountingOracle& oracle, const SolverChecks& checks) {
  const auto& sig = oracle.signature();
  const auto start = oracle.count();
  ExponentVector v = ExponentVector::zeros(sig);
  std::vector<GroupElement> w1{identity(sig)};
  std::vector<GroupElement> w2{identity(sig)};
  std::vector<GroupElement> found;  // generators of H'
  std::uint64_t r = 0;

  IdentificationOutcome out;
  for (std::size_t i = 0; i < sig.rank(); ++i) {
    const auto& f = sig.factors()[i];
    const auto a = with_coordinate(w1, i, 0);
    const CollisionIndex index(oracle, a);
    PhaseRecord phase{i + 1, f.exponent, std::nullopt, 0};

    for (unsigned j = 0; j < f.exponent; ++j) {
      const auto b = with_coordinate(w2, i, static_cast<Residue>(checked_pow(f.prime, j)));
      if (auto hit = index.scan(oracle, b)) {
        auto h = sub(sig, hit->x, hit->y);
        found.push_back(h);
        phase.collision = std::move(h);
        phase.t = j;
        if (j == 0) ++r;
        break;
      }
    }
    v.exps[i] = phase.t;
    phase.r_after = r;
    out.trace.push_back(phase);

    if (checks.reference) {
      const Subgroup partial = closure(sig, found);
      const Subgroup expected = prefix_subgroup(*checks.reference, i + 1);
      if (!(partial == expected)) {
        throw InvariantViolation("identify_abelian phase " + std::to_string(i + 1) + ": H' = " +
                                 partial.canonical_string() + " but H_i = " +
                                 expected.canonical_string());
      }
      if (partial.order() * v.size(sig) != sig.prefix_order(i + 1)) {
        throw InvariantViolation("identify_abelian phase " + std::to_string(i + 1) +
                                 ": |H'| * |V| != |G_i|");
      }
    }
    if (i + 1 < sig.rank()) {
      auto pair = find_pair(sig, v, std::max<std::uint64_t>(1, r));
      w1 = std::move(pair.w1);
      w2 = std::move(pair.w2);
    }
  }
  out.recovered = closure(sig, found);
  out.queries = oracle.count() - start;
  return out;
}

}  // namespace hspkit
