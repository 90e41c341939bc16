#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "hspkit/group.hpp"

namespace hspkit {

/// Opaque coset label. Solvers may only compare labels for equality.
class Label {
 public:
  Label() = default;
  explicit Label(std::string token) : token_(std::move(token)) {}

  const std::string& token() const { return token_; }

  friend bool operator==(const Label&, const Label&) = default;

 private:
  std::string token_;
};

struct LabelHash {
  std::size_t operator()(const Label& l) const { return std::hash<std::string>{}(l.token()); }
};

using LabelFunction = std::function<Label(const GroupElement&)>;

/// A group, a hidden subgroup, and a function constant exactly on its cosets.
class HspInstance {
 public:
  /// Test-only path: pairs an arbitrary labeling with a claimed hidden subgroup.
  /// The promise is not checked; see verify_promise.
  HspInstance(GroupSignature sig, Subgroup hidden, LabelFunction label_of);

  const GroupSignature& signature() const { return sig_; }
  const Subgroup& hidden() const { return hidden_; }
  Label label_of(const GroupElement& g) const { return label_of_(g); }

 private:
  GroupSignature sig_;
  Subgroup hidden_;
  LabelFunction label_of_;
};

/// Groups up to this order get a precomputed coset-minimum table.
inline constexpr std::uint64_t kLabelTableLimit = 1u << 16;

/// hidden = <gens>; each element is labeled by the lexicographically smallest
/// member of its coset, rendered as an element string.
HspInstance build_instance(const GroupSignature& sig, std::span<const GroupElement> gens,
                           std::uint64_t cap = enumeration_cap());

/// Exhaustively checks f(g1) == f(g2) <=> g1 - g2 in H over all of G.
bool verify_promise(const HspInstance& instance, std::uint64_t cap = enumeration_cap());

/// Query front end with a per-run cache; count() is the number of distinct
/// elements queried, raw_calls() the number of query() invocations.
class CountingOracle {
 public:
  explicit CountingOracle(std::shared_ptr<const HspInstance> instance);

  const GroupSignature& signature() const { return instance_->signature(); }

  Label query(const GroupElement& g);

  std::uint64_t count() const { return cache_.size(); }
  std::uint64_t raw_calls() const { return raw_calls_; }
  bool was_queried(const GroupElement& g) const;

 private:
  std::shared_ptr<const HspInstance> instance_;
  std::unordered_map<Code, Label> cache_;
  std::uint64_t raw_calls_ = 0;
};

/// On-disk instance: {"sig": "<signature>", "generators": ["(..)", ...]}.
struct InstanceSpec {
  GroupSignature sig;
  std::vector<GroupElement> generators;
};

std::string instance_to_json(const InstanceSpec& spec);
InstanceSpec instance_from_json(const std::string& text);
InstanceSpec load_instance_file(const std::string& path);

}  // namespace hspkit
