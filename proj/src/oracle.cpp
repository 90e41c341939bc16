#include "hspkit/oracle.hpp"

#include <fstream>
#include <mutex>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace hspkit {

HspInstance::HspInstance(GroupSignature sig, Subgroup hidden, LabelFunction label_of)
    : sig_(std::move(sig)), hidden_(std::move(hidden)), label_of_(std::move(label_of)) {
  if (!(hidden_.signature() == sig_)) throw HspError("hidden subgroup lives in a different group");
}

HspInstance build_instance(const GroupSignature& sig, std::span<const GroupElement> gens,
                           std::uint64_t cap) {
  Subgroup hidden = closure(sig, gens, cap);
  auto members = std::make_shared<const std::vector<GroupElement>>(hidden.elements());
  LabelFunction label;
  if (sig.order() <= kLabelTableLimit) {
    // Built on first query. Sweeping codes upward, the first unassigned code
    // of each coset is its minimum.
    struct Table {
      std::once_flag once;
      std::vector<Code> rep;
    };
    auto table = std::make_shared<Table>();
    label = [sig, member_codes = hidden.codes(), table](const GroupElement& g) {
      std::call_once(table->once, [&] {
        table->rep.assign(sig.order(), ~Code{0});
        for (Code c = 0; c < sig.order(); ++c) {
          if (table->rep[c] != ~Code{0}) continue;
          for (auto h : member_codes) table->rep[add_codes(sig, c, h)] = c;
        }
      });
      return Label(format_element(decode(sig, table->rep[encode(sig, canonicalize(sig, g))])));
    };
  } else {
    label = [sig, members](const GroupElement& g) {
      const GroupElement x = canonicalize(sig, g);
      Code best = ~Code{0};
      for (const auto& h : *members) {
        Code c = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          const auto m = sig.modulus(i);
          c += ((static_cast<Code>(x[i]) + static_cast<Code>(h[i])) % m) * sig.stride(i);
        }
        best = std::min(best, c);
      }
      return Label(format_element(decode(sig, best)));
    };
  }
  return HspInstance(sig, std::move(hidden), std::move(label));
}

bool verify_promise(const HspInstance& instance, std::uint64_t cap) {
  const auto& sig = instance.signature();
  if (sig.order() > cap) {
    throw CapExceeded("verify_promise on |G| = " + std::to_string(sig.order()) + " exceeds cap " +
                      std::to_string(cap));
  }
  const auto members = instance.hidden().elements();
  // g1 - g2 in H  <=>  g1 in g2 + H, so labels must be constant on each coset
  // and distinct across cosets.
  std::vector<char> seen(sig.order(), 0);
  std::unordered_set<Label, LabelHash> used;
  for (Code c = 0; c < sig.order(); ++c) {
    if (seen[c]) continue;
    const GroupElement rep = decode(sig, c);
    const Label l = instance.label_of(rep);
    if (!used.insert(l).second) return false;
    for (const auto& h : members) {
      const GroupElement g = add(sig, rep, h);
      seen[encode(sig, g)] = 1;
      if (!(instance.label_of(g) == l)) return false;
    }
  }
  return true;
}

CountingOracle::CountingOracle(std::shared_ptr<const HspInstance> instance)
    : instance_(std::move(instance)) {
  if (!instance_) throw HspError("oracle needs an instance");
}

Label CountingOracle::query(const GroupElement& g) {
  if (!conforms(signature(), g)) {
    throw HspError("malformed query element " + format_element(g) + " for signature " +
                   signature().to_string());
  }
  ++raw_calls_;
  const Code c = encode(signature(), g);
  auto it = cache_.find(c);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(c, instance_->label_of(g)).first->second;
}

bool CountingOracle::was_queried(const GroupElement& g) const {
  return conforms(signature(), g) && cache_.contains(encode(signature(), g));
}

std::string instance_to_json(const InstanceSpec& spec) {
  nlohmann::json j;
  j["sig"] = spec.sig.to_string();
  j["generators"] = nlohmann::json::array();
  for (const auto& g : spec.generators) j["generators"].push_back(format_element(g));
  return j.dump();
}

InstanceSpec instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("sig") || !j["sig"].is_string() || !j.contains("generators") ||
      !j["generators"].is_array()) {
    throw ParseError(R"(instance file must be {"sig": "...", "generators": [...]})");
  }
  InstanceSpec spec{parse_signature(j["sig"].get<std::string>()), {}};
  for (const auto& g : j["generators"]) {
    if (!g.is_string()) throw ParseError("generator entries must be element strings");
    auto e = parse_element(g.get<std::string>());
    if (e.size() != spec.sig.rank()) throw ParseError("generator length does not match signature");
    spec.generators.push_back(canonicalize(spec.sig, std::move(e)));
  }
  return spec;
}

InstanceSpec load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw HspError("cannot open instance file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str());
}

}  // namespace hspkit
