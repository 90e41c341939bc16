#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hspkit {

/// Base class for every error raised by the library.
class HspError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed signature, element, or instance text.
class ParseError : public HspError {
 public:
  using HspError::HspError;
};

/// An enumeration would exceed the configured element cap.
class CapExceeded : public HspError {
 public:
  using HspError::HspError;
};

/// A solver-internal invariant failed; always a bug.
class InvariantViolation : public HspError {
 public:
  using HspError::HspError;
};

using Residue = std::int64_t;
using Code = std::uint64_t;

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;
inline constexpr std::uint64_t kDefaultSmallGroupCap = 256;

/// Enumeration cap in effect: HSPKIT_CAP from the environment if set and
/// parseable, otherwise kDefaultEnumerationCap.
std::uint64_t enumeration_cap();

bool is_prime(std::uint64_t n);

/// Exact integer power; throws HspError on 64-bit overflow.
std::uint64_t checked_pow(std::uint64_t base, unsigned exp);

struct Factor {
  std::uint64_t prime = 2;
  unsigned exponent = 1;

  std::uint64_t modulus() const { return checked_pow(prime, exponent); }
  friend bool operator==(const Factor&, const Factor&) = default;
};

/// An ordered list of prime-power cyclic factors Z_{p_1^k_1} x ... x Z_{p_l^k_l}.
///
/// Factor order is preserved as given. Elements are encoded into a mixed-radix
/// integer Code whose numeric order coincides with the lexicographic order of
/// coordinate vectors (the first factor is the most significant digit).
class GroupSignature {
 public:
  GroupSignature() = default;
  explicit GroupSignature(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  std::uint64_t order() const { return order_; }
  std::uint64_t modulus(std::size_t i) const { return moduli_[i]; }
  const std::vector<std::uint64_t>& moduli() const { return moduli_; }
  /// Weight of coordinate i in the mixed-radix Code.
  std::uint64_t stride(std::size_t i) const { return strides_[i]; }

  /// Product of the moduli of factors [0, i) (0-based), i.e. |G_i|.
  std::uint64_t prefix_order(std::size_t i) const;

  std::string to_string() const;

  friend bool operator==(const GroupSignature& a, const GroupSignature& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<Factor> factors_;
  std::vector<std::uint64_t> moduli_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t order_ = 1;
};

/// `sig := factor ("," factor)*; factor := prime ("^" exponent)?`, no whitespace.
GroupSignature parse_signature(std::string_view text);

struct GroupElement {
  std::vector<Residue> coords;

  GroupElement() = default;
  explicit GroupElement(std::vector<Residue> c) : coords(std::move(c)) {}
  GroupElement(std::initializer_list<Residue> c) : coords(c) {}

  std::size_t size() const { return coords.size(); }
  Residue operator[](std::size_t i) const { return coords[i]; }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

std::string format_element(const GroupElement& a);
GroupElement parse_element(std::string_view text);

/// Parses a semicolon-separated list of element strings; empty text gives [].
std::vector<GroupElement> parse_element_list(std::string_view text);

GroupElement identity(const GroupSignature& sig);
GroupElement unit_vector(const GroupSignature& sig, std::size_t i);

/// Validates length and reduces every coordinate into [0, modulus).
GroupElement canonicalize(const GroupSignature& sig, GroupElement a);

/// True iff a has the signature's length and canonical residues.
bool conforms(const GroupSignature& sig, const GroupElement& a);

GroupElement add(const GroupSignature& sig, const GroupElement& a, const GroupElement& b);
GroupElement neg(const GroupSignature& sig, const GroupElement& a);
GroupElement sub(const GroupSignature& sig, const GroupElement& a, const GroupElement& b);
GroupElement scalar_mul(const GroupSignature& sig, std::int64_t c, const GroupElement& a);

/// 1-based index of the last nonzero coordinate; 0 for the identity.
std::size_t max_nonzero_index(const GroupElement& a);

Code encode(const GroupSignature& sig, const GroupElement& a);
GroupElement decode(const GroupSignature& sig, Code code);
/// a + b computed directly on codes.
Code add_codes(const GroupSignature& sig, Code a, Code b);

/// Exponents j_i with 0 <= j_i <= k_i, describing V = prod {0..p_i^{j_i}-1}.
struct ExponentVector {
  std::vector<unsigned> exps;

  static ExponentVector zeros(const GroupSignature& sig);
  static ExponentVector full(const GroupSignature& sig);
  /// (k_1, ..., k_i, 0, ..., 0): the exponents of the prefix group G_i.
  static ExponentVector prefix(const GroupSignature& sig, std::size_t i);

  void validate(const GroupSignature& sig) const;
  std::uint64_t size(const GroupSignature& sig) const;
  /// p_i^{j_i} for the 0-based factor index i.
  std::uint64_t range(const GroupSignature& sig, std::size_t i) const;

  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;
};

std::string format_exponents(const ExponentVector& v);

/// Enumerates prod {0..p_i^{j_i}-1} as full-length elements, lexicographic order.
std::vector<GroupElement> representative_set_elements(const GroupSignature& sig,
                                                      const ExponentVector& v,
                                                      std::uint64_t cap = enumeration_cap());

/// A subgroup held as its sorted element codes plus the generators it came from.
///
/// Two subgroups compare equal iff their signatures and sorted element lists
/// agree; generator lists play no part in equality.
class Subgroup {
 public:
  Subgroup() = default;

  /// Builds from an element set that is already known to be closed.
  static Subgroup from_sorted_codes(GroupSignature sig, std::vector<Code> codes,
                                    std::vector<GroupElement> generators);

  static Subgroup trivial(GroupSignature sig);

  const GroupSignature& signature() const { return sig_; }
  const std::vector<GroupElement>& generators() const { return generators_; }
  const std::vector<Code>& codes() const { return codes_; }
  std::uint64_t order() const { return codes_.size(); }
  bool is_trivial() const { return codes_.size() == 1; }

  bool contains(const GroupElement& g) const;
  bool contains_code(Code c) const;

  /// Elements decoded in canonical (lexicographic) order.
  std::vector<GroupElement> elements() const;

  /// `{(..),(..),...}` over the canonical element order.
  std::string canonical_string() const;

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.sig_ == b.sig_ && a.codes_ == b.codes_;
  }

 private:
  GroupSignature sig_;
  std::vector<Code> codes_;
  std::vector<GroupElement> generators_;
};

struct SubgroupHash {
  std::size_t operator()(const Subgroup& h) const;
};

/// <gens>: smallest subgroup containing gens. Throws CapExceeded when the
/// closure would grow past `cap` elements.
Subgroup closure(const GroupSignature& sig, std::span<const GroupElement> gens,
                 std::uint64_t cap = enumeration_cap());

/// H + <g>, computed by adjoining the cosets H + c*g until c*g falls in H.
Subgroup join(const Subgroup& h, const GroupElement& g, std::uint64_t cap = enumeration_cap());

/// H_i = {h in H : max_nonzero_index(h) <= i}, with 0 <= i <= l.
Subgroup prefix_subgroup(const Subgroup& h, std::size_t i);

}  // namespace hspkit
