#include "hspkit/group.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <unordered_set>

namespace hspkit {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw HspError("integer overflow in group order");
  }
  return a * b;
}

Residue reduce(std::int64_t x, std::uint64_t m) {
  const auto mm = static_cast<std::int64_t>(m);
  std::int64_t r = x % mm;
  return r < 0 ? r + mm : r;
}

// a*b mod m without overflow for the moduli we allow (m < 2^63).
Residue mul_mod(std::int64_t c, Residue a, std::uint64_t m) {
  const auto cr = static_cast<unsigned __int128>(reduce(c, m));
  return static_cast<Residue>((cr * static_cast<unsigned __int128>(a)) % m);
}

void check_length(const GroupSignature& sig, const GroupElement& a) {
  if (a.size() != sig.rank()) {
    throw HspError("element " + format_element(a) + " has length " + std::to_string(a.size()) +
                   ", signature " + sig.to_string() + " has " + std::to_string(sig.rank()) +
                   " factors");
  }
}

std::uint64_t parse_uint(std::string_view tok, std::string_view what) {
  std::uint64_t v = 0;
  if (tok.empty()) throw ParseError("empty " + std::string(what));
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError("bad " + std::string(what) + " '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::uint64_t enumeration_cap() {
  if (const char* env = std::getenv("HSPKIT_CAP")) {
    std::string_view sv(env);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (ec == std::errc{} && ptr == sv.data() + sv.size() && v > 0) return v;
  }
  return kDefaultEnumerationCap;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d : {2u, 3u, 5u, 7u, 11u, 13u}) {
    if (n % d == 0) return n == d;
  }
  for (std::uint64_t d = 17; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

GroupSignature::GroupSignature(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw HspError("signature needs at least one factor");
  moduli_.reserve(factors_.size());
  for (const auto& f : factors_) {
    if (!is_prime(f.prime)) throw HspError("factor base " + std::to_string(f.prime) + " is not prime");
    if (f.exponent < 1) throw HspError("factor exponent must be >= 1");
    moduli_.push_back(f.modulus());
    order_ = checked_mul(order_, moduli_.back());
  }
  // 2^63 keeps signed residues and Code arithmetic exact.
  if (order_ > (std::uint64_t{1} << 62)) throw HspError("group order too large");
  strides_.assign(factors_.size(), 1);
  for (std::size_t i = factors_.size() - 1; i > 0; --i) {
    strides_[i - 1] = strides_[i] * moduli_[i];
  }
}

std::uint64_t GroupSignature::prefix_order(std::size_t i) const {
  std::uint64_t r = 1;
  for (std::size_t m = 0; m < i && m < moduli_.size(); ++m) r *= moduli_[m];
  return r;
}

std::string GroupSignature::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(factors_[i].prime);
    if (factors_[i].exponent != 1) out += '^' + std::to_string(factors_[i].exponent);
  }
  return out;
}

GroupSignature parse_signature(std::string_view text) {
  if (text.empty()) throw ParseError("empty signature");
  std::vector<Factor> factors;
  for (auto tok : split(text, ',')) {
    if (tok.empty()) throw ParseError("empty factor in signature '" + std::string(text) + "'");
    Factor f;
    auto caret = tok.find('^');
    if (caret == std::string_view::npos) {
      f.prime = parse_uint(tok, "prime");
    } else {
      f.prime = parse_uint(tok.substr(0, caret), "prime");
      auto e = parse_uint(tok.substr(caret + 1), "exponent");
      if (e < 1 || e > 64) throw ParseError("exponent out of range in '" + std::string(tok) + "'");
      f.exponent = static_cast<unsigned>(e);
    }
    if (!is_prime(f.prime)) throw ParseError(std::to_string(f.prime) + " is not prime");
    factors.push_back(f);
  }
  try {
    return GroupSignature(std::move(factors));
  } catch (const ParseError&) {
    throw;
  } catch (const HspError& e) {
    throw ParseError(e.what());
  }
}

std::string format_element(const GroupElement& a) {
  std::string out = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(a[i]);
  }
  out += ')';
  return out;
}

GroupElement parse_element(std::string_view text) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') {
    throw ParseError("element must be parenthesized: '" + std::string(text) + "'");
  }
  auto body = text.substr(1, text.size() - 2);
  if (body.empty()) throw ParseError("element has no coordinates");
  GroupElement g;
  for (auto tok : split(body, ',')) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw ParseError("bad coordinate '" + std::string(tok) + "'");
    }
    g.coords.push_back(v);
  }
  return g;
}

std::vector<GroupElement> parse_element_list(std::string_view text) {
  std::vector<GroupElement> out;
  if (text.empty()) return out;
  for (auto tok : split(text, ';')) out.push_back(parse_element(tok));
  return out;
}

GroupElement identity(const GroupSignature& sig) {
  return GroupElement(std::vector<Residue>(sig.rank(), 0));
}

GroupElement unit_vector(const GroupSignature& sig, std::size_t i) {
  auto e = identity(sig);
  e.coords.at(i) = sig.modulus(i) == 1 ? 0 : 1;
  return e;
}

GroupElement canonicalize(const GroupSignature& sig, GroupElement a) {
  check_length(sig, a);
  for (std::size_t i = 0; i < a.size(); ++i) a.coords[i] = reduce(a.coords[i], sig.modulus(i));
  return a;
}

bool conforms(const GroupSignature& sig, const GroupElement& a) {
  if (a.size() != sig.rank()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || static_cast<std::uint64_t>(a[i]) >= sig.modulus(i)) return false;
  }
  return true;
}

GroupElement add(const GroupSignature& sig, const GroupElement& a, const GroupElement& b) {
  check_length(sig, a);
  check_length(sig, b);
  GroupElement r(std::vector<Residue>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    r.coords[i] = reduce(reduce(a[i], sig.modulus(i)) + reduce(b[i], sig.modulus(i)), sig.modulus(i));
  }
  return r;
}

GroupElement neg(const GroupSignature& sig, const GroupElement& a) {
  check_length(sig, a);
  GroupElement r(std::vector<Residue>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r.coords[i] = reduce(-reduce(a[i], sig.modulus(i)), sig.modulus(i));
  return r;
}

GroupElement sub(const GroupSignature& sig, const GroupElement& a, const GroupElement& b) {
  return add(sig, a, neg(sig, b));
}

GroupElement scalar_mul(const GroupSignature& sig, std::int64_t c, const GroupElement& a) {
  check_length(sig, a);
  GroupElement r(std::vector<Residue>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    r.coords[i] = mul_mod(c, reduce(a[i], sig.modulus(i)), sig.modulus(i));
  }
  return r;
}

std::size_t max_nonzero_index(const GroupElement& a) {
  for (std::size_t i = a.size(); i > 0; --i) {
    if (a[i - 1] != 0) return i;
  }
  return 0;
}

Code encode(const GroupSignature& sig, const GroupElement& a) {
  check_length(sig, a);
  Code c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    c += static_cast<Code>(reduce(a[i], sig.modulus(i))) * sig.stride(i);
  }
  return c;
}

GroupElement decode(const GroupSignature& sig, Code code) {
  GroupElement g(std::vector<Residue>(sig.rank()));
  for (std::size_t i = 0; i < sig.rank(); ++i) {
    g.coords[i] = static_cast<Residue>((code / sig.stride(i)) % sig.modulus(i));
  }
  return g;
}

ExponentVector ExponentVector::zeros(const GroupSignature& sig) {
  return ExponentVector{std::vector<unsigned>(sig.rank(), 0)};
}

ExponentVector ExponentVector::full(const GroupSignature& sig) {
  return prefix(sig, sig.rank());
}

ExponentVector ExponentVector::prefix(const GroupSignature& sig, std::size_t i) {
  auto v = zeros(sig);
  for (std::size_t m = 0; m < i && m < sig.rank(); ++m) v.exps[m] = sig.factors()[m].exponent;
  return v;
}

void ExponentVector::validate(const GroupSignature& sig) const {
  if (exps.size() != sig.rank()) throw HspError("exponent vector length does not match signature");
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] > sig.factors()[i].exponent) {
      throw HspError("exponent " + std::to_string(exps[i]) + " exceeds factor exponent at index " +
                     std::to_string(i + 1));
    }
  }
}

std::uint64_t ExponentVector::size(const GroupSignature& sig) const {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exps.size(); ++i) r *= range(sig, i);
  return r;
}

std::uint64_t ExponentVector::range(const GroupSignature& sig, std::size_t i) const {
  return checked_pow(sig.factors()[i].prime, exps[i]);
}

std::string format_exponents(const ExponentVector& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.exps.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v.exps[i]);
  }
  return out + "]";
}

std::vector<GroupElement> representative_set_elements(const GroupSignature& sig,
                                                      const ExponentVector& v, std::uint64_t cap) {
  v.validate(sig);
  const auto n = v.size(sig);
  if (n > cap) {
    throw CapExceeded("representative set of size " + std::to_string(n) + " exceeds cap " +
                      std::to_string(cap));
  }
  std::vector<GroupElement> out;
  out.reserve(n);
  GroupElement cur = identity(sig);
  // Odometer with the last coordinate fastest, which yields lexicographic order.
  for (std::uint64_t k = 0; k < n; ++k) {
    out.push_back(cur);
    for (std::size_t i = sig.rank(); i > 0; --i) {
      auto& c = cur.coords[i - 1];
      if (static_cast<std::uint64_t>(++c) < v.range(sig, i - 1)) break;
      c = 0;
    }
  }
  return out;
}

Subgroup Subgroup::from_sorted_codes(GroupSignature sig, std::vector<Code> codes,
                                     std::vector<GroupElement> generators) {
  Subgroup h;
  h.sig_ = std::move(sig);
  h.codes_ = std::move(codes);
  h.generators_ = std::move(generators);
  return h;
}

Subgroup Subgroup::trivial(GroupSignature sig) { return from_sorted_codes(std::move(sig), {0}, {}); }

bool Subgroup::contains(const GroupElement& g) const { return contains_code(encode(sig_, g)); }

bool Subgroup::contains_code(Code c) const {
  return std::binary_search(codes_.begin(), codes_.end(), c);
}

std::vector<GroupElement> Subgroup::elements() const {
  std::vector<GroupElement> out;
  out.reserve(codes_.size());
  for (auto c : codes_) out.push_back(decode(sig_, c));
  return out;
}

std::string Subgroup::canonical_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    if (i) out += ',';
    out += format_element(decode(sig_, codes_[i]));
  }
  return out + "}";
}

std::size_t SubgroupHash::operator()(const Subgroup& h) const {
  std::size_t seed = h.codes().size();
  for (auto c : h.codes()) seed ^= std::hash<Code>{}(c) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  return seed;
}

namespace {

}  // namespace

Code add_codes(const GroupSignature& sig, Code a, Code b) {
  Code r = 0;
  for (std::size_t i = 0; i < sig.rank(); ++i) {
    const auto m = sig.modulus(i);
    const auto s = sig.stride(i);
    r += (((a / s) % m + (b / s) % m) % m) * s;
  }
  return r;
}

Subgroup join(const Subgroup& h, const GroupElement& g, std::uint64_t cap) {
  const auto& sig = h.signature();
  const Code gc = encode(sig, g);
  auto gens = h.generators();
  if (h.contains_code(gc)) return h;
  gens.push_back(canonicalize(sig, g));

  // Cosets H, H+g, H+2g, ... are disjoint until c*g lands back in H.
  std::vector<Code> out = h.codes();
  Code multiple = gc;
  while (!h.contains_code(multiple)) {
    if (out.size() + h.order() > cap) {
      throw CapExceeded("subgroup closure exceeds cap " + std::to_string(cap));
    }
    for (auto c : h.codes()) out.push_back(add_codes(sig, c, multiple));
    multiple = add_codes(sig, multiple, gc);
  }
  std::sort(out.begin(), out.end());
  return Subgroup::from_sorted_codes(sig, std::move(out), std::move(gens));
}

Subgroup closure(const GroupSignature& sig, std::span<const GroupElement> gens, std::uint64_t cap) {
  Subgroup h = Subgroup::trivial(sig);
  for (const auto& g : gens) {
    check_length(sig, g);
    h = join(h, g, cap);
  }
  // Keep the caller's generator list verbatim, including redundant entries.
  std::vector<GroupElement> kept;
  kept.reserve(gens.size());
  for (const auto& g : gens) kept.push_back(canonicalize(sig, g));
  return Subgroup::from_sorted_codes(sig, h.codes(), std::move(kept));
}

Subgroup prefix_subgroup(const Subgroup& h, std::size_t i) {
  const auto& sig = h.signature();
  if (i > sig.rank()) throw HspError("prefix index " + std::to_string(i) + " out of range");
  // Coordinates i+1..l vanish iff the code is a multiple of the weight of coordinate i.
  const Code weight = i == 0 ? sig.order() : sig.stride(i - 1);
  std::vector<Code> codes;
  for (auto c : h.codes()) {
    if (c % weight == 0) codes.push_back(c);
  }
  // Greedy generating set over the canonical order.
  Subgroup acc = Subgroup::trivial(sig);
  for (auto c : codes) {
    if (!acc.contains_code(c)) acc = join(acc, decode(sig, c));
  }
  return Subgroup::from_sorted_codes(sig, std::move(codes), acc.generators());
}

}  // namespace hspkit
