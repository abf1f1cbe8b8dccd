#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pimatch {

using Rat = boost::multiprecision::cpp_rational;

inline std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

inline Rat rat_parse(const std::string& s) {
  try {
    return Rat(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
}

enum class Errc {
  cap_exceeded,
  empty_family,
  not_um,
  invalid_table,
  oracle_inconsistent,
  no_valid_candidate,
  not_pi,
  not_partial_order,
  not_acceptant,
  not_in_family,
  unknown_id,
  invalid_cycle,
  not_stable_input,
  parse_error,
  overlapping_types,
  bad_argument,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline constexpr int kMaxGroundSize = 30;

// A subset of a ground set of at most kMaxGroundSize elements, as a bitmask.
// Element index -1 stands for the null element: plus(-1) and minus(-1) are
// identities, which keeps loops over "X + u - v with u,v in X or null" uniform.
class Subset {
 public:
  constexpr Subset() : bits_(0) {}
  constexpr explicit Subset(std::uint32_t bits) : bits_(bits) {}

  static constexpr Subset empty() { return Subset(0); }
  static constexpr Subset full(int n) {
    return Subset(n == 0 ? 0u : (n >= 32 ? ~0u : ((1u << n) - 1u)));
  }
  static constexpr Subset single(int i) { return Subset(1u << i); }

  std::uint32_t bits() const { return bits_; }
  int size() const { return __builtin_popcount(bits_); }
  bool is_empty() const { return bits_ == 0; }
  bool contains(int i) const { return i >= 0 && ((bits_ >> i) & 1u); }
  bool subset_of(Subset o) const { return (bits_ & ~o.bits_) == 0; }

  Subset plus(int i) const { return i < 0 ? *this : Subset(bits_ | (1u << i)); }
  Subset minus(int i) const { return i < 0 ? *this : Subset(bits_ & ~(1u << i)); }

  friend Subset operator|(Subset a, Subset b) { return Subset(a.bits_ | b.bits_); }
  friend Subset operator&(Subset a, Subset b) { return Subset(a.bits_ & b.bits_); }
  friend Subset operator-(Subset a, Subset b) { return Subset(a.bits_ & ~b.bits_); }
  friend bool operator==(Subset a, Subset b) { return a.bits_ == b.bits_; }
  friend bool operator!=(Subset a, Subset b) { return a.bits_ != b.bits_; }
  friend bool operator<(Subset a, Subset b) { return a.bits_ < b.bits_; }

  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(size());
    for (std::uint32_t b = bits_; b;) {
      int i = __builtin_ctz(b);
      out.push_back(i);
      b &= b - 1;
    }
    return out;
  }

 private:
  std::uint32_t bits_;
};

// All subsets of X in ascending bitmask order.
inline std::vector<Subset> subsets_of(Subset X) {
  std::vector<Subset> out;
  out.reserve(std::size_t(1) << X.size());
  std::uint32_t m = X.bits();
  std::uint32_t s = 0;
  while (true) {
    out.push_back(Subset(s));
    if (s == m) break;
    s = (s - m) & m;
  }
  std::sort(out.begin(), out.end());
  return out;
}

class GroundSet {
 public:
  GroundSet() = default;
  explicit GroundSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (static_cast<int>(names_.size()) > kMaxGroundSize)
      fail(Errc::cap_exceeded, "ground set larger than " + std::to_string(kMaxGroundSize));
    for (int i = 0; i < static_cast<int>(names_.size()); ++i) {
      if (names_[i].empty()) fail(Errc::bad_argument, "empty element name");
      if (names_[i].find(',') != std::string::npos)
        fail(Errc::bad_argument, "element name contains a comma: " + names_[i]);
      if (!index_.emplace(names_[i], i).second)
        fail(Errc::bad_argument, "duplicate element name: " + names_[i]);
    }
  }

  int size() const { return static_cast<int>(names_.size()); }
  Subset full() const { return Subset::full(size()); }
  const std::string& name(int i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }

  bool has(const std::string& name) const { return index_.count(name) > 0; }
  int index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) fail(Errc::bad_argument, "unknown element: " + name);
    return it->second;
  }

  Subset parse(const std::vector<std::string>& names) const {
    Subset x;
    for (const auto& n : names) x = x.plus(index(n));
    return x;
  }

  // Comma-joined element names in ground order; empty string for the empty set.
  std::string key(Subset x) const {
    std::string out;
    for (int i : x.members()) {
      if (!out.empty()) out += ',';
      out += name(i);
    }
    return out;
  }

  Subset parse_key(const std::string& key) const {
    Subset x;
    if (key.empty()) return x;
    std::size_t start = 0;
    while (true) {
      std::size_t pos = key.find(',', start);
      std::string tok = key.substr(start, pos == std::string::npos ? pos : pos - start);
      x = x.plus(index(tok));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return x;
  }

  std::string format(Subset x) const { return "{" + key(x) + "}"; }

  friend bool operator==(const GroundSet& a, const GroundSet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
};

// Value of a lexicographically ordered utility: either -infinity or a tuple of
// exact rationals of fixed arity. Tuples of unequal arity never meet in one
// utility, so mixing them is a logic error rather than an ordering case.
class LexValue {
 public:
  static LexValue neg_inf() { return LexValue(); }
  static LexValue tuple(std::vector<Rat> comps) {
    LexValue v;
    v.finite_ = true;
    v.comps_ = std::move(comps);
    return v;
  }
  static LexValue scalar(Rat r) { return tuple({std::move(r)}); }
  static LexValue zero(int arity) { return tuple(std::vector<Rat>(arity, Rat(0))); }

  bool is_neg_inf() const { return !finite_; }
  bool finite() const { return finite_; }
  int arity() const { return static_cast<int>(comps_.size()); }
  const std::vector<Rat>& components() const { return comps_; }

  friend bool operator==(const LexValue& a, const LexValue& b) {
    if (a.finite_ != b.finite_) return false;
    if (!a.finite_) return true;
    a.check_arity(b);
    return a.comps_ == b.comps_;
  }
  friend bool operator!=(const LexValue& a, const LexValue& b) { return !(a == b); }
  friend bool operator<(const LexValue& a, const LexValue& b) {
    if (!a.finite_) return b.finite_;
    if (!b.finite_) return false;
    a.check_arity(b);
    return std::lexicographical_compare(a.comps_.begin(), a.comps_.end(), b.comps_.begin(),
                                        b.comps_.end());
  }
  friend bool operator>(const LexValue& a, const LexValue& b) { return b < a; }
  friend bool operator<=(const LexValue& a, const LexValue& b) { return !(b < a); }
  friend bool operator>=(const LexValue& a, const LexValue& b) { return !(a < b); }

  LexValue operator+(const LexValue& o) const {
    if (!finite_ || !o.finite_) return neg_inf();
    check_arity(o);
    std::vector<Rat> comps(comps_.size());
    for (std::size_t k = 0; k < comps_.size(); ++k) comps[k] = comps_[k] + o.comps_[k];
    return tuple(std::move(comps));
  }

  std::string str() const {
    if (!finite_) return "-inf";
    if (comps_.size() == 1) return rat_str(comps_[0]);
    std::string out = "(";
    for (std::size_t k = 0; k < comps_.size(); ++k) {
      if (k) out += ",";
      out += rat_str(comps_[k]);
    }
    return out + ")";
  }

 private:
  LexValue() : finite_(false) {}
  void check_arity(const LexValue& o) const {
    if (comps_.size() != o.comps_.size())
      fail(Errc::bad_argument, "lex values of unequal arity compared");
  }

  bool finite_;
  std::vector<Rat> comps_;
};

// Additive weight over the ground set. verified_um is set by construction
// (canonical weights) or by verify_um; argmax_weight insists on it.
struct UMWeight {
  std::vector<Rat> w;
  bool verified_um = false;

  int n() const { return static_cast<int>(w.size()); }
  Rat total(Subset x) const {
    Rat sum = 0;
    for (int i : x.members()) sum += w[static_cast<std::size_t>(i)];
    return sum;
  }
  bool positive() const {
    for (const Rat& r : w)
      if (r <= 0) return false;
    return true;
  }
};

inline constexpr int kDefaultUmCap = 20;

// All 2^n subset sums pairwise distinct.
inline bool is_um(const UMWeight& weight, int cap = kDefaultUmCap) {
  int n = weight.n();
  if (n > cap) fail(Errc::cap_exceeded, "is_um: n=" + std::to_string(n) + " exceeds cap");
  std::vector<Rat> sums;
  sums.reserve(std::size_t(1) << n);
  sums.push_back(Rat(0));
  for (int i = 0; i < n; ++i) {
    std::size_t old = sums.size();
    for (std::size_t k = 0; k < old; ++k) sums.push_back(sums[k] + weight.w[i]);
  }
  std::sort(sums.begin(), sums.end());
  for (std::size_t k = 1; k < sums.size(); ++k)
    if (sums[k] == sums[k - 1]) return false;
  return true;
}

inline UMWeight verify_um(UMWeight weight, int cap = kDefaultUmCap) {
  if (!is_um(weight, cap)) fail(Errc::not_um, "weight has colliding subset sums");
  weight.verified_um = true;
  return weight;
}

// Signed dyadic weight: the element at rank j (1-based in `order`) gets
// +/- 2^-j. Distinct dyadic magnitudes make every subset sum unique.
inline UMWeight canonical_weight(const GroundSet& gs, const std::vector<int>& order,
                                 const std::vector<bool>& negative) {
  int n = gs.size();
  if (static_cast<int>(order.size()) != n || static_cast<int>(negative.size()) != n)
    fail(Errc::bad_argument, "canonical_weight: order/sign size mismatch");
  std::vector<bool> seen(n, false);
  UMWeight weight;
  weight.w.assign(n, Rat(0));
  Rat mag(1);
  for (int j = 0; j < n; ++j) {
    int i = order[j];
    if (i < 0 || i >= n || seen[i]) fail(Errc::bad_argument, "canonical_weight: bad permutation");
    seen[i] = true;
    mag /= 2;
    weight.w[static_cast<std::size_t>(i)] = negative[j] ? -mag : mag;
  }
  weight.verified_um = true;
  return weight;
}

// Canonical weight whose unique maximizer over any family containing Y is Y
// itself: members of Y ranked first with positive signs, the rest negative.
inline UMWeight selecting_weight(const GroundSet& gs, Subset Y) {
  std::vector<int> order = Y.members();
  for (int i = 0; i < gs.size(); ++i)
    if (!Y.contains(i)) order.push_back(i);
  std::vector<bool> negative(gs.size(), false);
  for (int j = Y.size(); j < gs.size(); ++j) negative[static_cast<std::size_t>(j)] = true;
  return canonical_weight(gs, order, negative);
}

// Unique w-maximizer of a nonempty family; w must be verified UM and the
// family duplicate-free, so the maximizer is guaranteed unique.
inline Subset argmax_weight(const std::vector<Subset>& family, const UMWeight& weight) {
  if (family.empty()) fail(Errc::empty_family, "argmax_weight: empty family");
  if (!weight.verified_um) fail(Errc::not_um, "argmax_weight: weight not verified UM");
  Subset best = family[0];
  Rat best_sum = weight.total(best);
  for (std::size_t k = 1; k < family.size(); ++k) {
    Rat s = weight.total(family[k]);
    if (s > best_sum) {
      best = family[k];
      best_sum = s;
    } else if (s == best_sum && family[k] != best) {
      fail(Errc::not_um, "argmax_weight: tie between " + std::to_string(family[k].bits()) +
                             " and " + std::to_string(best.bits()));
    }
  }
  return best;
}

}  // namespace pimatch
