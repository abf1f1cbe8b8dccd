#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "pimatch/core.hpp"

namespace pimatch {

inline constexpr int kDefaultDpCap = 16;
inline constexpr int kDefaultEnumCap = 20;

// Subset utility with values in LexValue. eval must be total on 2^ground and
// satisfy eval(empty) == zero(arity).
struct UtilityFunction {
  GroundSet ground;
  int arity = 1;
  std::function<LexValue(Subset)> eval;
};

inline UtilityFunction make_utility(GroundSet ground, int arity,
                                    std::function<LexValue(Subset)> eval) {
  UtilityFunction u{std::move(ground), arity, std::move(eval)};
  LexValue at_empty = u.eval(Subset::empty());
  if (at_empty != LexValue::zero(arity))
    fail(Errc::bad_argument, "utility must be 0 on the empty set, got " + at_empty.str());
  return u;
}

inline UtilityFunction table_utility(GroundSet ground, int arity, std::vector<LexValue> values) {
  if (values.size() != (std::size_t(1) << ground.size()))
    fail(Errc::bad_argument, "utility table must cover all subsets");
  auto tbl = std::make_shared<std::vector<LexValue>>(std::move(values));
  return make_utility(std::move(ground), arity,
                      [tbl](Subset x) { return (*tbl)[x.bits()]; });
}

// Single-valued choice: choose(X) is a subset of X, choose(empty) = empty.
struct ChoiceFunction {
  GroundSet ground;
  std::function<Subset(Subset)> choose;
};

// max over subsets of X, always finite because u(empty) = 0.
inline LexValue max_utility(const UtilityFunction& u, Subset X, int cap = kDefaultEnumCap) {
  if (X.size() > cap) fail(Errc::cap_exceeded, "max_utility: |X| exceeds cap");
  LexValue best = LexValue::zero(u.arity);
  for (Subset y : subsets_of(X)) {
    LexValue v = u.eval(y);
    if (v > best) best = v;
  }
  return best;
}

// A choice correspondence over a fixed ground set: every X has a nonempty set
// of chosen subsets of X. Immutable after construction; copies share storage.
class ChoiceCorrespondence {
 public:
  enum class Backing { explicit_table, utility, union_of_functions, feasible_family };

  // table[X.bits()] lists the chosen sets of X, ascending, nonempty.
  static ChoiceCorrespondence from_table(GroundSet ground, std::vector<std::vector<Subset>> table) {
    auto impl = std::make_shared<Impl>();
    impl->backing = Backing::explicit_table;
    impl->ground = std::move(ground);
    std::size_t want = std::size_t(1) << impl->ground.size();
    if (table.size() != want) fail(Errc::invalid_table, "table must cover every subset");
    for (std::uint32_t x = 0; x < want; ++x) {
      auto& row = table[x];
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
      if (row.empty())
        fail(Errc::invalid_table, "no choice at " + impl->ground.format(Subset(x)));
      for (Subset y : row)
        if (!y.subset_of(Subset(x)))
          fail(Errc::invalid_table, "chosen set " + impl->ground.format(y) +
                                        " not inside " + impl->ground.format(Subset(x)));
    }
    impl->table = std::move(table);
    return ChoiceCorrespondence(std::move(impl));
  }

  // C(X) = argmax of u over subsets of X; value and max tables built eagerly.
  static ChoiceCorrespondence from_utility(GroundSet ground, UtilityFunction u,
                                           int cap = kDefaultDpCap) {
    int n = ground.size();
    if (n > cap) fail(Errc::cap_exceeded, "from_utility: ground set exceeds DP cap");
    auto impl = std::make_shared<Impl>();
    impl->backing = Backing::utility;
    impl->ground = std::move(ground);
    std::size_t size = std::size_t(1) << n;
    impl->values.reserve(size);
    for (std::uint32_t x = 0; x < size; ++x) impl->values.push_back(u.eval(Subset(x)));
    if (impl->values[0] != LexValue::zero(u.arity))
      fail(Errc::bad_argument, "utility must be 0 on the empty set");
    impl->maxdp = impl->values;
    for (std::uint32_t x = 0; x < size; ++x) {
      for (int i = 0; i < n; ++i) {
        if (!(x >> i & 1u)) continue;
        const LexValue& sub = impl->maxdp[x & ~(1u << i)];
        if (sub > impl->maxdp[x]) impl->maxdp[x] = sub;
      }
    }
    impl->util = std::move(u);
    return ChoiceCorrespondence(std::move(impl));
  }

  static ChoiceCorrespondence union_of(GroundSet ground, std::vector<ChoiceFunction> fns) {
    if (fns.empty()) fail(Errc::empty_family, "union_of: no choice functions");
    auto impl = std::make_shared<Impl>();
    impl->backing = Backing::union_of_functions;
    impl->ground = std::move(ground);
    impl->fns = std::move(fns);
    return ChoiceCorrespondence(std::move(impl));
  }

  // C(X) = all members of the family inside X; the family must contain the
  // empty set so every C(X) is nonempty.
  static ChoiceCorrespondence from_family(GroundSet ground, std::vector<Subset> family) {
    auto impl = std::make_shared<Impl>();
    impl->backing = Backing::feasible_family;
    impl->ground = std::move(ground);
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
    if (family.empty() || family[0] != Subset::empty())
      fail(Errc::invalid_table, "feasible family must contain the empty set");
    Subset full = impl->ground.full();
    impl->in_family.assign(std::size_t(1) << impl->ground.size(), false);
    for (Subset y : family) {
      if (!y.subset_of(full)) fail(Errc::invalid_table, "family member outside ground set");
      impl->in_family[y.bits()] = true;
    }
    impl->family = std::move(family);
    return ChoiceCorrespondence(std::move(impl));
  }

  const GroundSet& ground() const { return impl_->ground; }
  int n() const { return impl_->ground.size(); }
  Backing backing() const { return impl_->backing; }

  // Utility behind a utility-backed correspondence, else nullptr.
  const UtilityFunction* utility() const {
    return impl_->backing == Backing::utility ? &impl_->util : nullptr;
  }

  const std::vector<Subset>* family() const {
    return impl_->backing == Backing::feasible_family ? &impl_->family : nullptr;
  }

  bool pi_asserted() const { return impl_->pi_asserted; }
  ChoiceCorrespondence with_pi_asserted(bool value) const {
    auto impl = std::make_shared<Impl>(*impl_);
    impl->pi_asserted = value;
    return ChoiceCorrespondence(std::move(impl));
  }

  bool member(Subset X, Subset Y) const {
    const Impl& im = *impl_;
    if (!X.subset_of(im.ground.full()))
      fail(Errc::bad_argument, "member: X outside ground set");
    if (!Y.subset_of(X)) return false;
    switch (im.backing) {
      case Backing::explicit_table: {
        const auto& row = im.table[X.bits()];
        return std::binary_search(row.begin(), row.end(), Y);
      }
      case Backing::utility:
        return im.values[Y.bits()].finite() && im.values[Y.bits()] == im.maxdp[X.bits()];
      case Backing::union_of_functions:
        for (const auto& f : im.fns)
          if (f.choose(X) == Y) return true;
        return false;
      case Backing::feasible_family:
        return im.in_family[Y.bits()];
    }
    return false;
  }

  // C(X) in ascending bitmask order.
  std::vector<Subset> enumerate(Subset X, int cap = kDefaultEnumCap) const {
    const Impl& im = *impl_;
    if (!X.subset_of(im.ground.full()))
      fail(Errc::bad_argument, "enumerate: X outside ground set");
    switch (im.backing) {
      case Backing::explicit_table:
        return im.table[X.bits()];
      case Backing::union_of_functions: {
        std::vector<Subset> out;
        for (const auto& f : im.fns) {
          Subset y = f.choose(X);
          if (!y.subset_of(X)) fail(Errc::oracle_inconsistent, "choice function left X");
          out.push_back(y);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
      }
      case Backing::utility:
      case Backing::feasible_family: {
        if (X.size() > cap) fail(Errc::cap_exceeded, "enumerate: |X| exceeds cap");
        std::vector<Subset> out;
        for (Subset y : subsets_of(X))
          if (member(X, y)) out.push_back(y);
        return out;
      }
    }
    return {};
  }

 private:
  struct Impl {
    Backing backing = Backing::explicit_table;
    GroundSet ground;
    bool pi_asserted = false;
    std::vector<std::vector<Subset>> table;
    UtilityFunction util;
    std::vector<LexValue> values;
    std::vector<LexValue> maxdp;
    std::vector<ChoiceFunction> fns;
    std::vector<Subset> family;
    std::vector<bool> in_family;
  };

  explicit ChoiceCorrespondence(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

// Materialized correspondence: row x lists C(X) for X = bitmask x.
inline std::vector<std::vector<Subset>> materialize(const ChoiceCorrespondence& corr,
                                                    int cap = kDefaultDpCap) {
  if (corr.n() > cap) fail(Errc::cap_exceeded, "materialize: ground set exceeds cap");
  std::vector<std::vector<Subset>> table;
  std::size_t size = std::size_t(1) << corr.n();
  table.reserve(size);
  for (std::uint32_t x = 0; x < size; ++x) table.push_back(corr.enumerate(Subset(x)));
  return table;
}

}  // namespace pimatch
