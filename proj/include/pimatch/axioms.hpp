#pragma once

#include <numeric>
#include <random>

#include "pimatch/jsonutil.hpp"
#include "pimatch/rationalize.hpp"

namespace pimatch {

inline constexpr int kAxiomPairCap = 12;
inline constexpr int kAxiomSweepCap = 5;

enum class VerdictStatus { holds, holds_on_tested_family, violated };

inline const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::holds:
      return "holds";
    case VerdictStatus::holds_on_tested_family:
      return "holds_on_tested_family";
    case VerdictStatus::violated:
      return "violated";
  }
  return "?";
}

// Outcome of an axiom check. Exhaustive checks report holds; checks that can
// only sweep a finite family of weights report holds_on_tested_family and say
// which family. Violations carry a replayable witness.
struct Verdict {
  VerdictStatus status = VerdictStatus::holds;
  Json witness;
  std::string tested_family;
  Json details;

  bool ok() const { return status != VerdictStatus::violated; }

  static Verdict holds() { return {}; }
  static Verdict holds_with(Json details) {
    Verdict v;
    v.details = std::move(details);
    return v;
  }
  static Verdict on_family(std::string family) {
    Verdict v;
    v.status = VerdictStatus::holds_on_tested_family;
    v.tested_family = std::move(family);
    return v;
  }
  static Verdict violated_with(Json witness) {
    Verdict v;
    v.status = VerdictStatus::violated;
    v.witness = std::move(witness);
    return v;
  }
};

inline Json verdict_json(const Verdict& v) {
  Json out;
  out["status"] = to_string(v.status);
  if (!v.witness.is_null()) out["witness"] = v.witness;
  if (!v.tested_family.empty()) out["tested_family"] = v.tested_family;
  if (!v.details.is_null()) out["details"] = v.details;
  return out;
}

struct AxiomCaps {
  int pairwise = kAxiomPairCap;
  int sweep = kAxiomSweepCap;
  int random_samples = 100;
  std::uint64_t seed = 2026;
};

inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Integer weights in [-2^(2n), 2^(2n)], rejection-sampled until all subset
// sums are distinct.
inline UMWeight random_um_weight(const GroundSet& gs, std::mt19937_64& rng) {
  int n = gs.size();
  std::int64_t bound = std::int64_t(1) << std::min(2 * n, 40);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    UMWeight w;
    w.w.reserve(std::size_t(n));
    for (int i = 0; i < n; ++i) w.w.push_back(Rat(uniform_int(rng, -bound, bound)));
    if (is_um(w)) {
      w.verified_um = true;
      return w;
    }
  }
  fail(Errc::not_um, "could not sample a weight with distinct subset sums");
}

namespace detail {

inline std::vector<Subset> materialize_fn(const ChoiceFunction& f, int cap) {
  int n = f.ground.size();
  if (n > cap) fail(Errc::cap_exceeded, "choice function scan: ground set exceeds cap");
  std::vector<Subset> t(std::size_t(1) << n);
  for (std::uint32_t x = 0; x < t.size(); ++x) {
    Subset c = f.choose(Subset(x));
    if (!c.subset_of(Subset(x)))
      fail(Errc::oracle_inconsistent, "choice function picked outside its menu");
    t[x] = c;
  }
  return t;
}

inline std::vector<Rat> weight_sums(const UMWeight& w, int n) {
  std::vector<Rat> s(std::size_t(1) << n);
  for (std::uint32_t x = 1; x < s.size(); ++x) {
    int i = __builtin_ctz(x);
    s[x] = s[x & (x - 1)] + w.w[std::size_t(i)];
  }
  return s;
}

inline std::vector<Subset> cw_table(const std::vector<std::vector<Subset>>& table,
                                    const std::vector<Rat>& sums) {
  std::vector<Subset> out(table.size());
  for (std::uint32_t x = 0; x < table.size(); ++x) {
    const auto& row = table[x];
    Subset best = row[0];
    for (std::size_t k = 1; k < row.size(); ++k) {
      if (sums[row[k].bits()] > sums[best.bits()])
        best = row[k];
      else if (sums[row[k].bits()] == sums[best.bits()])
        fail(Errc::not_um, "weight ties two chosen sets");
    }
    out[x] = best;
  }
  return out;
}

struct PairWitness {
  std::uint32_t X, Xprime;
};

inline std::optional<PairWitness> pi_violation(const std::vector<Subset>& t) {
  for (std::uint32_t X = 0; X < t.size(); ++X)
    for (std::uint32_t Xp = 0; Xp < t.size(); ++Xp)
      if (t[X | Xp] != t[t[X].bits() | Xp]) return PairWitness{X, Xp};
  return std::nullopt;
}

inline std::optional<PairWitness> lad_violation(const std::vector<Subset>& t) {
  for (std::uint32_t X = 0; X < t.size(); ++X) {
    std::uint32_t sub = X;
    while (true) {
      if (t[sub].size() > t[X].size()) return PairWitness{X, sub};
      if (sub == 0) break;
      sub = (sub - 1) & X;
    }
  }
  return std::nullopt;
}

}  // namespace detail

// C(X u X') must equal C(C(X) u X'); composing through the partial choice may
// not change the outcome.
inline Verdict check_pi_fn(const ChoiceFunction& f, int cap = kAxiomPairCap) {
  auto t = detail::materialize_fn(f, cap);
  if (auto v = detail::pi_violation(t)) {
    const GroundSet& gs = f.ground;
    Json w;
    w["axiom"] = "pi";
    w["X"] = set_json(gs, Subset(v->X));
    w["Xprime"] = set_json(gs, Subset(v->Xprime));
    w["direct"] = set_json(gs, t[v->X | v->Xprime]);
    w["recomposed"] = set_json(gs, t[t[v->X].bits() | v->Xprime]);
    return Verdict::violated_with(std::move(w));
  }
  return Verdict::holds();
}

// Anything chosen from X and still available in a smaller menu stays chosen.
inline Verdict check_sub_fn(const ChoiceFunction& f, int cap = kAxiomPairCap) {
  auto t = detail::materialize_fn(f, cap);
  const GroundSet& gs = f.ground;
  for (std::uint32_t X = 0; X < t.size(); ++X) {
    std::uint32_t sub = X;
    while (true) {
      if (!(t[X] & Subset(sub)).subset_of(t[sub])) {
        Json w;
        w["axiom"] = "sub";
        w["X"] = set_json(gs, Subset(X));
        w["Xprime"] = set_json(gs, Subset(sub));
        w["choice_at_X"] = set_json(gs, t[X]);
        w["choice_at_Xprime"] = set_json(gs, t[sub]);
        return Verdict::violated_with(std::move(w));
      }
      if (sub == 0) break;
      sub = (sub - 1) & X;
    }
  }
  return Verdict::holds();
}

// Dropping rejected elements may not change the choice.
inline Verdict check_irc_fn(const ChoiceFunction& f, int cap = kAxiomPairCap) {
  auto t = detail::materialize_fn(f, cap);
  const GroundSet& gs = f.ground;
  for (std::uint32_t X = 0; X < t.size(); ++X) {
    std::uint32_t rest = X & ~t[X].bits();
    std::uint32_t sub = rest;
    while (true) {
      std::uint32_t Xp = t[X].bits() | sub;
      if (t[Xp] != t[X]) {
        Json w;
        w["axiom"] = "irc";
        w["X"] = set_json(gs, Subset(X));
        w["Xprime"] = set_json(gs, Subset(Xp));
        w["choice_at_X"] = set_json(gs, t[X]);
        w["choice_at_Xprime"] = set_json(gs, t[Xp]);
        return Verdict::violated_with(std::move(w));
      }
      if (sub == 0) break;
      sub = (sub - 1) & rest;
    }
  }
  return Verdict::holds();
}

// Choices never grow when the menu shrinks.
inline Verdict check_lad_fn(const ChoiceFunction& f, int cap = kAxiomPairCap) {
  auto t = detail::materialize_fn(f, cap);
  if (auto v = detail::lad_violation(t)) {
    const GroundSet& gs = f.ground;
    Json w;
    w["axiom"] = "lad";
    w["X"] = set_json(gs, Subset(v->X));
    w["Xprime"] = set_json(gs, Subset(v->Xprime));
    w["choice_at_X"] = set_json(gs, t[v->X]);
    w["choice_at_Xprime"] = set_json(gs, t[v->Xprime]);
    return Verdict::violated_with(std::move(w));
  }
  return Verdict::holds();
}

// |C(X)| = min(|X|, q) for some quota q, inferred from the full menu.
inline Verdict check_acceptant_fn(const ChoiceFunction& f, int cap = kAxiomPairCap) {
  auto t = detail::materialize_fn(f, cap);
  const GroundSet& gs = f.ground;
  int n = gs.size();
  int q = t.back().size() == n ? n : t.back().size();
  for (std::uint32_t X = 0; X < t.size(); ++X) {
    if (t[X].size() != std::min(Subset(X).size(), q)) {
      Json w;
      w["axiom"] = "acceptant";
      w["q"] = q;
      w["X"] = set_json(gs, Subset(X));
      w["choice_at_X"] = set_json(gs, t[X]);
      return Verdict::violated_with(std::move(w));
    }
  }
  return Verdict::holds_with(Json{{"q", q}});
}

namespace detail {

using CorrTable = std::vector<std::vector<Subset>>;

inline Verdict sc1_on(const GroundSet& gs, const CorrTable& t) {
  for (std::uint32_t X1 = 0; X1 < t.size(); ++X1) {
    std::uint32_t X2 = X1;
    while (true) {
      for (Subset Z1 : t[X1]) {
        Subset need = Z1 & Subset(X2);
        bool found = false;
        for (Subset Z2 : t[X2])
          if (need.subset_of(Z2)) {
            found = true;
            break;
          }
        if (!found) {
          Json w;
          w["axiom"] = "sc1";
          w["X1"] = set_json(gs, Subset(X1));
          w["X2"] = set_json(gs, Subset(X2));
          w["Z1"] = set_json(gs, Z1);
          return Verdict::violated_with(std::move(w));
        }
      }
      if (X2 == 0) break;
      X2 = (X2 - 1) & X1;
    }
  }
  return Verdict::holds();
}

inline Verdict sc2_on(const GroundSet& gs, const CorrTable& t) {
  for (std::uint32_t X1 = 0; X1 < t.size(); ++X1) {
    std::uint32_t X2 = X1;
    while (true) {
      for (Subset Z2 : t[X2]) {
        bool found = false;
        for (Subset Z1 : t[X1])
          if ((Z1 & Subset(X2)).subset_of(Z2)) {
            found = true;
            break;
          }
        if (!found) {
          Json w;
          w["axiom"] = "sc2";
          w["X1"] = set_json(gs, Subset(X1));
          w["X2"] = set_json(gs, Subset(X2));
          w["Z2"] = set_json(gs, Z2);
          return Verdict::violated_with(std::move(w));
        }
      }
      if (X2 == 0) break;
      X2 = (X2 - 1) & X1;
    }
  }
  return Verdict::holds();
}

inline Verdict irc_corr_on(const GroundSet& gs, const CorrTable& t) {
  for (std::uint32_t X = 0; X < t.size(); ++X) {
    for (Subset Y : t[X]) {
      std::uint32_t rest = X & ~Y.bits();
      std::uint32_t sub = rest;
      while (true) {
        std::uint32_t Yp = Y.bits() | sub;
        if (!std::binary_search(t[Yp].begin(), t[Yp].end(), Y)) {
          Json w;
          w["axiom"] = "irc";
          w["X"] = set_json(gs, Subset(X));
          w["Y"] = set_json(gs, Y);
          w["Yprime"] = set_json(gs, Subset(Yp));
          return Verdict::violated_with(std::move(w));
        }
        if (sub == 0) break;
        sub = (sub - 1) & rest;
      }
    }
  }
  return Verdict::holds();
}

inline Verdict acceptant_corr_on(const GroundSet& gs, const CorrTable& t) {
  int n = gs.size();
  int q = t.back()[0].size() == n ? n : t.back()[0].size();
  for (std::uint32_t X = 0; X < t.size(); ++X) {
    for (Subset Y : t[X]) {
      if (Y.size() != std::min(Subset(X).size(), q)) {
        Json w;
        w["axiom"] = "acceptant";
        w["q"] = q;
        w["X"] = set_json(gs, Subset(X));
        w["Y"] = set_json(gs, Y);
        return Verdict::violated_with(std::move(w));
      }
    }
  }
  return Verdict::holds_with(Json{{"q", q}});
}

}  // namespace detail

inline Verdict check_sc1(const ChoiceCorrespondence& corr, int cap = kAxiomPairCap) {
  return detail::sc1_on(corr.ground(), materialize(corr, cap));
}
inline Verdict check_sc2(const ChoiceCorrespondence& corr, int cap = kAxiomPairCap) {
  return detail::sc2_on(corr.ground(), materialize(corr, cap));
}
inline Verdict check_irc_corr(const ChoiceCorrespondence& corr, int cap = kAxiomPairCap) {
  return detail::irc_corr_on(corr.ground(), materialize(corr, cap));
}
inline Verdict check_acceptant_corr(const ChoiceCorrespondence& corr, int cap = kAxiomPairCap) {
  return detail::acceptant_corr_on(corr.ground(), materialize(corr, cap));
}

// Exchange property over an explicit nonempty family, in both the
// common-replacement form and the split existential form; the two
// characterizations are provably equivalent and are cross-checked.
inline Verdict check_gmatroid(const GroundSet& gs, std::vector<Subset> family) {
  if (family.empty()) fail(Errc::empty_family, "exchange check on an empty family");
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());
  std::vector<bool> in(std::size_t(1) << gs.size(), false);
  for (Subset f : family) {
    if (!f.subset_of(gs.full())) fail(Errc::bad_argument, "family member outside ground set");
    in[f.bits()] = true;
  }
  std::optional<Json> tardos_witness;
  bool split_holds = true;
  for (Subset X : family) {
    for (Subset Y : family) {
      for (int e : (X - Y).members()) {
        std::vector<int> cands = (Y - X).members();
        cands.push_back(-1);
        bool common = false, drop_ok = false, add_ok = false;
        for (int ep : cands) {
          bool x_ok = in[X.minus(e).plus(ep).bits()];
          bool y_ok = in[Y.plus(e).minus(ep).bits()];
          common = common || (x_ok && y_ok);
          drop_ok = drop_ok || x_ok;
          add_ok = add_ok || y_ok;
        }
        if (!(drop_ok && add_ok)) split_holds = false;
        if (!common && !tardos_witness) {
          Json w;
          w["axiom"] = "gmatroid";
          w["X"] = set_json(gs, X);
          w["Y"] = set_json(gs, Y);
          w["e"] = gs.name(e);
          tardos_witness = std::move(w);
        }
      }
    }
  }
  if (tardos_witness.has_value() == split_holds)
    fail(Errc::oracle_inconsistent, "exchange characterizations disagree");
  if (tardos_witness) return Verdict::violated_with(std::move(*tardos_witness));
  return Verdict::holds();
}

// Smallest element whose addition keeps X inside the family, if any.
inline std::optional<int> extendable_element(const GroundSet& gs,
                                             const std::vector<Subset>& family, Subset X) {
  auto has = [&](Subset y) { return std::find(family.begin(), family.end(), y) != family.end(); };
  if (!has(X)) fail(Errc::not_in_family, "extendable_element: set not in family");
  for (int i = 0; i < gs.size(); ++i)
    if (!X.contains(i) && has(X.plus(i))) return i;
  return std::nullopt;
}

namespace detail {

inline std::vector<LexValue> utility_values(const UtilityFunction& u, int cap) {
  int n = u.ground.size();
  if (n > cap) fail(Errc::cap_exceeded, "utility scan: ground set exceeds cap");
  std::vector<LexValue> v;
  v.reserve(std::size_t(1) << n);
  for (std::uint32_t x = 0; x < (std::uint32_t(1) << n); ++x) v.push_back(u.eval(Subset(x)));
  if (v[0] != LexValue::zero(u.arity)) fail(Errc::bad_argument, "utility not zero on empty set");
  return v;
}

}  // namespace detail

// For every X, X' and i in X\X' some j in (X'\X) or nothing must either
// strictly improve one side or leave both sides exactly level.
inline Verdict check_ordinal_concavity(const UtilityFunction& u, int cap = 8) {
  auto v = detail::utility_values(u, cap);
  const GroundSet& gs = u.ground;
  for (std::uint32_t X = 0; X < v.size(); ++X) {
    for (std::uint32_t Xp = 0; Xp < v.size(); ++Xp) {
      for (int i : (Subset(X) - Subset(Xp)).members()) {
        std::vector<int> cands = (Subset(Xp) - Subset(X)).members();
        cands.push_back(-1);
        bool found = false;
        for (int j : cands) {
          const LexValue& a = v[Subset(X).minus(i).plus(j).bits()];
          const LexValue& b = v[Subset(Xp).plus(i).minus(j).bits()];
          if (a > v[X] || b > v[Xp] || (a == v[X] && b == v[Xp])) {
            found = true;
            break;
          }
        }
        if (!found) {
          Json w;
          w["axiom"] = "ordinal_concavity";
          w["X"] = set_json(gs, Subset(X));
          w["Xprime"] = set_json(gs, Subset(Xp));
          w["i"] = gs.name(i);
          return Verdict::violated_with(std::move(w));
        }
      }
    }
  }
  return Verdict::holds();
}

// Between a strictly larger and a strictly smaller set some element of the
// difference must improve a side by moving across, or leave both level.
inline Verdict check_size_restricted_concavity(const UtilityFunction& u, int cap = 8) {
  auto v = detail::utility_values(u, cap);
  const GroundSet& gs = u.ground;
  for (std::uint32_t X = 0; X < v.size(); ++X) {
    for (std::uint32_t Xp = 0; Xp < v.size(); ++Xp) {
      if (Subset(X).size() <= Subset(Xp).size()) continue;
      bool found = false;
      for (int i : (Subset(X) - Subset(Xp)).members()) {
        const LexValue& a = v[Subset(X).minus(i).bits()];
        const LexValue& b = v[Subset(Xp).plus(i).bits()];
        if (a > v[X] || b > v[Xp] || (a == v[X] && b == v[Xp])) {
          found = true;
          break;
        }
      }
      if (!found) {
        Json w;
        w["axiom"] = "size_restricted_concavity";
        w["X"] = set_json(gs, Subset(X));
        w["Xprime"] = set_json(gs, Subset(Xp));
        return Verdict::violated_with(std::move(w));
      }
    }
  }
  return Verdict::holds();
}

// Discrete concavity with sums: swapping i against some j (or nothing) may
// not lower the total of the two sides.
inline Verdict check_mnat(const UtilityFunction& u, int cap = 8) {
  auto v = detail::utility_values(u, cap);
  const GroundSet& gs = u.ground;
  for (std::uint32_t X = 0; X < v.size(); ++X) {
    for (std::uint32_t Xp = 0; Xp < v.size(); ++Xp) {
      LexValue rhs = v[X] + v[Xp];
      for (int i : (Subset(X) - Subset(Xp)).members()) {
        std::vector<int> cands = (Subset(Xp) - Subset(X)).members();
        cands.push_back(-1);
        bool found = false;
        for (int j : cands) {
          if (v[Subset(X).minus(i).plus(j).bits()] + v[Subset(Xp).plus(i).minus(j).bits()] >=
              rhs) {
            found = true;
            break;
          }
        }
        if (!found) {
          Json w;
          w["axiom"] = "mnat_concavity";
          w["X"] = set_json(gs, Subset(X));
          w["Xprime"] = set_json(gs, Subset(Xp));
          w["i"] = gs.name(i);
          return Verdict::violated_with(std::move(w));
        }
      }
    }
  }
  return Verdict::holds();
}

// Union of every menu whose choices meet the choices at X.
inline Subset tau(const ChoiceCorrespondence& corr, Subset X, int cap = kDefaultDpCap) {
  auto table = materialize(corr, cap);
  return detail::tau_table(table)[X.bits()];
}

// tau must be a closure operator and the correspondence must be recoverable
// from it: choices at X are the choices at tau(X) inside X, choices restrict
// cleanly to intermediate menus, and a self-chosen S is chosen exactly on the
// interval [S, tau(S)]. These all follow from path independence.
inline Verdict check_closure(const ChoiceCorrespondence& corr, int cap = kAxiomPairCap) {
  auto table = materialize(corr, cap);
  auto taus = detail::tau_table(table);
  const GroundSet& gs = corr.ground();
  auto wit = [&](const char* lemma, std::initializer_list<std::pair<const char*, Subset>> sets) {
    Json w;
    w["lemma"] = lemma;
    for (const auto& [k, s] : sets) w[k] = set_json(gs, s);
    return Verdict::violated_with(std::move(w));
  };

  for (std::uint32_t x = 0; x < table.size(); ++x) {
    if (!Subset(x).subset_of(taus[x])) return wit("extensivity", {{"X", Subset(x)}});
    if (taus[taus[x].bits()] != taus[x])
      return wit("idempotence", {{"X", Subset(x)}, {"tau", taus[x]}});
  }
  for (std::uint32_t y = 0; y < table.size(); ++y) {
    std::uint32_t x = y;
    while (true) {
      if (!taus[x].subset_of(taus[y]))
        return wit("monotonicity", {{"X", Subset(x)}, {"Y", Subset(y)}});
      if (x == 0) break;
      x = (x - 1) & y;
    }
  }
  for (std::uint32_t x = 0; x < table.size(); ++x) {
    std::vector<Subset> filtered;
    for (Subset z : table[taus[x].bits()])
      if (z.subset_of(Subset(x))) filtered.push_back(z);
    if (filtered != table[x]) return wit("choice_from_closure", {{"X", Subset(x)}});
  }
  for (std::uint32_t x = 0; x < table.size(); ++x) {
    for (Subset S : table[x]) {
      std::uint32_t rest = x & ~S.bits();
      std::uint32_t sub = rest;
      while (true) {
        std::uint32_t y = S.bits() | sub;
        std::vector<Subset> filtered;
        for (Subset z : table[x])
          if (z.subset_of(Subset(y))) filtered.push_back(z);
        if (filtered != table[y])
          return wit("choice_restriction", {{"X", Subset(x)}, {"S", S}, {"Y", Subset(y)}});
        if (sub == 0) break;
        sub = (sub - 1) & rest;
      }
    }
  }
  for (std::uint32_t s = 0; s < table.size(); ++s) {
    if (!std::binary_search(table[s].begin(), table[s].end(), Subset(s))) continue;
    for (std::uint32_t t = 0; t < table.size(); ++t) {
      bool chosen = std::binary_search(table[t].begin(), table[t].end(), Subset(s));
      bool interval = Subset(s).subset_of(Subset(t)) && Subset(t).subset_of(taus[s]);
      if (chosen != interval) return wit("interval", {{"S", Subset(s)}, {"T", Subset(t)}});
    }
  }
  return Verdict::holds();
}

// One row per (X, Y, A, B, i) instance of the roster-bridging property for an
// acceptant correspondence with quota q; j = -1 marks a row with no valid
// replacement, which refutes the property.
struct BridgingRow {
  Subset X, Y, A, B;
  int i = -1;
  int j = -1;
};

inline std::vector<BridgingRow> bridging_rows(const ChoiceCorrespondence& corr, int q,
                                              int cap = 8) {
  auto table = materialize(corr, cap);
  const GroundSet& gs = corr.ground();
  for (std::uint32_t x = 0; x < table.size(); ++x)
    for (Subset a : table[x])
      if (a.size() != std::min(Subset(x).size(), q))
        fail(Errc::not_acceptant, "bridging needs an acceptant correspondence with quota " +
                                      std::to_string(q) + ", broken at " + gs.format(Subset(x)));
  std::vector<BridgingRow> rows;
  for (std::uint32_t x = 0; x < table.size(); ++x) {
    std::uint32_t y = x;
    while (true) {
      if (Subset(y).size() >= q) {
        for (Subset A : table[x]) {
          for (Subset B : table[y]) {
            if (!(Subset(y) & A).subset_of(B)) continue;
            for (int i : (A - B).members()) {
              Subset cands = (B - A) | ((Subset(x) - Subset(y)) - A);
              const auto& target = table[Subset(x).minus(i).bits()];
              int j = -1;
              for (int c : cands.members()) {
                if (std::binary_search(target.begin(), target.end(), A.minus(i).plus(c))) {
                  j = c;
                  break;
                }
              }
              rows.push_back({Subset(x), Subset(y), A, B, i, j});
            }
          }
        }
      }
      if (y == 0) break;
      y = (y - 1) & x;
    }
  }
  return rows;
}

inline Json bridging_row_json(const GroundSet& gs, const BridgingRow& r) {
  Json out;
  out["X"] = set_json(gs, r.X);
  out["Y"] = set_json(gs, r.Y);
  out["A"] = set_json(gs, r.A);
  out["B"] = set_json(gs, r.B);
  out["i"] = gs.name(r.i);
  if (r.j >= 0) out["j"] = gs.name(r.j);
  return out;
}

inline Verdict check_bridging(const ChoiceCorrespondence& corr, int q, int cap = 8) {
  auto rows = bridging_rows(corr, q, cap);
  Json arr = Json::array();
  for (const auto& r : rows) {
    if (r.j < 0) {
      Json w = bridging_row_json(corr.ground(), r);
      w["axiom"] = "bridging";
      return Verdict::violated_with(std::move(w));
    }
    arr.push_back(bridging_row_json(corr.ground(), r));
  }
  return Verdict::holds_with(Json{{"count", rows.size()}, {"rows", std::move(arr)}});
}

inline Json cycle_json(const GroundSet& gs, const CycleWitness& cyc) {
  Json steps = Json::array();
  for (const auto& s : cyc.steps) {
    Json step;
    step["from"] = set_json(gs, s.from);
    step["to"] = set_json(gs, s.to);
    step["menu"] = set_json(gs, s.menu);
    step["strict"] = s.strict;
    steps.push_back(std::move(step));
  }
  return Json{{"steps", std::move(steps)}};
}

namespace detail {

// Runs fn on every signed-permutation dyadic weight, then on random UM
// samples; fn returns a witness to stop the sweep.
inline std::optional<Json> weight_sweep(const GroundSet& gs, const AxiomCaps& caps,
                                        const std::function<std::optional<Json>(const UMWeight&)>& fn) {
  int n = gs.size();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << n); ++mask) {
      std::vector<bool> negative(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) negative[std::size_t(j)] = (mask >> j) & 1u;
      if (auto w = fn(canonical_weight(gs, perm, negative))) return w;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::mt19937_64 rng(caps.seed);
  for (int k = 0; k < caps.random_samples; ++k)
    if (auto w = fn(random_um_weight(gs, rng))) return w;
  return std::nullopt;
}

}  // namespace detail

// Path independence of a correspondence: every tie-broken selection from it
// must itself be path independent. Sweeps the dyadic signed-permutation
// family plus random weights, then the exhaustive necessary conditions
// (set-covering, rejection consistency, exchange, revealed-preference
// acyclicity). Can only ever hold on the tested family.
inline Verdict check_pi_corr(const ChoiceCorrespondence& corr, const AxiomCaps& caps = {}) {
  int n = corr.n();
  if (n > caps.sweep) fail(Errc::cap_exceeded, "weight sweep is factorial in the ground size");
  const GroundSet& gs = corr.ground();
  auto table = materialize(corr, caps.pairwise);

  auto test_weight = [&](const UMWeight& w) -> std::optional<Json> {
    auto t = detail::cw_table(table, detail::weight_sums(w, n));
    if (auto v = detail::pi_violation(t)) {
      Json wit;
      wit["axiom"] = "pi";
      wit["weight"] = weight_json(gs, w);
      wit["X"] = set_json(gs, Subset(v->X));
      wit["Xprime"] = set_json(gs, Subset(v->Xprime));
      wit["direct"] = set_json(gs, t[v->X | v->Xprime]);
      wit["recomposed"] = set_json(gs, t[t[v->X].bits() | v->Xprime]);
      return wit;
    }
    return std::nullopt;
  };
  if (auto w = detail::weight_sweep(gs, caps, test_weight))
    return Verdict::violated_with(std::move(*w));

  auto wrap = [](const char* name, Json inner) {
    return Verdict::violated_with(Json{{"necessary_condition", name}, {"witness", std::move(inner)}});
  };
  if (Verdict v = detail::sc1_on(gs, table); !v.ok()) return wrap("sc1", v.witness);
  if (Verdict v = detail::sc2_on(gs, table); !v.ok()) return wrap("sc2", v.witness);
  if (Verdict v = detail::irc_corr_on(gs, table); !v.ok()) return wrap("irc", v.witness);
  for (std::uint32_t x = 0; x < table.size(); ++x) {
    if (Verdict v = check_gmatroid(gs, table[x]); !v.ok()) {
      Json wit{{"necessary_condition", "gmatroid"}, {"menu", set_json(gs, Subset(x))},
               {"witness", v.witness}};
      return Verdict::violated_with(std::move(wit));
    }
  }
  if (SarpResult s = sarp_check(corr, caps.pairwise); !s.rationalizable)
    return wrap("revealed_preference", cycle_json(gs, *s.cycle));

  return Verdict::on_family("signed-permutation dyadic weights, " +
                            std::to_string(caps.random_samples) +
                            " random UM weights, and exhaustive necessary conditions");
}

// Law of aggregate demand for a correspondence, via the same weight sweep.
inline Verdict check_lad_corr(const ChoiceCorrespondence& corr, const AxiomCaps& caps = {}) {
  int n = corr.n();
  if (n > caps.sweep) fail(Errc::cap_exceeded, "weight sweep is factorial in the ground size");
  const GroundSet& gs = corr.ground();
  auto table = materialize(corr, caps.pairwise);
  auto test_weight = [&](const UMWeight& w) -> std::optional<Json> {
    auto t = detail::cw_table(table, detail::weight_sums(w, n));
    if (auto v = detail::lad_violation(t)) {
      Json wit;
      wit["axiom"] = "lad";
      wit["weight"] = weight_json(gs, w);
      wit["X"] = set_json(gs, Subset(v->X));
      wit["Xprime"] = set_json(gs, Subset(v->Xprime));
      wit["choice_at_X"] = set_json(gs, t[v->X]);
      wit["choice_at_Xprime"] = set_json(gs, t[v->Xprime]);
      return wit;
    }
    return std::nullopt;
  };
  if (auto w = detail::weight_sweep(gs, caps, test_weight))
    return Verdict::violated_with(std::move(*w));
  return Verdict::on_family("signed-permutation dyadic weights and " +
                            std::to_string(caps.random_samples) + " random UM weights");
}

}  // namespace pimatch
