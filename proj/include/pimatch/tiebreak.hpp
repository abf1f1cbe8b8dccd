#pragma once

#include "pimatch/choice.hpp"

namespace pimatch {

struct TiebreakStats {
  std::size_t oracle_calls = 0;
  std::size_t candidate_evals = 0;
};

// Oracle answering "is T the tie-broken choice from S?".
using ChoiceEqOracle = std::function<bool(Subset, Subset)>;

// Tests Y == C^w(X) for a path-independent correspondence: Y must be chosen at
// X and no single swap Y+u-v that is also chosen at X may have larger weight.
// Local optimality suffices because chosen families are exchangeable, so this
// is only sound when the correspondence is path independent.
inline bool cw_membership(const ChoiceCorrespondence& corr, const UMWeight& w, Subset X,
                          Subset Y) {
  if (!w.verified_um) fail(Errc::not_um, "cw_membership: weight not verified UM");
  if (!corr.member(X, Y)) return false;
  Rat wy = w.total(Y);
  std::vector<int> outs = (X - Y).members();
  outs.push_back(-1);
  std::vector<int> ins = Y.members();
  ins.push_back(-1);
  for (int u : outs) {
    for (int v : ins) {
      Subset cand = Y.plus(u).minus(v);
      if (cand == Y) continue;
      if (corr.member(X, cand) && w.total(cand) > wy) return false;
    }
  }
  return true;
}

namespace detail {

template <typename Ask>
int algorithm1_discard(const Ask& ask, Subset X, Subset Z) {
  while (true) {
    std::vector<int> elems = X.members();
    if (elems.empty())
      fail(Errc::oracle_inconsistent, "discard reached an empty set; oracle is not a PI choice");
    // First prefix of X (joined with the pinned set Z) that is not chosen
    // from itself. One exists whenever the oracle is consistent, because the
    // loop is only entered when the full union is not self-chosen.
    int kstar = -1;
    Subset prefix = Z;
    for (std::size_t k = 0; k < elems.size(); ++k) {
      Subset with = prefix.plus(elems[k]);
      if (!ask(with, with)) {
        kstar = static_cast<int>(k);
        break;
      }
      prefix = with;
    }
    if (kstar < 0)
      fail(Errc::oracle_inconsistent, "every prefix self-chosen yet the union is not");
    int ik = elems[static_cast<std::size_t>(kstar)];
    if (ask(prefix.plus(ik), prefix)) return ik;
    Subset head;
    for (int k = 0; k < kstar; ++k) head = head.plus(elems[static_cast<std::size_t>(k)]);
    X = head;
    Z = Z.plus(ik);
  }
}

}  // namespace detail

// Computes the choice at X for a PI choice function given only through
// equality queries "C(S) == T?", discarding one unchosen element at a time.
// Uses O(|X|^3) oracle calls.
inline Subset algorithm1_choice(const ChoiceEqOracle& oracle, Subset X,
                                TiebreakStats* stats = nullptr) {
  std::size_t calls = 0;
  auto ask = [&](Subset S, Subset T) {
    ++calls;
    return oracle(S, T);
  };
  Subset cur = X;
  while (!cur.is_empty() && !ask(cur, cur)) {
    int x = detail::algorithm1_discard(ask, cur, Subset::empty());
    cur = cur.minus(x);
  }
  if (stats) stats->oracle_calls += calls;
  return cur;
}

inline Subset choose_bruteforce(const ChoiceCorrespondence& corr, const UMWeight& w, Subset X,
                                int cap = kDefaultEnumCap) {
  return argmax_weight(corr.enumerate(X, cap), w);
}

struct TiebrokenResult {
  Subset chosen;
  TiebreakStats stats;
};

// Tie-broken choice C^w(X). The oracle fast path is trusted only for inputs
// asserted path independent; everything else falls back to enumerate+argmax
// under the cap.
inline TiebrokenResult choose_tiebroken(const ChoiceCorrespondence& corr, const UMWeight& w,
                                        Subset X, int cap = kDefaultEnumCap) {
  if (!w.verified_um) fail(Errc::not_um, "choose_tiebroken: weight not verified UM");
  if (corr.pi_asserted()) {
    TiebreakStats stats;
    auto oracle = [&corr, &w](Subset S, Subset T) { return cw_membership(corr, w, S, T); };
    return {algorithm1_choice(oracle, X, &stats), stats};
  }
  if (X.size() > cap)
    fail(Errc::not_pi, "choose_tiebroken: correspondence not asserted PI and X exceeds cap");
  return {choose_bruteforce(corr, w, X, cap), {}};
}

// C^w(X) for a PI and LAD correspondence, built one element at a time: after
// extending the processed prefix by i_j, the new choice is one of the previous
// choice, the previous choice plus i_j, or a single swap towards i_j. At most
// 2|X|^2 candidate evaluations.
inline TiebrokenResult choose_pi_lad(const ChoiceCorrespondence& corr, const UMWeight& w,
                                     Subset X) {
  if (!w.verified_um) fail(Errc::not_um, "choose_pi_lad: weight not verified UM");
  TiebreakStats stats;
  Subset Y;
  Subset Xj;
  for (int ij : X.members()) {
    Xj = Xj.plus(ij);
    std::vector<Subset> cands;
    cands.push_back(Y);
    cands.push_back(Y.plus(ij));
    for (int i : Y.members()) cands.push_back(Y.minus(i).plus(ij));
    bool found = false;
    Subset best;
    Rat best_sum;
    for (Subset cand : cands) {
      ++stats.candidate_evals;
      if (!corr.member(Xj, cand)) continue;
      Rat s = w.total(cand);
      if (!found || s > best_sum) {
        found = true;
        best = cand;
        best_sum = s;
      }
    }
    if (!found)
      fail(Errc::no_valid_candidate,
           "no candidate is chosen at " + corr.ground().format(Xj) +
               "; correspondence is not PI+LAD");
    Y = best;
  }
  return {Y, stats};
}

}  // namespace pimatch
