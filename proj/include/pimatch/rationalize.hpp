#pragma once

#include <optional>
#include <queue>

#include "pimatch/choice.hpp"

namespace pimatch {

// X is revealed at least as good as Y when X is chosen from some menu that
// offers both; strictly better when additionally Y is passed over there. One
// step of a revealed-preference cycle, with the menu that witnesses it.
struct RevealedStep {
  Subset from;
  Subset to;
  Subset menu;
  bool strict;
};

struct CycleWitness {
  std::vector<RevealedStep> steps;
};

// Equivalence classes of chosen sets plus the strict order between classes,
// transitively closed. gamma lists every set chosen anywhere, ascending.
struct RevealedOrder {
  GroundSet ground;
  std::vector<Subset> gamma;
  std::vector<int> class_of;
  std::vector<std::vector<Subset>> classes;
  std::vector<std::vector<bool>> above;

  int gamma_index(Subset x) const {
    auto it = std::lower_bound(gamma.begin(), gamma.end(), x);
    if (it == gamma.end() || *it != x) fail(Errc::bad_argument, "set never chosen");
    return static_cast<int>(it - gamma.begin());
  }
};

struct SarpResult {
  bool rationalizable;
  std::optional<RevealedOrder> order;
  std::optional<CycleWitness> cycle;
};

namespace detail {

struct RevealedEdges {
  std::vector<Subset> gamma;
  // For ordered pair (a,b): menu witnessing a chosen while b also chosen
  // (equal) or passed over (strict). UINT32_MAX marks absence.
  std::vector<std::uint32_t> equal_menu;
  std::vector<std::uint32_t> strict_menu;
  std::size_t size = 0;

  std::size_t at(std::size_t a, std::size_t b) const { return a * size + b; }
  bool has_edge(std::size_t a, std::size_t b) const {
    return equal_menu[at(a, b)] != UINT32_MAX || strict_menu[at(a, b)] != UINT32_MAX;
  }
};

inline RevealedEdges revealed_edges(const std::vector<std::vector<Subset>>& table) {
  RevealedEdges e;
  for (const auto& row : table)
    for (Subset y : row) e.gamma.push_back(y);
  std::sort(e.gamma.begin(), e.gamma.end());
  e.gamma.erase(std::unique(e.gamma.begin(), e.gamma.end()), e.gamma.end());
  e.size = e.gamma.size();
  e.equal_menu.assign(e.size * e.size, UINT32_MAX);
  e.strict_menu.assign(e.size * e.size, UINT32_MAX);
  auto idx = [&](Subset x) {
    return std::size_t(std::lower_bound(e.gamma.begin(), e.gamma.end(), x) - e.gamma.begin());
  };
  for (std::uint32_t z = 0; z < table.size(); ++z) {
    const auto& chosen = table[z];
    for (Subset a : chosen) {
      std::size_t ia = idx(a);
      for (std::size_t ib = 0; ib < e.size; ++ib) {
        Subset b = e.gamma[ib];
        if (!b.subset_of(Subset(z))) continue;
        bool b_chosen = std::binary_search(chosen.begin(), chosen.end(), b);
        auto& slot = b_chosen ? e.equal_menu[e.at(ia, ib)] : e.strict_menu[e.at(ia, ib)];
        if (slot == UINT32_MAX) slot = z;
      }
    }
  }
  return e;
}

}  // namespace detail

// Strong-axiom check: the strict revealed order over equivalence classes of
// chosen sets must be acyclic. Returns the closed order when it is, or a
// replayable cycle through at least one strict step when it is not.
inline SarpResult sarp_check(const ChoiceCorrespondence& corr, int cap = kDefaultDpCap) {
  auto table = materialize(corr, cap);
  detail::RevealedEdges e = detail::revealed_edges(table);
  std::size_t m = e.size;

  // A violation is a strict step from a to b with a reachable from b again.
  std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) reach[a][b] = e.has_edge(a, b);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (reach[k][j]) reach[i][j] = true;
    }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (e.strict_menu[e.at(a, b)] == UINT32_MAX || !reach[b][a]) continue;
      std::vector<int> parent(m, -2);
      std::queue<std::size_t> q;
      parent[b] = -1;
      q.push(b);
      while (!q.empty() && parent[a] == -2) {
        std::size_t cur = q.front();
        q.pop();
        for (std::size_t nxt = 0; nxt < m; ++nxt) {
          if (parent[nxt] != -2 || !e.has_edge(cur, nxt)) continue;
          parent[nxt] = static_cast<int>(cur);
          q.push(nxt);
        }
      }
      if (parent[a] == -2)
        fail(Errc::oracle_inconsistent, "closure reports a path the edge scan cannot find");
      CycleWitness cyc;
      std::vector<std::size_t> path;
      for (std::size_t cur = a;; cur = std::size_t(parent[cur])) {
        path.push_back(cur);
        if (parent[cur] == -1) break;
      }
      std::reverse(path.begin(), path.end());  // b ... a
      cyc.steps.push_back({e.gamma[a], e.gamma[b], Subset(e.strict_menu[e.at(a, b)]), true});
      for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        std::size_t u = path[k], v = path[k + 1];
        bool strict = e.equal_menu[e.at(u, v)] == UINT32_MAX;
        std::uint32_t menu = strict ? e.strict_menu[e.at(u, v)] : e.equal_menu[e.at(u, v)];
        cyc.steps.push_back({e.gamma[u], e.gamma[v], Subset(menu), strict});
      }
      return {false, std::nullopt, std::move(cyc)};
    }
  }

  RevealedOrder order;
  order.ground = corr.ground();
  order.gamma = e.gamma;
  order.class_of.assign(m, -1);
  // Classes are the connected components of the mutual (equal) relation.
  for (std::size_t a = 0; a < m; ++a) {
    if (order.class_of[a] != -1) continue;
    int cls = static_cast<int>(order.classes.size());
    order.classes.emplace_back();
    std::queue<std::size_t> q;
    order.class_of[a] = cls;
    q.push(a);
    while (!q.empty()) {
      std::size_t cur = q.front();
      q.pop();
      order.classes[std::size_t(cls)].push_back(e.gamma[cur]);
      for (std::size_t nxt = 0; nxt < m; ++nxt) {
        if (order.class_of[nxt] != -1) continue;
        if (e.equal_menu[e.at(cur, nxt)] == UINT32_MAX &&
            e.equal_menu[e.at(nxt, cur)] == UINT32_MAX)
          continue;
        order.class_of[nxt] = cls;
        q.push(nxt);
      }
    }
    std::sort(order.classes[std::size_t(cls)].begin(), order.classes[std::size_t(cls)].end());
  }
  std::size_t nc = order.classes.size();
  order.above.assign(nc, std::vector<bool>(nc, false));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (e.strict_menu[e.at(a, b)] != UINT32_MAX)
        order.above[std::size_t(order.class_of[a])][std::size_t(order.class_of[b])] = true;
  for (std::size_t k = 0; k < nc; ++k)
    for (std::size_t i = 0; i < nc; ++i)
      for (std::size_t j = 0; j < nc; ++j)
        if (order.above[i][k] && order.above[k][j]) order.above[i][j] = true;
  for (std::size_t i = 0; i < nc; ++i)
    if (order.above[i][i])
      fail(Errc::oracle_inconsistent, "strict class order reflexive after acyclic edge scan");
  return {true, std::move(order), std::nullopt};
}

// Counting utility from the revealed order: a set's value is the number of
// chosen sets lying in classes strictly below it along a fixed linear
// extension, shifted so the empty set gets zero; never-chosen sets sit one
// level below everything. Ties within a class are preserved exactly.
inline UtilityFunction utility_from_order(const RevealedOrder& order) {
  std::size_t nc = order.classes.size();
  if (nc == 0) fail(Errc::empty_family, "revealed order with no classes");
  // Bottom-up linear extension, smallest lead member first among the ready.
  std::vector<bool> placed(nc, false);
  std::vector<long long> level_count(nc, 0);
  long long below = 0;
  for (std::size_t step = 0; step < nc; ++step) {
    int pick = -1;
    for (std::size_t c = 0; c < nc; ++c) {
      if (placed[c]) continue;
      bool ready = true;
      for (std::size_t d = 0; d < nc; ++d)
        if (!placed[d] && d != c && order.above[c][d]) ready = false;
      if (!ready) continue;
      if (pick < 0 || order.classes[c][0] < order.classes[std::size_t(pick)][0])
        pick = static_cast<int>(c);
    }
    if (pick < 0) fail(Errc::not_partial_order, "revealed order has a cycle");
    placed[std::size_t(pick)] = true;
    level_count[std::size_t(pick)] = below;
    below += static_cast<long long>(order.classes[std::size_t(pick)].size());
  }

  int n = order.ground.size();
  std::vector<LexValue> values(std::size_t(1) << n, LexValue::scalar(Rat(-1)));
  for (std::size_t g = 0; g < order.gamma.size(); ++g)
    values[order.gamma[g].bits()] =
        LexValue::scalar(Rat(level_count[std::size_t(order.class_of[g])]));
  Rat at_empty = values[0].components()[0];
  for (auto& v : values) v = LexValue::scalar(v.components()[0] - at_empty);
  return table_utility(order.ground, 1, std::move(values));
}

namespace detail {

// tau(X): union of every menu whose choices meet the choices at X.
inline std::vector<Subset> tau_table(const std::vector<std::vector<Subset>>& table) {
  std::size_t size = table.size();
  std::vector<Subset> tau(size);
  for (std::uint32_t x = 0; x < size; ++x) {
    Subset acc;
    const auto& cx = table[x];
    for (std::uint32_t y = 0; y < size; ++y) {
      const auto& cy = table[y];
      auto a = cx.begin();
      auto b = cy.begin();
      bool meet = false;
      while (a != cx.end() && b != cy.end()) {
        if (*a == *b) {
          meet = true;
          break;
        }
        if (*a < *b)
          ++a;
        else
          ++b;
      }
      if (meet) acc = acc | Subset(y);
    }
    tau[x] = acc;
  }
  return tau;
}

}  // namespace detail

// Closure-counting utility for a path-independent correspondence: |tau(X)|,
// less one when X is not chosen from itself, shifted so the empty set gets
// zero. The argmax of the result is verified to reproduce the correspondence;
// inputs that fail that verification are rejected as not path independent.
inline UtilityFunction rationalize_pi(const ChoiceCorrespondence& corr, int cap = kDefaultDpCap) {
  auto table = materialize(corr, cap);
  auto tau = detail::tau_table(table);
  std::size_t size = table.size();
  std::vector<LexValue> values;
  values.reserve(size);
  for (std::uint32_t x = 0; x < size; ++x) {
    bool self = std::binary_search(table[x].begin(), table[x].end(), Subset(x));
    values.push_back(LexValue::scalar(Rat(tau[x].size() - (self ? 0 : 1))));
  }
  Rat at_empty = values[0].components()[0];
  for (auto& v : values) v = LexValue::scalar(v.components()[0] - at_empty);

  for (std::uint32_t x = 0; x < size; ++x) {
    LexValue best = values[0];
    for (Subset y : subsets_of(Subset(x)))
      if (values[y.bits()] > best) best = values[y.bits()];
    std::vector<Subset> argmax;
    for (Subset y : subsets_of(Subset(x)))
      if (values[y.bits()] == best) argmax.push_back(y);
    if (argmax != table[x])
      fail(Errc::not_pi, "closure-counting utility does not reproduce the choices at " +
                             corr.ground().format(Subset(x)));
  }
  return table_utility(corr.ground(), 1, std::move(values));
}

}  // namespace pimatch
