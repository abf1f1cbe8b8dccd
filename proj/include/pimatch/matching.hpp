#pragma once

#include "pimatch/axioms.hpp"
#include "pimatch/tiebreak.hpp"

namespace pimatch {

struct School {
  std::string name;
  ChoiceCorrespondence choice;
};

// Many-to-one market. prefs[i] lists the acceptable school indices for
// student i, best first; schools absent from the list are unacceptable.
struct Market {
  GroundSet students;
  std::vector<School> schools;
  std::vector<std::vector<int>> prefs;

  int school_index(const std::string& name) const {
    for (std::size_t s = 0; s < schools.size(); ++s)
      if (schools[s].name == name) return static_cast<int>(s);
    fail(Errc::unknown_id, "no school named " + name);
  }

  void validate() const {
    std::set<std::string> names;
    for (const auto& s : schools) {
      if (s.name.empty()) fail(Errc::bad_argument, "school with an empty name");
      if (!names.insert(s.name).second) fail(Errc::bad_argument, "duplicate school " + s.name);
      if (s.choice.ground().names() != students.names())
        fail(Errc::bad_argument, "school " + s.name + " chooses over a different student set");
    }
    if (prefs.size() != std::size_t(students.size()))
      fail(Errc::bad_argument, "need one preference list per student");
    for (int i = 0; i < students.size(); ++i) {
      std::set<int> seen;
      for (int s : prefs[std::size_t(i)]) {
        if (s < 0 || s >= static_cast<int>(schools.size()))
          fail(Errc::bad_argument, "preference list of " + students.name(i) +
                                       " mentions an unknown school");
        if (!seen.insert(s).second)
          fail(Errc::bad_argument, "preference list of " + students.name(i) +
                                       " repeats a school");
      }
    }
  }
};

struct Matching {
  std::vector<int> assign;

  static Matching unmatched(const Market& m) {
    Matching mu;
    mu.assign.assign(std::size_t(m.students.size()), -1);
    return mu;
  }
  Subset roster(int school) const {
    Subset r = Subset::empty();
    for (std::size_t i = 0; i < assign.size(); ++i)
      if (assign[i] == school) r = r.plus(static_cast<int>(i));
    return r;
  }
  bool operator==(const Matching& o) const { return assign == o.assign; }
  bool operator!=(const Matching& o) const { return assign != o.assign; }
};

// Rank of a school in student i's list: position for acceptable schools,
// list length for being unmatched, one past that for unacceptable schools.
inline int rank_of(const Market& m, int i, int school) {
  const auto& p = m.prefs[std::size_t(i)];
  if (school < 0) return static_cast<int>(p.size());
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] == school) return static_cast<int>(k);
  return static_cast<int>(p.size()) + 1;
}

inline bool prefers(const Market& m, int i, int s, int t) {
  if (s == t) return false;
  return rank_of(m, i, s) < rank_of(m, i, t);
}

// Two distinct unacceptable schools are incomparable, never weakly ordered.
inline bool weakly_prefers(const Market& m, int i, int s, int t) {
  if (s == t) return true;
  int rs = rank_of(m, i, s), rt = rank_of(m, i, t);
  int unacc = static_cast<int>(m.prefs[std::size_t(i)].size()) + 1;
  if (rs == unacc && rt == unacc) return false;
  return rs <= rt;
}

inline Subset strict_pool(const Market& m, const Matching& mu, int school) {
  Subset out = Subset::empty();
  for (int i = 0; i < m.students.size(); ++i)
    if (prefers(m, i, school, mu.assign[std::size_t(i)])) out = out.plus(i);
  return out;
}

// Roster plus everyone who strictly prefers the school to their own match.
inline Subset weak_pool(const Market& m, const Matching& mu, int school) {
  return mu.roster(school) | strict_pool(m, mu, school);
}

enum class StabilityMode { exhaustive, single_pi };

// A matching is stable when every student finds their seat acceptable and no
// school, offered its roster plus any set of students who strictly prefer it,
// would give up that roster. single_pi checks only the full set of strict
// preferrers, which suffices when school choices are path independent.
inline Verdict is_stable(const Market& m, const Matching& mu,
                         StabilityMode mode = StabilityMode::exhaustive,
                         int cap = kDefaultEnumCap) {
  for (int i = 0; i < m.students.size(); ++i) {
    int s = mu.assign[std::size_t(i)];
    if (s >= 0 && rank_of(m, i, s) >= static_cast<int>(m.prefs[std::size_t(i)].size())) {
      Json w;
      w["kind"] = "individual_rationality";
      w["student"] = m.students.name(i);
      w["school"] = m.schools[std::size_t(s)].name;
      return Verdict::violated_with(std::move(w));
    }
  }
  for (std::size_t s = 0; s < m.schools.size(); ++s) {
    Subset roster = mu.roster(static_cast<int>(s));
    Subset strict = strict_pool(m, mu, static_cast<int>(s));
    auto blocked = [&](Subset coalition) {
      Json w;
      w["kind"] = "blocking";
      w["school"] = m.schools[s].name;
      w["coalition"] = set_json(m.students, coalition);
      w["roster"] = set_json(m.students, roster);
      return Verdict::violated_with(std::move(w));
    };
    if (mode == StabilityMode::single_pi) {
      if (!m.schools[s].choice.member(roster | strict, roster)) return blocked(strict);
    } else {
      if (strict.size() > cap) fail(Errc::cap_exceeded, "too many potential blockers");
      for (Subset x : subsets_of(strict))
        if (!m.schools[s].choice.member(roster | x, roster)) return blocked(x);
    }
  }
  return Verdict::holds();
}

// Every school must hold as many students as the largest set its choice
// correspondence would pick from everyone weakly interested.
inline Verdict is_maximal(const Market& m, const Matching& mu, int cap = kDefaultEnumCap) {
  for (std::size_t s = 0; s < m.schools.size(); ++s) {
    Subset pool = weak_pool(m, mu, static_cast<int>(s));
    int best = 0;
    for (Subset y : m.schools[s].choice.enumerate(pool, cap)) best = std::max(best, y.size());
    Subset roster = mu.roster(static_cast<int>(s));
    if (roster.size() < best) {
      Json w;
      w["school"] = m.schools[s].name;
      w["roster"] = set_json(m.students, roster);
      w["max_size"] = best;
      return Verdict::violated_with(std::move(w));
    }
  }
  return Verdict::holds();
}

inline std::vector<UMWeight> default_school_weights(const Market& m) {
  std::vector<int> order(std::size_t(m.students.size()));
  std::iota(order.begin(), order.end(), 0);
  std::vector<bool> negative(std::size_t(m.students.size()), false);
  std::vector<UMWeight> out;
  out.reserve(m.schools.size());
  for (std::size_t s = 0; s < m.schools.size(); ++s)
    out.push_back(canonical_weight(m.students, order, negative));
  return out;
}

// Student-proposing deferred acceptance. Each school resolves its pool with
// the tie-broken choice under its weight. The result is checked for
// stability afterwards; a failure there means some school's choices were not
// path independent to begin with.
inline Matching deferred_acceptance(const Market& m, const std::vector<UMWeight>& school_weights,
                                    Json* trace = nullptr, int cap = kDefaultEnumCap) {
  m.validate();
  if (school_weights.size() != m.schools.size())
    fail(Errc::bad_argument, "need one tie-breaking weight per school");
  int n = m.students.size();
  std::vector<std::size_t> ptr(std::size_t(n), 0);
  std::vector<int> held_at(std::size_t(n), -1);
  std::vector<Subset> held(m.schools.size(), Subset::empty());
  Json rounds = Json::array();
  while (true) {
    std::vector<Subset> props(m.schools.size(), Subset::empty());
    bool any = false;
    for (int i = 0; i < n; ++i) {
      if (held_at[std::size_t(i)] >= 0) continue;
      if (ptr[std::size_t(i)] >= m.prefs[std::size_t(i)].size()) continue;
      int s = m.prefs[std::size_t(i)][ptr[std::size_t(i)]];
      props[std::size_t(s)] = props[std::size_t(s)].plus(i);
      any = true;
    }
    if (!any) break;
    Json round;
    for (std::size_t s = 0; s < m.schools.size(); ++s) {
      if (props[s].is_empty()) continue;
      Subset pool = held[s] | props[s];
      Subset chosen =
          choose_tiebroken(m.schools[s].choice, school_weights[s], pool, cap).chosen;
      for (int i : (pool - chosen).members()) {
        held_at[std::size_t(i)] = -1;
        ++ptr[std::size_t(i)];
      }
      for (int i : chosen.members()) held_at[std::size_t(i)] = static_cast<int>(s);
      held[s] = chosen;
      if (trace) {
        round[m.schools[s].name] = {{"proposals", set_json(m.students, props[s])},
                                    {"held", set_json(m.students, chosen)}};
      }
    }
    if (trace) rounds.push_back(std::move(round));
  }
  Matching mu;
  mu.assign = held_at;
  if (trace) (*trace)["rounds"] = std::move(rounds);
  if (Verdict v = is_stable(m, mu, StabilityMode::exhaustive, cap); !v.ok())
    fail(Errc::not_pi, "deferred acceptance produced an unstable matching; school choices "
                       "cannot be path independent");
  return mu;
}

namespace detail {

inline Json move_json(const Market& m, int student, int from, int to) {
  Json mv;
  mv["student"] = m.students.name(student);
  mv["from"] = from < 0 ? Json() : Json(m.schools[std::size_t(from)].name);
  mv["to"] = to < 0 ? Json() : Json(m.schools[std::size_t(to)].name);
  return mv;
}

}  // namespace detail

// Grows a stable matching to a maximal one through vacancy chains: an
// extendable student joins a school that can hold them, the school they left
// refills from its own pool, and so on. Choices along a chain are resolved
// with weights that favour each school's roster at the start of the chain,
// which keeps every intermediate matching stable.
inline Matching improve_to_maximal(const Market& m, const Matching& start, Json* trace = nullptr,
                                   int cap = kDefaultEnumCap) {
  m.validate();
  if (Verdict v = is_stable(m, start, StabilityMode::exhaustive, cap); !v.ok())
    fail(Errc::not_stable_input, "improve_to_maximal needs a stable starting matching");
  Matching nu = start;
  int budget = (m.students.size() + 2) * (static_cast<int>(m.schools.size()) + 2);
  Json moves = Json::array();
  while (true) {
    int star_school = -1, star_student = -1;
    for (std::size_t s = 0; s < m.schools.size() && star_school < 0; ++s) {
      Subset pool = weak_pool(m, nu, static_cast<int>(s));
      auto family = m.schools[s].choice.enumerate(pool, cap);
      int best = 0;
      for (Subset y : family) best = std::max(best, y.size());
      Subset roster = nu.roster(static_cast<int>(s));
      if (roster.size() >= best) continue;
      auto ext = extendable_element(m.students, family, roster);
      if (!ext)
        fail(Errc::not_pi, "school " + m.schools[s].name +
                               " chooses a larger set but no single extension; its choices "
                               "cannot form an exchange structure");
      star_school = static_cast<int>(s);
      star_student = *ext;
    }
    if (star_school < 0) break;

    std::vector<UMWeight> w;
    w.reserve(m.schools.size());
    for (std::size_t s = 0; s < m.schools.size(); ++s) {
      Subset target = nu.roster(static_cast<int>(s));
      if (static_cast<int>(s) == star_school) target = target.plus(star_student);
      w.push_back(selecting_weight(m.students, target));
    }

    int school = star_school;
    while (school >= 0) {
      if (--budget < 0)
        fail(Errc::oracle_inconsistent, "improvement chains exceeded their step budget");
      Subset pool = weak_pool(m, nu, school);
      Subset old = nu.roster(school);
      Subset chosen = choose_pi_lad(m.schools[std::size_t(school)].choice, w[std::size_t(school)],
                                    pool).chosen;
      Subset admitted = chosen - old;
      Subset departed = old - chosen;
      if (!departed.is_empty() || admitted.size() > 1)
        fail(Errc::not_pi, "a vacancy chain displaced students, which stable path-independent "
                           "choices cannot do");
      if (admitted.is_empty()) break;
      int k = admitted.members()[0];
      int prev = nu.assign[std::size_t(k)];
      nu.assign[std::size_t(k)] = school;
      if (trace) moves.push_back(detail::move_json(m, k, prev, school));
      school = prev;
    }
  }
  if (trace) (*trace)["moves"] = std::move(moves);
  return nu;
}

// Directed graph on matched students: an edge i -> j means i strictly
// prefers j's school and that school would hold i in j's place.
struct ExchangeGraph {
  std::vector<std::vector<int>> adj;
};

inline ExchangeGraph build_exchange_graph(const Market& m, const Matching& mu,
                                          int cap = kDefaultEnumCap) {
  int n = m.students.size();
  ExchangeGraph g;
  g.adj.assign(std::size_t(n), {});
  std::vector<Subset> pools(m.schools.size());
  for (std::size_t s = 0; s < m.schools.size(); ++s)
    pools[s] = weak_pool(m, mu, static_cast<int>(s));
  for (int i = 0; i < n; ++i) {
    if (mu.assign[std::size_t(i)] < 0) continue;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int s = mu.assign[std::size_t(j)];
      if (s < 0 || s == mu.assign[std::size_t(i)]) continue;
      if (!prefers(m, i, s, mu.assign[std::size_t(i)])) continue;
      Subset roster = mu.roster(s);
      if (m.schools[std::size_t(s)].choice.member(pools[std::size_t(s)].minus(j),
                                                  roster.minus(j).plus(i)))
        g.adj[std::size_t(i)].push_back(j);
    }
  }
  return g;
}

// Shortest cycle in the exchange graph, ties broken towards the
// lexicographically smallest rotation starting from its smallest student.
inline std::optional<std::vector<int>> find_psic(const Market& m, const Matching& mu,
                                                 int cap = kDefaultEnumCap) {
  ExchangeGraph g = build_exchange_graph(m, mu, cap);
  int n = m.students.size();
  std::optional<std::vector<int>> best;
  auto better = [&](const std::vector<int>& c) {
    if (!best) return true;
    if (c.size() != best->size()) return c.size() < best->size();
    return c < *best;
  };
  for (int start = 0; start < n; ++start) {
    std::vector<int> dist(std::size_t(n), -1), parent(std::size_t(n), -1);
    std::vector<int> queue{start};
    dist[std::size_t(start)] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int u = queue[head];
      for (int v : g.adj[std::size_t(u)]) {
        if (dist[std::size_t(v)] >= 0) continue;
        dist[std::size_t(v)] = dist[std::size_t(u)] + 1;
        parent[std::size_t(v)] = u;
        queue.push_back(v);
      }
    }
    int close = -1;
    for (int u : queue) {
      if (u == start) continue;
      if (std::find(g.adj[std::size_t(u)].begin(), g.adj[std::size_t(u)].end(), start) ==
          g.adj[std::size_t(u)].end())
        continue;
      if (close < 0 || dist[std::size_t(u)] < dist[std::size_t(close)] ||
          (dist[std::size_t(u)] == dist[std::size_t(close)] && u < close))
        close = u;
    }
    if (close < 0) continue;
    std::vector<int> cycle;
    for (int u = close; u >= 0; u = parent[std::size_t(u)]) cycle.push_back(u);
    std::reverse(cycle.begin(), cycle.end());
    auto mn = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), mn, cycle.end());
    if (better(cycle)) best = cycle;
  }
  return best;
}

// Rotates students along the cycle: each one takes the seat of the next.
// Validates every leg against the exchange conditions first.
inline Matching apply_psic(const Market& m, const Matching& mu, const std::vector<int>& cycle,
                            int cap = kDefaultEnumCap) {
  if (cycle.size() < 2) fail(Errc::invalid_cycle, "a cycle needs at least two students");
  std::set<int> seen;
  for (int i : cycle) {
    if (i < 0 || i >= m.students.size()) fail(Errc::invalid_cycle, "unknown student in cycle");
    if (!seen.insert(i).second)
      fail(Errc::invalid_cycle, "student " + m.students.name(i) + " appears twice");
    if (mu.assign[std::size_t(i)] < 0)
      fail(Errc::invalid_cycle, "student " + m.students.name(i) + " holds no seat to trade");
  }
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    int i = cycle[k];
    int j = cycle[(k + 1) % cycle.size()];
    int s = mu.assign[std::size_t(j)];
    if (!prefers(m, i, s, mu.assign[std::size_t(i)]))
      fail(Errc::invalid_cycle, "student " + m.students.name(i) + " does not want the seat of " +
                                    m.students.name(j));
    Subset pool = weak_pool(m, mu, s).minus(j);
    if (!m.schools[std::size_t(s)].choice.member(pool, mu.roster(s).minus(j).plus(i)))
      fail(Errc::invalid_cycle, "school " + m.schools[std::size_t(s)].name +
                                    " would not swap " + m.students.name(j) + " for " +
                                    m.students.name(i));
  }
  Matching out = mu;
  for (std::size_t k = 0; k < cycle.size(); ++k)
    out.assign[std::size_t(cycle[k])] = mu.assign[std::size_t(cycle[(k + 1) % cycle.size()])];
  return out;
}

// Alternates vacancy chains with exchange cycles until neither applies.
// The result is stable, maximal, and admits no further cycle, which under
// path independence plus the law of aggregate demand is exactly constrained
// efficiency. Stability is re-verified after every mutation.
inline Matching constrained_efficient(const Market& m, const Matching& start,
                                      Json* trace = nullptr, int cap = kDefaultEnumCap) {
  m.validate();
  if (Verdict v = is_stable(m, start, StabilityMode::exhaustive, cap); !v.ok())
    fail(Errc::not_stable_input, "constrained_efficient needs a stable starting matching");
  Matching nu = start;
  Json phases = Json::array();
  int budget = (m.students.size() + 2) * (static_cast<int>(m.schools.size()) + 2);
  while (true) {
    Json chain_trace;
    nu = improve_to_maximal(m, nu, trace ? &chain_trace : nullptr, cap);
    if (Verdict v = is_stable(m, nu, StabilityMode::exhaustive, cap); !v.ok())
      fail(Errc::not_pi, "a vacancy chain broke stability");
    auto cycle = find_psic(m, nu, cap);
    if (trace) {
      Json phase;
      phase["moves"] = chain_trace.is_null() ? Json::array() : chain_trace["moves"];
      if (cycle) {
        Json names = Json::array();
        for (int i : *cycle) names.push_back(m.students.name(i));
        phase["cycle"] = std::move(names);
      }
      phases.push_back(std::move(phase));
    }
    if (!cycle) break;
    nu = apply_psic(m, nu, *cycle, cap);
    if (Verdict v = is_stable(m, nu, StabilityMode::exhaustive, cap); !v.ok())
      fail(Errc::not_pi, "an exchange cycle broke stability");
    if (--budget < 0)
      fail(Errc::oracle_inconsistent, "efficiency loop exceeded its step budget");
  }
  if (trace) (*trace)["phases"] = std::move(phases);
  return nu;
}

// Weak Pareto dominance over students only.
inline bool pareto_dominates(const Market& m, const Matching& a, const Matching& b) {
  bool strict = false;
  for (int i = 0; i < m.students.size(); ++i) {
    int sa = a.assign[std::size_t(i)], sb = b.assign[std::size_t(i)];
    if (!weakly_prefers(m, i, sa, sb)) return false;
    if (sa != sb && prefers(m, i, sa, sb)) strict = true;
  }
  return strict;
}

namespace detail {

// All stable matchings by brute force over every assignment of students to
// acceptable schools or to nothing.
inline std::vector<Matching> enumerate_stable(const Market& m, int cap = kDefaultEnumCap) {
  int n = m.students.size();
  double combos = 1;
  for (int i = 0; i < n; ++i) combos *= double(m.prefs[std::size_t(i)].size() + 1);
  if (combos > 300000.0) fail(Errc::cap_exceeded, "too many assignments to enumerate");
  std::vector<Matching> out;
  Matching mu = Matching::unmatched(m);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      if (is_stable(m, mu, StabilityMode::exhaustive, cap).ok()) out.push_back(mu);
      return;
    }
    mu.assign[std::size_t(i)] = -1;
    rec(i + 1);
    for (int s : m.prefs[std::size_t(i)]) {
      mu.assign[std::size_t(i)] = s;
      rec(i + 1);
    }
    mu.assign[std::size_t(i)] = -1;
  };
  rec(0);
  return out;
}

}  // namespace detail

// Ground truth: stable and not Pareto-dominated by any other stable matching.
inline bool oracle_constrained_efficient(const Market& m, const Matching& mu,
                                         int cap = kDefaultEnumCap) {
  if (!is_stable(m, mu, StabilityMode::exhaustive, cap).ok()) return false;
  for (const Matching& other : detail::enumerate_stable(m, cap))
    if (pareto_dominates(m, other, mu)) return false;
  return true;
}

}  // namespace pimatch
