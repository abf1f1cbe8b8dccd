#pragma once

#include "pimatch/matching.hpp"

namespace pimatch {

// Independence oracle plus a rank computed greedily, which is valid because
// the constructors below only hand out genuine matroids.
struct Matroid {
  GroundSet ground;
  std::function<bool(Subset)> independent;

  int rank(Subset X) const {
    Subset kept;
    for (int i : X.members())
      if (independent(kept.plus(i))) kept = kept.plus(i);
    return kept.size();
  }
};

inline Matroid uniform_matroid(GroundSet gs, int r) {
  if (r < 0) fail(Errc::bad_argument, "uniform_matroid: negative rank");
  return {std::move(gs), [r](Subset X) { return X.size() <= r; }};
}

// X independent iff |X intersect L| <= cap_L for every capped set; the capped sets
// must be pairwise nested or disjoint.
inline Matroid laminar_matroid(GroundSet gs, std::vector<std::pair<Subset, int>> caps) {
  Subset full = gs.full();
  for (std::size_t a = 0; a < caps.size(); ++a) {
    if (!caps[a].first.subset_of(full))
      fail(Errc::bad_argument, "laminar_matroid: capped set outside ground set");
    if (caps[a].second < 0) fail(Errc::bad_argument, "laminar_matroid: negative cap");
    for (std::size_t b = 0; b < a; ++b) {
      Subset meet = caps[a].first & caps[b].first;
      if (!meet.is_empty() && meet != caps[a].first && meet != caps[b].first)
        fail(Errc::bad_argument, "laminar_matroid: " + gs.format(caps[a].first) + " and " +
                                     gs.format(caps[b].first) + " cross");
    }
  }
  auto capped = std::make_shared<const std::vector<std::pair<Subset, int>>>(std::move(caps));
  return {std::move(gs), [capped](Subset X) {
            for (const auto& [set, cap] : *capped)
              if ((X & set).size() > cap) return false;
            return true;
          }};
}

namespace detail {

// Maximum bipartite matching between the members of X and the seat list; i is
// adjacent to seat j when seats[j] contains i. Plain augmenting paths, the
// graphs here never warrant more.
inline int seat_matching(Subset X, const std::vector<Subset>& seats) {
  std::vector<int> seat_of(seats.size(), -1);
  std::vector<char> tried;
  std::function<bool(int)> augment = [&](int i) -> bool {
    for (std::size_t j = 0; j < seats.size(); ++j) {
      if (tried[j] || !seats[j].contains(i)) continue;
      tried[j] = 1;
      if (seat_of[j] < 0 || augment(seat_of[j])) {
        seat_of[j] = i;
        return true;
      }
    }
    return false;
  };
  int size = 0;
  for (int i : X.members()) {
    tried.assign(seats.size(), 0);
    if (augment(i)) ++size;
  }
  return size;
}

}  // namespace detail

inline int transversal_rank(const std::vector<Subset>& seats, Subset X) {
  return detail::seat_matching(X, seats);
}

inline Matroid transversal_matroid(GroundSet gs, std::vector<Subset> seats) {
  Subset full = gs.full();
  for (Subset s : seats)
    if (!s.subset_of(full)) fail(Errc::bad_argument, "transversal_matroid: seat outside ground set");
  auto shared = std::make_shared<const std::vector<Subset>>(std::move(seats));
  return {std::move(gs), [shared](Subset X) {
            return detail::seat_matching(X, *shared) == X.size();
          }};
}

// Partition of the ground set into types. Builders that look types up per
// student reject overlaps and gaps here, up front.
struct TypeStructure {
  GroundSet ground;
  std::vector<Subset> groups;

  static TypeStructure partition(GroundSet gs, std::vector<Subset> groups) {
    Subset seen;
    for (Subset g : groups) {
      if (!g.subset_of(gs.full())) fail(Errc::bad_argument, "type outside ground set");
      if (!(g & seen).is_empty())
        fail(Errc::overlapping_types, "types overlap at " + gs.format(g & seen));
      seen = seen | g;
    }
    if (seen != gs.full())
      fail(Errc::bad_argument, "types do not cover " + gs.format(gs.full() - seen));
    return {std::move(gs), std::move(groups)};
  }

  int type_of(int i) const {
    for (std::size_t t = 0; t < groups.size(); ++t)
      if (groups[t].contains(i)) return static_cast<int>(t);
    fail(Errc::bad_argument, "element " + ground.name(i) + " has no type");
  }
};

namespace detail {

inline void check_scores(const GroundSet& gs, const std::vector<Rat>& v, const char* who) {
  if (static_cast<int>(v.size()) != gs.size())
    fail(Errc::bad_argument, std::string(who) + ": need one score per element");
}

inline Rat score_sum(const std::vector<Rat>& v, Subset X) {
  Rat sum = 0;
  for (int i : X.members()) sum += v[static_cast<std::size_t>(i)];
  return sum;
}

}  // namespace detail

// Capacity-gated sum of per-student scores.
inline UtilityFunction responsive(const GroundSet& gs, int q, std::vector<Rat> v) {
  detail::check_scores(gs, v, "responsive");
  if (q < 0) fail(Errc::bad_argument, "responsive: negative capacity");
  for (const Rat& r : v)
    if (r <= 0) fail(Errc::bad_argument, "responsive: scores must be strictly positive");
  auto scores = std::make_shared<const std::vector<Rat>>(std::move(v));
  return make_utility(gs, 1, [q, scores](Subset X) {
    if (X.size() > q) return LexValue::neg_inf();
    return LexValue::scalar(detail::score_sum(*scores, X));
  });
}

// Fill seats first, then honor per-type floors and ceilings, then score. The
// middle component counts a type's students twice while under its floor and
// once while under its ceiling, so floor seats outrank ceiling seats outrank
// unreserved ones.
inline UtilityFunction controlled_choice(const GroundSet& gs, int q, const TypeStructure& types,
                                         std::vector<int> floors, std::vector<int> ceilings,
                                         std::vector<Rat> v) {
  detail::check_scores(gs, v, "controlled_choice");
  if (!(types.ground == gs))
    fail(Errc::bad_argument, "controlled_choice: type structure over a different ground set");
  if (q < 0) fail(Errc::bad_argument, "controlled_choice: negative capacity");
  std::size_t T = types.groups.size();
  if (floors.size() != T || ceilings.size() != T)
    fail(Errc::bad_argument, "controlled_choice: need one floor and one ceiling per type");
  int floor_total = 0;
  for (std::size_t t = 0; t < T; ++t) {
    if (floors[t] < 0 || ceilings[t] < 0)
      fail(Errc::bad_argument, "controlled_choice: negative bound");
    floor_total += floors[t];
  }
  if (floor_total > q)
    fail(Errc::bad_argument, "controlled_choice: floors add up past the capacity");
  auto groups = std::make_shared<const std::vector<Subset>>(types.groups);
  auto lo = std::make_shared<const std::vector<int>>(std::move(floors));
  auto hi = std::make_shared<const std::vector<int>>(std::move(ceilings));
  auto scores = std::make_shared<const std::vector<Rat>>(std::move(v));
  return make_utility(gs, 3, [q, groups, lo, hi, scores](Subset X) {
    if (X.size() > q) return LexValue::neg_inf();
    int quota = 0;
    for (std::size_t t = 0; t < groups->size(); ++t) {
      int k = (X & (*groups)[t]).size();
      quota += std::min(k, (*lo)[t]) + std::min(k, (*hi)[t]);
    }
    return LexValue::tuple({Rat(X.size()), Rat(quota), detail::score_sum(*scores, X)});
  });
}

// Fill seats first, then minimize the summed squared distance of per-type
// counts from their reserve targets, then score. The distance term is stored
// shifted by the constant sum of squared targets so the empty set evaluates
// to zero; construction cross-checks the shifted form against the direct one
// on every subset it can afford.
inline UtilityFunction edcr(const GroundSet& gs, int q, const TypeStructure& types,
                            std::vector<int> reserves, std::vector<Rat> v) {
  detail::check_scores(gs, v, "edcr");
  if (!(types.ground == gs))
    fail(Errc::bad_argument, "edcr: type structure over a different ground set");
  if (q < 0) fail(Errc::bad_argument, "edcr: negative capacity");
  std::size_t T = types.groups.size();
  if (reserves.size() != T) fail(Errc::bad_argument, "edcr: need one reserve target per type");
  int reserve_total = 0;
  for (int r : reserves) {
    if (r < 0) fail(Errc::bad_argument, "edcr: negative reserve target");
    reserve_total += r;
  }
  if (reserve_total > q) fail(Errc::bad_argument, "edcr: reserves add up past the capacity");

  std::vector<Rat> bonus(static_cast<std::size_t>(gs.size()));
  for (int i = 0; i < gs.size(); ++i)
    bonus[static_cast<std::size_t>(i)] = Rat(2 * reserves[static_cast<std::size_t>(types.type_of(i))]);
  auto groups = std::make_shared<const std::vector<Subset>>(types.groups);
  auto shift = std::make_shared<const std::vector<Rat>>(std::move(bonus));
  auto shifted = [groups, shift](Subset X) {
    Rat out = 0;
    for (const Subset& g : *groups) {
      int k = (X & g).size();
      out -= Rat(k) * k;
    }
    for (int i : X.members()) out += (*shift)[static_cast<std::size_t>(i)];
    return out;
  };

  Rat target_squares = 0;
  for (int r : reserves) target_squares += Rat(r) * r;
  for (Subset X : subsets_of(Subset::full(std::min(gs.size(), 12)))) {
    Rat direct = 0;
    for (std::size_t t = 0; t < T; ++t) {
      Rat gap = Rat(reserves[t] - (X & types.groups[t]).size());
      direct -= gap * gap;
    }
    if (shifted(X) != direct + target_squares)
      fail(Errc::oracle_inconsistent, "edcr: shifted form disagrees with the direct one at " +
                                          gs.format(X));
  }

  auto scores = std::make_shared<const std::vector<Rat>>(std::move(v));
  return make_utility(gs, 3, [q, shifted, scores](Subset X) {
    if (X.size() > q) return LexValue::neg_inf();
    return LexValue::tuple({Rat(X.size()), shifted(X), detail::score_sum(*scores, X)});
  });
}

// Capacity-gated lex pair: reserve seats covered first (a maximum matching of
// the chosen students into per-pool seat copies), then score. Pools may
// overlap and need not cover everyone.
inline UtilityFunction overlapping_reserves(const GroundSet& gs, int q, std::vector<Subset> pools,
                                            std::vector<int> reserves, std::vector<Rat> v) {
  detail::check_scores(gs, v, "overlapping_reserves");
  if (q < 0) fail(Errc::bad_argument, "overlapping_reserves: negative capacity");
  if (pools.size() != reserves.size())
    fail(Errc::bad_argument, "overlapping_reserves: need one reserve count per pool");
  int reserve_total = 0;
  for (std::size_t t = 0; t < pools.size(); ++t) {
    if (!pools[t].subset_of(gs.full()))
      fail(Errc::bad_argument, "overlapping_reserves: pool outside ground set");
    if (reserves[t] < 0) fail(Errc::bad_argument, "overlapping_reserves: negative reserve count");
    reserve_total += reserves[t];
  }
  if (reserve_total > q)
    fail(Errc::bad_argument, "overlapping_reserves: reserves add up past the capacity");
  auto seats = std::make_shared<std::vector<Subset>>();
  for (std::size_t t = 0; t < pools.size(); ++t)
    for (int k = 0; k < reserves[t]; ++k) seats->push_back(pools[t]);
  auto scores = std::make_shared<const std::vector<Rat>>(std::move(v));
  return make_utility(gs, 2, [q, seats, scores](Subset X) {
    if (X.size() > q) return LexValue::neg_inf();
    return LexValue::tuple(
        {Rat(detail::seat_matching(X, *seats)), detail::score_sum(*scores, X)});
  });
}

// Score sum on independent sets, -infinity off the matroid.
inline UtilityFunction weighted_matroid_utility(const Matroid& m, std::vector<Rat> v) {
  detail::check_scores(m.ground, v, "weighted_matroid_utility");
  if (!m.independent(Subset::empty()))
    fail(Errc::bad_argument, "weighted_matroid_utility: empty set must be independent");
  auto indep = m.independent;
  auto scores = std::make_shared<const std::vector<Rat>>(std::move(v));
  return make_utility(m.ground, 1, [indep, scores](Subset X) {
    if (!indep(X)) return LexValue::neg_inf();
    return LexValue::scalar(detail::score_sum(*scores, X));
  });
}

struct LaminarPiece {
  Subset members;
  std::vector<Rat> values;
};

// Sum of concave piece functions of |X intersect L| over a laminar family. Each value
// table starts at 0; counts past its end evaluate to -infinity, which is how
// capacity gates are expressed.
inline UtilityFunction laminar_concave_utility(const GroundSet& gs,
                                               std::vector<LaminarPiece> pieces) {
  Subset full = gs.full();
  for (std::size_t a = 0; a < pieces.size(); ++a) {
    const LaminarPiece& p = pieces[a];
    if (p.members.is_empty()) fail(Errc::bad_argument, "laminar_concave: empty piece");
    if (!p.members.subset_of(full))
      fail(Errc::bad_argument, "laminar_concave: piece outside ground set");
    if (p.values.empty() || p.values[0] != 0)
      fail(Errc::bad_argument, "laminar_concave: piece values must start at 0");
    if (p.values.size() > std::size_t(p.members.size()) + 1)
      fail(Errc::bad_argument, "laminar_concave: value table longer than the piece");
    for (std::size_t k = 2; k < p.values.size(); ++k)
      if (p.values[k] - p.values[k - 1] > p.values[k - 1] - p.values[k - 2])
        fail(Errc::bad_argument, "laminar_concave: piece values are not concave");
    for (std::size_t b = 0; b < a; ++b) {
      Subset meet = p.members & pieces[b].members;
      if (!meet.is_empty() && meet != p.members && meet != pieces[b].members)
        fail(Errc::bad_argument, "laminar_concave: " + gs.format(p.members) + " and " +
                                     gs.format(pieces[b].members) + " cross");
    }
  }
  auto shared = std::make_shared<const std::vector<LaminarPiece>>(std::move(pieces));
  return make_utility(gs, 1, [shared](Subset X) {
    Rat sum = 0;
    for (const LaminarPiece& p : *shared) {
      int k = (X & p.members).size();
      if (k >= static_cast<int>(p.values.size())) return LexValue::neg_inf();
      sum += p.values[static_cast<std::size_t>(k)];
    }
    return LexValue::scalar(sum);
  });
}

inline constexpr int kCommitteeProfileCap = 4096;

// Every committee profile assigns one referee per seat; the profile's choice
// hands seats out in order, each referee taking their favorite remaining
// applicant. The correspondence collects the choices of all given profiles
// (or of every possible profile when none are given) as an explicit table.
inline ChoiceCorrespondence committee(
    const GroundSet& gs, int q, const std::vector<std::vector<int>>& referee_orders,
    const std::optional<std::vector<std::vector<int>>>& profiles = std::nullopt,
    int cap = kDefaultDpCap) {
  int n = gs.size();
  if (n > cap) fail(Errc::cap_exceeded, "committee: ground set exceeds cap");
  if (q < 0) fail(Errc::bad_argument, "committee: negative capacity");
  int H = static_cast<int>(referee_orders.size());
  if (H == 0) fail(Errc::bad_argument, "committee: at least one referee required");
  for (const auto& order : referee_orders) {
    if (static_cast<int>(order.size()) != n)
      fail(Errc::bad_argument, "committee: a referee order must rank every applicant");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int i : order) {
      if (i < 0 || i >= n || seen[static_cast<std::size_t>(i)])
        fail(Errc::bad_argument, "committee: a referee order is not a permutation");
      seen[static_cast<std::size_t>(i)] = true;
    }
  }

  std::vector<std::vector<int>> pis;
  if (profiles) {
    pis = *profiles;
    if (pis.empty()) fail(Errc::empty_family, "committee: no profiles");
    for (const auto& pi : pis) {
      if (static_cast<int>(pi.size()) != q)
        fail(Errc::bad_argument, "committee: a profile must assign one referee per seat");
      for (int h : pi)
        if (h < 0 || h >= H) fail(Errc::bad_argument, "committee: profile names a missing referee");
    }
  } else {
    long long count = 1;
    for (int seat = 0; seat < q; ++seat) {
      count *= H;
      if (count > kCommitteeProfileCap)
        fail(Errc::cap_exceeded, "committee: " + std::to_string(H) + "^" + std::to_string(q) +
                                     " profiles exceed the cap");
    }
    std::vector<int> pi(static_cast<std::size_t>(q), 0);
    while (true) {
      pis.push_back(pi);
      int seat = q - 1;
      while (seat >= 0 && pi[static_cast<std::size_t>(seat)] == H - 1)
        pi[static_cast<std::size_t>(seat--)] = 0;
      if (seat < 0) break;
      ++pi[static_cast<std::size_t>(seat)];
    }
  }

  std::vector<std::vector<Subset>> table(std::size_t(1) << n);
  for (std::uint32_t x = 0; x < table.size(); ++x) {
    for (const auto& pi : pis) {
      Subset remaining(x);
      Subset chosen;
      for (int h : pi) {
        if (remaining.is_empty()) break;
        for (int i : referee_orders[static_cast<std::size_t>(h)]) {
          if (remaining.contains(i)) {
            chosen = chosen.plus(i);
            remaining = remaining.minus(i);
            break;
          }
        }
      }
      table[x].push_back(chosen);
    }
  }
  return ChoiceCorrespondence::from_table(gs, std::move(table));
}

// A named instance from the bundled registry: either a single correspondence
// or a whole market, plus any reference matchings the instance carries.
struct PaperInstance {
  std::string id;
  std::optional<ChoiceCorrespondence> corr;
  std::optional<Market> market;
  std::map<std::string, Matching> matchings;
  std::string note;
};

inline std::vector<std::string> paper_instance_ids() {
  return {"table1.C0", "table1.C1", "table1.C2", "table1.C3", "table1.C4",
          "ex4.1",     "ex4.2",     "ex4.3",     "appD",      "admission"};
}

namespace detail {

inline ChoiceCorrespondence explicit_rows(
    const GroundSet& gs,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& rows) {
  std::vector<std::vector<Subset>> table(std::size_t(1) << gs.size());
  table[0] = {Subset::empty()};
  for (const auto& [menu, choices] : rows) {
    Subset X = gs.parse_key(menu);
    table[X.bits()].clear();
    for (const auto& c : choices) table[X.bits()].push_back(gs.parse_key(c));
  }
  return ChoiceCorrespondence::from_table(gs, std::move(table));
}

inline Market make_market(GroundSet students, std::vector<School> schools,
                          const std::vector<std::vector<std::string>>& pref_names) {
  Market m;
  m.students = std::move(students);
  m.schools = std::move(schools);
  m.prefs.resize(pref_names.size());
  for (std::size_t i = 0; i < pref_names.size(); ++i)
    for (const std::string& name : pref_names[i]) m.prefs[i].push_back(m.school_index(name));
  m.validate();
  return m;
}

inline Matching matching_of(const Market& m,
                            const std::vector<std::pair<std::string, std::string>>& pairs) {
  Matching mu = Matching::unmatched(m);
  for (const auto& [student, school] : pairs)
    mu.assign[static_cast<std::size_t>(m.students.index(student))] = m.school_index(school);
  return mu;
}

}  // namespace detail

inline PaperInstance paper_instance(const std::string& id) {
  if (id.rfind("table1.", 0) == 0) {
    GroundSet abc({"a", "b", "c"});
    PaperInstance out;
    out.id = id;
    if (id == "table1.C0") {
      out.corr = detail::explicit_rows(abc, {{"a", {"a"}},
                                             {"b", {"b"}},
                                             {"c", {"c"}},
                                             {"a,b", {"a", "b"}},
                                             {"a,c", {"a", "c"}},
                                             {"b,c", {"b", "c"}},
                                             {"a,b,c", {"a", "b", "c"}}});
    } else if (id == "table1.C1") {
      out.corr = detail::explicit_rows(abc, {{"a", {"a"}},
                                             {"b", {"b"}},
                                             {"c", {"c"}},
                                             {"a,b", {"a,b"}},
                                             {"a,c", {"a,c"}},
                                             {"b,c", {"b", "c"}},
                                             {"a,b,c", {"a,b", "a,c"}}});
    } else if (id == "table1.C2") {
      out.corr = detail::explicit_rows(abc, {{"a", {"a"}},
                                             {"b", {"b"}},
                                             {"c", {"c"}},
                                             {"a,b", {"a"}},
                                             {"a,c", {"a"}},
                                             {"b,c", {"b,c"}},
                                             {"a,b,c", {"a", "b,c"}}});
    } else if (id == "table1.C3") {
      out.corr = detail::explicit_rows(abc, {{"a", {"a"}},
                                             {"b", {"b"}},
                                             {"c", {"c"}},
                                             {"a,b", {"b"}},
                                             {"a,c", {"a"}},
                                             {"b,c", {"c"}},
                                             {"a,b,c", {"a", "b", "c"}}});
    } else if (id == "table1.C4") {
      out.corr = detail::explicit_rows(abc, {{"a", {"", "a"}},
                                             {"b", {"", "b"}},
                                             {"c", {"", "c"}},
                                             {"a,b", {"", "a,b"}},
                                             {"a,c", {"", "a,c"}},
                                             {"b,c", {"", "b,c"}},
                                             {"a,b,c", {"", "a,b,c"}}});
    } else {
      fail(Errc::unknown_id, "unknown instance id: " + id);
    }
    return out;
  }

  if (id == "ex4.1" || id == "ex4.2") {
    GroundSet st({"i1", "i2", "i3", "i4"});
    std::vector<Rat> unit(4, Rat(1));
    Subset i14 = st.parse({"i1", "i4"});
    Subset i23 = st.parse({"i2", "i3"});
    Subset i12 = st.parse({"i1", "i2"});
    Subset i34 = st.parse({"i3", "i4"});
    UtilityFunction s1u;
    if (id == "ex4.1") {
      s1u = weighted_matroid_utility(laminar_matroid(st, {{i14, 1}, {i23, 1}}), unit);
    } else {
      Subset i24 = st.parse({"i2", "i4"});
      s1u = make_utility(st, 1, [i14, i23, i24](Subset X) {
        if ((X & i14).size() > 1 || (X & i23).size() > 1 || (X & i24).size() > 1)
          return LexValue::neg_inf();
        return LexValue::scalar(Rat(X.size()));
      });
    }
    UtilityFunction s2u = weighted_matroid_utility(laminar_matroid(st, {{i12, 1}, {i34, 0}}), unit);
    UtilityFunction s3u = weighted_matroid_utility(laminar_matroid(st, {{i12, 0}, {i34, 1}}), unit);
    Market m = detail::make_market(st,
                                   {{"s1", ChoiceCorrespondence::from_utility(st, s1u)},
                                    {"s2", ChoiceCorrespondence::from_utility(st, s2u)},
                                    {"s3", ChoiceCorrespondence::from_utility(st, s3u)}},
                                   {{"s2", "s1"}, {"s1", "s2"}, {"s3", "s1"}, {"s1", "s3"}});
    PaperInstance out;
    out.id = id;
    out.matchings.emplace(
        "mu", detail::matching_of(m, {{"i1", "s1"}, {"i2", "s2"}, {"i3", "s1"}, {"i4", "s3"}}));
    if (id == "ex4.1")
      out.matchings.emplace("muprime", detail::matching_of(m, {{"i1", "s2"},
                                                               {"i2", "s1"},
                                                               {"i3", "s3"},
                                                               {"i4", "s1"}}));
    out.market = std::move(m);
    return out;
  }

  if (id == "ex4.3") {
    GroundSet st({"i1", "i2", "i3", "i4", "i5"});
    UtilityFunction s1u = laminar_concave_utility(
        st, {{st.parse({"i5"}), {Rat(0), Rat(1)}},
             {st.parse({"i1", "i3"}), {Rat(0), Rat(2), Rat(29, 10)}},
             {st.parse({"i2", "i4"}), {Rat(0), Rat(3), Rat(6)}},
             {st.full(), {Rat(0), Rat(0), Rat(0)}}});
    UtilityFunction s2u = laminar_concave_utility(st, {{st.full(), {Rat(0), Rat(1), Rat(2)}}});
    Market m = detail::make_market(
        st,
        {{"s1", ChoiceCorrespondence::from_utility(st, s1u)},
         {"s2", ChoiceCorrespondence::from_utility(st, s2u)}},
        {{"s1", "s2"}, {"s2", "s1"}, {"s1", "s2"}, {"s2", "s1"}, {"s1", "s2"}});
    PaperInstance out;
    out.id = id;
    out.matchings.emplace(
        "mu", detail::matching_of(m, {{"i1", "s2"}, {"i2", "s1"}, {"i3", "s2"}, {"i4", "s1"}}));
    out.matchings.emplace(
        "nu", detail::matching_of(m, {{"i1", "s1"}, {"i2", "s2"}, {"i3", "s1"}, {"i4", "s2"}}));
    out.matchings.emplace("nuprime", detail::matching_of(m, {{"i1", "s1"},
                                                             {"i2", "s2"},
                                                             {"i3", "s2"},
                                                             {"i4", "s1"}}));
    out.market = std::move(m);
    out.note = "the middle piece's tied second value is irrational at the source; it is stored "
               "as 29/10, which keeps both comparisons this instance makes (9/10 < 2 for strict "
               "concavity and 29/10 < 3)";
    return out;
  }

  if (id == "appD") {
    GroundSet st({"i1", "i2", "i3", "i4", "i5"});
    std::vector<std::vector<int>> orders = {
        {0, 1, 2, 4, 3},
        {0, 2, 1, 4, 3},
        {1, 3, 0, 4, 2},
    };
    std::vector<std::vector<int>> same_referee_twice = {{0, 0}, {1, 1}, {2, 2}};
    ChoiceCorrespondence s1c = committee(st, 2, orders, same_referee_twice);
    auto unit_school = [&st]() {
      return ChoiceCorrespondence::from_utility(
          st, laminar_concave_utility(st, {{st.full(), {Rat(0), Rat(1)}}}));
    };
    Market m = detail::make_market(
        st,
        {{"s1", s1c}, {"s2", unit_school()}, {"s3", unit_school()}, {"s4", unit_school()}},
        {{"s2", "s1"}, {"s3", "s1"}, {"s1", "s2"}, {"s1", "s3"}, {"s1", "s4"}});
    PaperInstance out;
    out.id = id;
    out.matchings.emplace("mu", detail::matching_of(m, {{"i1", "s1"},
                                                        {"i2", "s1"},
                                                        {"i3", "s2"},
                                                        {"i4", "s3"},
                                                        {"i5", "s4"}}));
    out.market = std::move(m);
    return out;
  }

  if (id == "admission") {
    GroundSet st({"i1", "i2", "i3", "i4"});
    std::vector<std::vector<int>> orders = {
        {0, 1, 2, 3},
        {0, 2, 1, 3},
        {1, 3, 0, 2},
    };
    PaperInstance out;
    out.id = id;
    out.corr = committee(st, 2, orders);
    return out;
  }

  fail(Errc::unknown_id, "unknown instance id: " + id);
}

}  // namespace pimatch
