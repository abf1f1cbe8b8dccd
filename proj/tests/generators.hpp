#pragma once

#include <random>

#include "pimatch/applications.hpp"
#include "pimatch/matching.hpp"

// Seeded builders for the randomized suites. Everything here is a function of
// the passed-in engine alone, so a fixed seed replays the exact instance.
namespace gen {

using pimatch::ChoiceCorrespondence;
using pimatch::GroundSet;
using pimatch::Market;
using pimatch::Rat;
using pimatch::Subset;
using pimatch::UtilityFunction;

inline GroundSet elements(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("e" + std::to_string(i));
  return GroundSet(std::move(names));
}

inline GroundSet students(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("i" + std::to_string(i));
  return GroundSet(std::move(names));
}

inline int pick(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Distinct positive integer scores so weight ties never blur the families.
inline std::vector<Rat> scores(const GroundSet& gs, std::mt19937_64& rng) {
  std::vector<int> base;
  for (int k = 1; k <= 4 * gs.size(); ++k) base.push_back(k);
  std::shuffle(base.begin(), base.end(), rng);
  std::vector<Rat> v;
  for (int i = 0; i < gs.size(); ++i) v.push_back(Rat(base[std::size_t(i)]));
  return v;
}

inline pimatch::TypeStructure random_partition(const GroundSet& gs, std::mt19937_64& rng) {
  int t = pick(rng, 1, std::min(3, gs.size()));
  std::vector<Subset> groups(std::size_t(t));
  for (int i = 0; i < gs.size(); ++i) {
    int g = pick(rng, 0, t - 1);
    groups[std::size_t(g)] = groups[std::size_t(g)].plus(i);
  }
  std::vector<Subset> nonempty;
  for (Subset g : groups)
    if (!g.is_empty()) nonempty.push_back(g);
  return pimatch::TypeStructure::partition(gs, std::move(nonempty));
}

inline Subset random_subset(const GroundSet& gs, std::mt19937_64& rng) {
  return Subset(static_cast<std::uint32_t>(rng()) & gs.full().bits());
}

// One utility from the application families, family index 0..7.
inline UtilityFunction family_utility(const GroundSet& gs, int which, std::mt19937_64& rng) {
  int n = gs.size();
  int q = pick(rng, 1, n);
  switch (which % 8) {
    case 0:
      return pimatch::responsive(gs, q, scores(gs, rng));
    case 1: {
      auto types = random_partition(gs, rng);
      std::size_t t = types.groups.size();
      std::vector<int> floors(t, 0), ceilings(t);
      int room = q;
      for (std::size_t k = 0; k < t; ++k) {
        floors[k] = pick(rng, 0, std::min(room, types.groups[k].size()));
        room -= floors[k];
        ceilings[k] = pick(rng, floors[k], types.groups[k].size());
      }
      return pimatch::controlled_choice(gs, q, types, floors, ceilings, scores(gs, rng));
    }
    case 2: {
      auto types = random_partition(gs, rng);
      std::size_t t = types.groups.size();
      std::vector<int> reserves(t, 0);
      int room = q;
      for (std::size_t k = 0; k < t; ++k) {
        reserves[k] = pick(rng, 0, std::min(room, types.groups[k].size()));
        room -= reserves[k];
      }
      return pimatch::edcr(gs, q, types, reserves, scores(gs, rng));
    }
    case 3: {
      int pools_n = pick(rng, 1, 2);
      std::vector<Subset> pools;
      std::vector<int> reserves;
      int room = q;
      for (int k = 0; k < pools_n; ++k) {
        Subset p = random_subset(gs, rng);
        if (p.is_empty()) p = Subset::single(pick(rng, 0, n - 1));
        pools.push_back(p);
        int r = pick(rng, 0, std::min(room, p.size()));
        reserves.push_back(r);
        room -= r;
      }
      return pimatch::overlapping_reserves(gs, q, pools, reserves, scores(gs, rng));
    }
    case 4:
      return pimatch::weighted_matroid_utility(pimatch::uniform_matroid(gs, q), scores(gs, rng));
    case 5: {
      std::vector<std::pair<Subset, int>> caps;
      caps.push_back({gs.full(), q});
      Subset block = random_subset(gs, rng);
      if (!block.is_empty() && block != gs.full())
        caps.push_back({block, pick(rng, 1, block.size())});
      return pimatch::weighted_matroid_utility(pimatch::laminar_matroid(gs, caps),
                                               scores(gs, rng));
    }
    case 6: {
      std::vector<Subset> seats;
      for (int k = 0; k < q; ++k) {
        Subset s = random_subset(gs, rng);
        if (s.is_empty()) s = Subset::single(pick(rng, 0, n - 1));
        seats.push_back(s);
      }
      return pimatch::weighted_matroid_utility(pimatch::transversal_matroid(gs, seats),
                                               scores(gs, rng));
    }
    default: {
      std::vector<pimatch::LaminarPiece> pieces;
      auto concave_values = [&](int len) {
        std::vector<Rat> v{Rat(0)};
        int step = pick(rng, 1, 4);
        for (int k = 1; k <= len; ++k) {
          v.push_back(v.back() + step);
          if (step > 0) step -= pick(rng, 0, 1);
        }
        return v;
      };
      pieces.push_back({gs.full(), concave_values(pick(rng, 1, n))});
      Subset block = random_subset(gs, rng);
      if (!block.is_empty() && block != gs.full())
        pieces.push_back({block, concave_values(pick(rng, 1, block.size()))});
      return pimatch::laminar_concave_utility(gs, std::move(pieces));
    }
  }
}

inline ChoiceCorrespondence family_corr(const GroundSet& gs, int which, std::mt19937_64& rng) {
  return ChoiceCorrespondence::from_utility(gs, family_utility(gs, which, rng));
}

// Explicit-table copy of a fresh family instance; path independent by the
// same construction, but the backing no longer knows it.
inline ChoiceCorrespondence pi_table(const GroundSet& gs, std::mt19937_64& rng) {
  int which = pick(rng, 0, 7);
  auto corr = family_corr(gs, which, rng);
  return ChoiceCorrespondence::from_table(gs, pimatch::materialize(corr));
}

// Random many-to-one market with application-family school choices and
// random (possibly truncated) student preference lists.
inline Market random_market(int max_students, int max_schools, std::mt19937_64& rng) {
  int n = pick(rng, 2, max_students);
  int k = pick(rng, 1, max_schools);
  Market m;
  m.students = students(n);
  for (int s = 0; s < k; ++s) {
    int which = pick(rng, 0, 7);
    m.schools.push_back({"s" + std::to_string(s + 1), family_corr(m.students, which, rng)});
  }
  m.prefs.resize(std::size_t(n));
  for (int i = 0; i < n; ++i) {
    std::vector<int> order;
    for (int s = 0; s < k; ++s) order.push_back(s);
    std::shuffle(order.begin(), order.end(), rng);
    int len = pick(rng, 0, k);
    order.resize(std::size_t(len));
    m.prefs[std::size_t(i)] = order;
  }
  m.validate();
  return m;
}

}  // namespace gen
