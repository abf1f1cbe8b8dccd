#include <catch2/catch_amalgamated.hpp>

#include "generators.hpp"
#include "pimatch/applications.hpp"
#include "pimatch/axioms.hpp"
#include "pimatch/tiebreak.hpp"

using namespace pimatch;

TEST_CASE("local swap membership agrees with the global argmax on path-independent tables") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 15; ++trial) {
    GroundSet gs = gen::elements(4);
    auto corr = gen::pi_table(gs, rng);
    UMWeight w = random_um_weight(gs, rng);
    for (Subset x : subsets_of(gs.full())) {
      Subset best = choose_bruteforce(corr, w, x);
      for (Subset y : subsets_of(x))
        CHECK(cw_membership(corr, w, x, y) == (y == best));
    }
  }
}

TEST_CASE("equality-query choice matches enumerate+argmax within its call budget") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 15; ++trial) {
    int n = 4 + (trial % 2);
    GroundSet gs = gen::elements(n);
    auto corr = gen::pi_table(gs, rng);
    for (int wtrial = 0; wtrial < 10; ++wtrial) {
      UMWeight w = random_um_weight(gs, rng);
      Subset x = wtrial == 0 ? gs.full() : gen::random_subset(gs, rng);
      auto oracle = [&](Subset S, Subset T) { return cw_membership(corr, w, S, T); };
      TiebreakStats stats;
      Subset got = algorithm1_choice(oracle, x, &stats);
      CHECK(got == choose_bruteforce(corr, w, x));
      std::size_t budget = 4 * std::size_t(x.size()) * x.size() * x.size() + 4;
      CHECK(stats.oracle_calls <= budget);
    }
  }
}

TEST_CASE("incremental choice for monotone tables matches enumerate+argmax within its eval budget") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 15; ++trial) {
    int n = 4 + (trial % 2);
    GroundSet gs = gen::elements(n);
    auto corr = gen::pi_table(gs, rng);
    for (int wtrial = 0; wtrial < 10; ++wtrial) {
      UMWeight w = random_um_weight(gs, rng);
      Subset x = wtrial == 0 ? gs.full() : gen::random_subset(gs, rng);
      TiebrokenResult r = choose_pi_lad(corr, w, x);
      CHECK(r.chosen == choose_bruteforce(corr, w, x));
      CHECK(r.stats.candidate_evals <= 2 * std::size_t(x.size()) * x.size() + 2);
    }
  }
}

TEST_CASE("the oracle fast path is gated on the path-independence assertion") {
  std::mt19937_64 rng(54);
  GroundSet gs = gen::elements(4);
  auto corr = gen::pi_table(gs, rng);
  UMWeight w = random_um_weight(gs, rng);
  Subset x = gs.full();

  TiebrokenResult slow = choose_tiebroken(corr, w, x);
  CHECK(slow.stats.oracle_calls == 0);
  TiebrokenResult fast = choose_tiebroken(corr.with_pi_asserted(true), w, x);
  CHECK(fast.stats.oracle_calls > 0);
  CHECK(fast.chosen == slow.chosen);
  CHECK(slow.chosen == choose_bruteforce(corr, w, x));

  UMWeight raw = w;
  raw.verified_um = false;
  CHECK_THROWS_AS(choose_tiebroken(corr, raw, x), Error);
  try {
    choose_tiebroken(corr, w, x, 2);
    FAIL("expected a cap rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_pi);
  }
}

TEST_CASE("violated preconditions surface as divergence or a rejected step") {
  GroundSet abc({"a", "b", "c"});

  SECTION("the all-or-nothing table drifts away from the argmax") {
    auto c4 = paper_instance("table1.C4").corr.value();
    UMWeight w = verify_um(UMWeight{{Rat(1, 4), Rat(-1, 2), Rat(1, 8)}, false});
    Subset full = abc.full();
    CHECK(choose_bruteforce(c4, w, full) == Subset::empty());
    TiebrokenResult r = choose_pi_lad(c4, w, full);
    CHECK(r.chosen == full);
  }

  SECTION("a step with no chosen candidate is rejected") {
    std::vector<std::vector<Subset>> table(4);
    table[0] = {Subset::empty()};
    table[1] = {abc.parse_key("a")};
    table[2] = {abc.parse_key("b")};
    table[3] = {Subset::empty()};
    GroundSet ab({"a", "b"});
    auto corr = ChoiceCorrespondence::from_table(ab, table);
    UMWeight w = canonical_weight(ab, {0, 1}, {false, false});
    try {
      choose_pi_lad(corr, w, ab.full());
      FAIL("expected a rejection");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::no_valid_candidate);
    }
  }
}

TEST_CASE("the discard loop rejects an inconsistent oracle") {
  GroundSet gs = gen::elements(3);
  auto oracle = [](Subset, Subset) { return false; };
  CHECK_THROWS_AS(algorithm1_choice(oracle, gs.full()), Error);
}
