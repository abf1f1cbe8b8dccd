#include <catch2/catch_amalgamated.hpp>

#include "generators.hpp"
#include "pimatch/core.hpp"

using namespace pimatch;

TEST_CASE("subset algebra") {
  Subset x = Subset::single(0).plus(2);
  CHECK(x.bits() == 0b101u);
  CHECK(x.size() == 2);
  CHECK(x.contains(0));
  CHECK(!x.contains(1));
  CHECK(x.plus(-1) == x);
  CHECK(x.minus(-1) == x);
  CHECK(x.minus(2) == Subset::single(0));
  CHECK((x | Subset::single(1)) == Subset::full(3));
  CHECK((x & Subset::single(2)) == Subset::single(2));
  CHECK((Subset::full(3) - x) == Subset::single(1));
  CHECK(Subset::empty().is_empty());
  CHECK(Subset::single(0).subset_of(x));
  CHECK(!Subset::single(1).subset_of(x));
  CHECK(x.members() == std::vector<int>{0, 2});
}

TEST_CASE("subsets_of covers the power set in ascending order") {
  Subset x(0b1011u);
  auto subs = subsets_of(x);
  REQUIRE(subs.size() == 8);
  CHECK(std::is_sorted(subs.begin(), subs.end()));
  for (Subset s : subs) CHECK(s.subset_of(x));
  CHECK(subs.front() == Subset::empty());
  CHECK(subs.back() == x);
}

TEST_CASE("ground set names and keys") {
  GroundSet gs({"a", "b", "c"});
  CHECK(gs.size() == 3);
  CHECK(gs.index("b") == 1);
  CHECK(gs.has("c"));
  CHECK(!gs.has("d"));
  Subset x = gs.parse_key("a,c");
  CHECK(gs.key(x) == "a,c");
  CHECK(gs.parse_key("") == Subset::empty());
  CHECK(gs.key(Subset::empty()) == "");
  CHECK(gs.format(x) == "{a,c}");
  CHECK(gs.parse({"c", "a"}) == x);

  CHECK_THROWS_AS(gs.index("zzz"), Error);
  CHECK_THROWS_AS(GroundSet({"a", "a"}), Error);
  CHECK_THROWS_AS(GroundSet({"a,b"}), Error);
  CHECK_THROWS_AS(GroundSet({""}), Error);
  try {
    GroundSet({"x", "x"});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::bad_argument);
  }
}

TEST_CASE("lex values order lexicographically with a bottom element") {
  LexValue bot = LexValue::neg_inf();
  LexValue zero = LexValue::zero(2);
  LexValue small = LexValue::tuple({Rat(1), Rat(-5)});
  LexValue big = LexValue::tuple({Rat(1), Rat(0)});
  CHECK(bot < zero);
  CHECK(!(zero < bot));
  CHECK(zero < small);
  CHECK(small < big);
  CHECK(bot == LexValue::neg_inf());
  CHECK(small != big);
  CHECK((small + big) == LexValue::tuple({Rat(2), Rat(-5)}));
  CHECK((bot + big).is_neg_inf());
  CHECK(LexValue::scalar(Rat(1, 2)).str() == "1/2");
  CHECK(big.str() == "(1,0)");
  CHECK(bot.str() == "-inf");
  CHECK_THROWS_AS(LexValue::zero(2) < LexValue::zero(3), Error);
}

TEST_CASE("unique-sums detection") {
  CHECK(is_um(UMWeight{{Rat(1), Rat(2), Rat(4)}, false}));
  CHECK(!is_um(UMWeight{{Rat(1), Rat(2), Rat(3)}, false}));
  CHECK(!is_um(UMWeight{{Rat(0)}, false}));
  CHECK(is_um(UMWeight{{Rat(-1), Rat(2), Rat(-4)}, false}));

  UMWeight ok = verify_um(UMWeight{{Rat(1), Rat(2), Rat(4)}, false});
  CHECK(ok.verified_um);
  try {
    verify_um(UMWeight{{Rat(1), Rat(1)}, false});
    FAIL("expected a rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_um);
  }
}

TEST_CASE("canonical weights rank by dyadic magnitude") {
  GroundSet gs({"a", "b", "c"});
  UMWeight w = canonical_weight(gs, {1, 2, 0}, {false, true, false});
  CHECK(w.verified_um);
  CHECK(w.w[1] == Rat(1, 2));
  CHECK(w.w[2] == Rat(-1, 4));
  CHECK(w.w[0] == Rat(1, 8));
  CHECK_THROWS_AS(canonical_weight(gs, {0, 0, 1}, {false, false, false}), Error);
  CHECK_THROWS_AS(canonical_weight(gs, {0, 1}, {false, false}), Error);

  SECTION("every signed permutation is UM at small n") {
    for (int n = 1; n <= 4; ++n) {
      GroundSet g = gen::elements(n);
      std::vector<int> perm;
      for (int i = 0; i < n; ++i) perm.push_back(i);
      do {
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
          std::vector<bool> neg;
          for (int j = 0; j < n; ++j) neg.push_back((mask >> j) & 1u);
          CHECK(is_um(canonical_weight(g, perm, neg)));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
}

TEST_CASE("selecting weight singles out its target") {
  GroundSet gs = gen::elements(4);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Subset y = gen::random_subset(gs, rng);
    UMWeight w = selecting_weight(gs, y);
    std::vector<Subset> family = subsets_of(gs.full());
    CHECK(argmax_weight(family, w) == y);
  }
}

TEST_CASE("argmax over a family rejects ties and unverified weights") {
  GroundSet gs({"a", "b"});
  std::vector<Subset> family{Subset::single(0), Subset::single(1)};
  UMWeight raw{{Rat(1), Rat(1)}, false};
  CHECK_THROWS_AS(argmax_weight(family, raw), Error);

  UMWeight w = verify_um(UMWeight{{Rat(1), Rat(2)}, false});
  CHECK(argmax_weight(family, w) == Subset::single(1));
  CHECK_THROWS_AS(argmax_weight({}, w), Error);

  UMWeight tied{{Rat(1), Rat(1)}, true};
  try {
    argmax_weight(family, tied);
    FAIL("expected a tie rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_um);
  }
}

TEST_CASE("rational parsing round-trips") {
  CHECK(rat_str(rat_parse("-3/8")) == "-3/8");
  CHECK(rat_parse("4/8") == Rat(1, 2));
  CHECK_THROWS_AS(rat_parse("one half"), std::invalid_argument);
}
