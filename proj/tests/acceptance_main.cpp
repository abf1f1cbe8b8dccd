#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "pimatch/axioms.hpp"
#include "pimatch/io.hpp"
#include "pimatch/rationalize.hpp"
#include "pimatch/tiebreak.hpp"

using namespace pimatch;

namespace {

// Reference exchange rows for the appD committee, restricted to proper
// submenus of size over two. Fields are X|Y|A|B|i|j with students written as
// digits 1..5.
const char* kReferenceRows = R"(1234|123|24|12|4|1
1234|124|13|12|3|2
1234|134|12|13|2|3
1234|134|12|14|2|4
1234|134|24|14|2|1
1234|234|12|23|1|3
1234|234|12|24|1|4
1234|234|13|23|1|2
1235|125|13|12|3|2
1235|135|12|13|2|3
1235|135|12|15|2|5
1235|235|12|23|1|3
1235|235|12|25|1|5
1235|235|13|23|1|2
1245|125|24|12|4|1
1245|145|12|14|2|4
1245|145|12|15|2|5
1245|145|24|14|2|1
1245|245|12|24|1|4
1245|245|12|25|1|5
1345|135|14|13|4|3
1345|135|14|15|4|5
1345|145|13|14|3|4
1345|145|13|15|3|5
1345|345|13|35|1|5
1345|345|14|45|1|5
2345|235|24|23|4|3
2345|235|24|25|4|5
2345|245|23|24|3|4
2345|245|23|25|3|5
2345|345|23|35|2|5
2345|345|24|45|2|5
12345|123|24|12|4|1
12345|124|13|12|3|2
12345|125|13|12|3|2
12345|125|24|12|4|1
12345|134|12|13|2|3
12345|134|12|14|2|4
12345|134|24|14|2|1
12345|135|12|13|2|3
12345|135|12|15|2|4
12345|135|24|13|2|1
12345|135|24|13|4|1
12345|135|24|15|2|1
12345|135|24|15|4|1
12345|145|12|14|2|3
12345|145|12|15|2|3
12345|145|13|14|3|2
12345|145|13|15|3|2
12345|145|24|14|2|1
12345|234|12|23|1|3
12345|234|12|24|1|4
12345|234|13|23|1|2
12345|235|12|23|1|3
12345|235|12|25|1|4
12345|235|13|23|1|2
12345|235|24|23|4|1
12345|235|24|25|4|1
12345|245|12|24|1|3
12345|245|12|25|1|3
12345|245|13|24|1|2
12345|245|13|24|3|2
12345|245|13|25|1|2
12345|245|13|25|3|2
12345|345|12|35|1|3
12345|345|12|35|2|3
12345|345|12|45|1|4
12345|345|12|45|2|4
12345|345|13|35|1|2
12345|345|24|45|2|1
12345|1235|24|12|4|1
12345|1245|13|12|3|2
12345|1345|12|13|2|3
12345|1345|12|14|2|4
12345|1345|24|14|2|1
12345|2345|12|23|1|3
12345|2345|12|24|1|4
12345|2345|13|23|1|2)";

struct SubCheck {
  bool ok;
  std::string text;
};

struct CriterionResult {
  bool pass = true;
  std::vector<SubCheck> subs;

  void check(bool ok, const std::string& what) {
    subs.push_back({ok, what});
    pass = pass && ok;
  }
  void note(const std::string& what) { subs.push_back({true, what}); }
};

ChoiceCorrespondence registry_corr(const std::string& id) {
  return *paper_instance(id).corr;
}

bool same_tables(const ChoiceCorrespondence& a, const ChoiceCorrespondence& b) {
  return materialize(a, 16) == materialize(b, 16);
}

std::string status_str(const Verdict& v) { return to_string(v.status); }

Rat witness_weight(const Json& witness, const std::string& name) {
  return rat_parse(witness.at("weight").at(name).get<std::string>());
}

// First menu whose chosen family fails the exchange check, if any.
std::optional<std::pair<Subset, Json>> first_exchange_failure(const ChoiceCorrespondence& corr) {
  auto table = materialize(corr, 8);
  for (std::uint32_t x = 0; x < table.size(); ++x)
    if (Verdict v = check_gmatroid(corr.ground(), table[x]); !v.ok())
      return std::make_pair(Subset(x), v.witness);
  return std::nullopt;
}

void criterion1(CriterionResult& r) {
  AxiomCaps caps;
  struct Expect {
    const char* id;
    bool pi;
    bool lad;
  };
  const Expect expected[] = {{"table1.C0", true, true},
                             {"table1.C1", true, true},
                             {"table1.C2", true, false},
                             {"table1.C3", false, true},
                             {"table1.C4", false, false}};
  for (const Expect& e : expected) {
    ChoiceCorrespondence corr = registry_corr(e.id);
    Verdict pi = check_pi_corr(corr, caps);
    Verdict lad = check_lad_corr(corr, caps);
    r.check(pi.ok() == e.pi, std::string(e.id) + ": path independence expected to " +
                                 (e.pi ? "hold" : "fail") + ", measured " + status_str(pi));
    r.check(lad.ok() == e.lad, std::string(e.id) + ": size monotonicity expected to " +
                                   (e.lad ? "hold" : "fail") + ", measured " + status_str(lad));
  }

  {
    ChoiceCorrespondence c2 = registry_corr("table1.C2");
    const GroundSet& gs = c2.ground();
    Verdict lad = check_lad_corr(c2, caps);
    bool classed = false;
    if (!lad.ok() && lad.witness.contains("weight")) {
      Rat wa = witness_weight(lad.witness, "a");
      Rat wb = witness_weight(lad.witness, "b");
      Rat wc = witness_weight(lad.witness, "c");
      classed = wa > wb + wc && wb > 0 && wc > 0;
    }
    r.check(classed, "table1.C2: size-drop witness weight is positive with w(a) > w(b) + w(c)");

    Verdict pi = check_pi_corr(c2, caps);
    if (!pi.ok() && pi.witness.contains("weight")) {
      UMWeight w = weight_from_json(gs, pi.witness.at("weight"));
      Subset X = set_from_json(gs, pi.witness.at("X"));
      Subset Xp = set_from_json(gs, pi.witness.at("Xprime"));
      auto cw = [&](Subset menu) { return argmax_weight(c2.enumerate(menu), w); };
      Subset direct = cw(X | Xp);
      Subset recomposed = cw(cw(X) | Xp);
      r.note("table1.C2 witness replays: X=" + gs.format(X) + " Xprime=" + gs.format(Xp) +
             " direct=" + gs.format(direct) + " recomposed=" + gs.format(recomposed) +
             " under weight " + weight_json(gs, w).dump());
      r.check(direct != recomposed,
              "table1.C2: the recomposition witness replays against the raw table");
    }
  }
  {
    ChoiceCorrespondence c3 = registry_corr("table1.C3");
    Verdict pi = check_pi_corr(c3, caps);
    bool classed = false;
    if (!pi.ok() && pi.witness.contains("weight")) {
      Rat wa = witness_weight(pi.witness, "a");
      Rat wb = witness_weight(pi.witness, "b");
      Rat wc = witness_weight(pi.witness, "c");
      classed = wa > wb && wb > wc && wc > 0;
    }
    r.check(classed, "table1.C3: violating weight is positive with w(a) > w(b) > w(c)");
  }
  {
    ChoiceCorrespondence c4 = registry_corr("table1.C4");
    UMWeight w = verify_um(UMWeight{{Rat(-1), Rat(2), Rat(-4)}, false});
    auto table = materialize(c4, 8);
    auto t = pimatch::detail::cw_table(table, pimatch::detail::weight_sums(w, 3));
    r.check(pimatch::detail::pi_violation(t).has_value() &&
                pimatch::detail::lad_violation(t).has_value(),
            "table1.C4: weight (-1,2,-4) breaks both recomposition and size monotonicity");
  }
}

void criterion2(CriterionResult& r) {
  for (const char* id : {"table1.C0", "table1.C1", "table1.C2"}) {
    auto failure = first_exchange_failure(registry_corr(id));
    std::string text = std::string(id) + ": every menu expected exchange-closed";
    if (failure) {
      const GroundSet& gs = registry_corr(id).ground();
      text += ", measured a failure at menu " + gs.format(failure->first) + " with witness " +
              failure->second.dump();
    }
    r.check(!failure.has_value(), text);
  }

  std::mt19937_64 rng(920);
  int clean = 0;
  const int instances = 50;
  for (int t = 0; t < instances; ++t) {
    GroundSet gs = gen::elements(2 + t % 4);
    auto corr = gen::family_corr(gs, t % 8, rng);
    if (!first_exchange_failure(corr).has_value()) ++clean;
  }
  r.check(clean == instances, "utility-built instances (n <= 5): " + std::to_string(clean) +
                                  "/" + std::to_string(instances) +
                                  " have exchange-closed menus everywhere");

  {
    ChoiceCorrespondence c4 = registry_corr("table1.C4");
    auto failure = first_exchange_failure(c4);
    r.check(failure.has_value() && failure->first == c4.ground().parse_key("a,b"),
            "table1.C4: exchange first fails at menu {a,b}");
  }
  {
    ChoiceCorrespondence adm = registry_corr("admission");
    auto failure = first_exchange_failure(adm);
    bool fields = failure.has_value() && failure->first == adm.ground().full() &&
                  failure->second.at("X") == Json::array({"i1", "i3"}) &&
                  failure->second.at("Y") == Json::array({"i2", "i4"}) &&
                  failure->second.at("e") == "i1";
    r.check(fields,
            "admission: exchange first fails at the full pool with X={i1,i3}, Y={i2,i4}, e=i1");
  }
}

void criterion3(CriterionResult& r) {
  for (const char* id : {"table1.C0", "table1.C1", "table1.C2"}) {
    ChoiceCorrespondence corr = registry_corr(id);
    const GroundSet& gs = corr.ground();
    bool direct_ok = false;
    try {
      UtilityFunction u = rationalize_pi(corr);
      direct_ok = same_tables(ChoiceCorrespondence::from_utility(gs, u), corr);
    } catch (const Error&) {
    }
    r.check(direct_ok, std::string(id) + ": fitted utility reproduces the table exactly");

    SarpResult s = sarp_check(corr);
    bool order_ok = false;
    if (s.rationalizable) {
      UtilityFunction u2 = utility_from_order(*s.order);
      order_ok = same_tables(ChoiceCorrespondence::from_utility(gs, u2), corr);
    }
    r.check(order_ok, std::string(id) + ": revealed-order utility reproduces the table exactly");
  }

  std::mt19937_64 rng(921);
  int clean = 0;
  const int instances = 50;
  for (int t = 0; t < instances; ++t) {
    GroundSet gs = gen::elements(2 + t % 4);
    auto corr = gen::pi_table(gs, rng);
    try {
      UtilityFunction u = rationalize_pi(corr);
      SarpResult s = sarp_check(corr);
      if (s.rationalizable &&
          same_tables(ChoiceCorrespondence::from_utility(gs, u), corr) &&
          same_tables(
              ChoiceCorrespondence::from_utility(gs, utility_from_order(*s.order)), corr))
        ++clean;
    } catch (const Error&) {
    }
  }
  r.check(clean == instances, "utility-built instances: " + std::to_string(clean) + "/" +
                                  std::to_string(instances) + " round-trip both ways");

  for (const char* id : {"table1.C4", "admission"}) {
    SarpResult s = sarp_check(registry_corr(id));
    r.check(!s.rationalizable && s.cycle.has_value(),
            std::string(id) + ": revealed preferences cycle");
  }
}

void criterion4(CriterionResult& r) {
  std::mt19937_64 rng(922);
  bool exchange_equal = true, exchange_budget = true;
  bool incremental_equal = true, incremental_budget = true;
  std::size_t max_calls = 0, max_evals = 0;
  int runs = 0;
  for (int t = 0; t < 50; ++t) {
    int n = (t % 2) ? 5 : 4;
    GroundSet gs = gen::elements(n);
    ChoiceCorrespondence corr = gen::pi_table(gs, rng);
    ChoiceCorrespondence asserted = corr.with_pi_asserted(true);
    Subset X = gs.full();
    std::size_t call_budget = 4u * std::size_t(n) * n * n;
    std::size_t eval_budget = 2u * std::size_t(n) * n;
    for (int k = 0; k < 100; ++k) {
      UMWeight w = random_um_weight(gs, rng);
      Subset brute = choose_bruteforce(corr, w, X);
      auto ex = choose_tiebroken(asserted, w, X);
      exchange_equal = exchange_equal && ex.chosen == brute;
      exchange_budget = exchange_budget && ex.stats.oracle_calls <= call_budget;
      max_calls = std::max(max_calls, ex.stats.oracle_calls);
      auto inc = choose_pi_lad(corr, w, X);
      incremental_equal = incremental_equal && inc.chosen == brute;
      incremental_budget = incremental_budget && inc.stats.candidate_evals <= eval_budget;
      max_evals = std::max(max_evals, inc.stats.candidate_evals);
      ++runs;
    }
  }
  r.check(exchange_equal,
          std::to_string(runs) + " runs: query-driven choice equals enumerate+argmax");
  r.check(exchange_budget, "membership calls stay within 4|X|^3 (max observed " +
                               std::to_string(max_calls) + ")");
  r.check(incremental_equal,
          std::to_string(runs) + " runs: incremental choice equals enumerate+argmax");
  r.check(incremental_budget, "candidate evaluations stay within 2|X|^2 (max observed " +
                                  std::to_string(max_evals) + ")");
}

void criterion5(CriterionResult& r) {
  PaperInstance inst = paper_instance("ex4.1");
  const Market& m = *inst.market;
  const Matching& mu = inst.matchings.at("mu");
  const Matching& muprime = inst.matchings.at("muprime");
  r.check(is_stable(m, mu).ok(), "ex4.1: mu is stable");
  r.check(!oracle_constrained_efficient(m, mu), "ex4.1: mu is not efficient in the stable set");
  r.check(is_stable(m, muprime).ok(), "ex4.1: muprime is stable");
  r.check(pareto_dominates(m, muprime, mu), "ex4.1: muprime Pareto dominates mu");
  r.check(constrained_efficient(m, mu) == muprime, "ex4.1: the pipeline lifts mu to muprime");
}

void criterion6(CriterionResult& r) {
  PaperInstance inst = paper_instance("ex4.3");
  const Market& m = *inst.market;
  const Matching& mu = inst.matchings.at("mu");
  auto cyc = find_psic(m, mu);
  r.check(cyc.has_value() && *cyc == std::vector<int>{0, 1},
          "ex4.3: shortest improvement cycle swaps i1 and i2");
  r.check(is_stable(m, apply_psic(m, mu, {0, 1})).ok(),
          "ex4.3: applying the short cycle stays stable");

  Verdict st = is_stable(m, apply_psic(m, mu, {0, 1, 2, 3}));
  bool blocked_via_i5 = false;
  if (!st.ok() && st.witness.value("kind", "") == "blocking" &&
      st.witness.value("school", "") == "s1")
    for (const auto& nm : st.witness.at("coalition"))
      blocked_via_i5 = blocked_via_i5 || nm == "i5";
  r.check(blocked_via_i5, "ex4.3: the four-student cycle is blocked at s1 through i5");

  const ChoiceCorrespondence& s1 = m.schools[std::size_t(m.school_index("s1"))].choice;
  const GroundSet& st5 = m.students;
  std::vector<Subset> expect{st5.parse_key("i1,i5"), st5.parse_key("i3,i5")};
  std::sort(expect.begin(), expect.end());
  r.check(s1.enumerate(st5.parse_key("i1,i3,i5")) == expect,
          "ex4.3: s1 chooses exactly {i1,i5} and {i3,i5} from the witness pool {i1,i3,i5}");
}

void criterion7(CriterionResult& r) {
  PaperInstance inst = paper_instance("ex4.2");
  const Market& m = *inst.market;
  const Matching& mu = inst.matchings.at("mu");
  r.check(oracle_constrained_efficient(m, mu), "ex4.2: mu is efficient in the stable set");
  bool applies = true;
  try {
    apply_psic(m, mu, {0, 1, 2, 3});
  } catch (const Error&) {
    applies = false;
  }
  r.check(applies, "ex4.2: the cycle i1,i2,i3,i4 validates as a seat exchange");
  r.check(!check_pi_corr(m.schools[std::size_t(m.school_index("s1"))].choice).ok(),
          "ex4.2: s1's choices are not path independent");
}

void criterion8(CriterionResult& r) {
  PaperInstance inst = paper_instance("appD");
  const Market& m = *inst.market;
  const ChoiceCorrespondence& corr = m.schools[std::size_t(m.school_index("s1"))].choice;
  const GroundSet& st = corr.ground();

  std::vector<Subset> expect{st.parse_key("i1,i2"), st.parse_key("i1,i3"),
                             st.parse_key("i2,i4")};
  std::sort(expect.begin(), expect.end());
  r.check(corr.enumerate(st.full()) == expect,
          "appD: the committee picks exactly {i1,i2}, {i1,i3}, {i2,i4} from everyone");

  r.check(check_bridging(corr, 2).ok(), "appD: roster bridging holds");

  auto digits = [](Subset s) {
    std::string out;
    for (int i : s.members()) out += std::to_string(i + 1);
    return out;
  };
  std::vector<std::string> restricted;
  for (const auto& row : bridging_rows(corr, 2))
    if (row.X != row.Y && row.Y.size() > 2)
      restricted.push_back(digits(row.X) + "|" + digits(row.Y) + "|" + digits(row.A) + "|" +
                           digits(row.B) + "|" + std::to_string(row.i + 1) + "|" +
                           std::to_string(row.j + 1));
  std::sort(restricted.begin(), restricted.end());

  std::vector<std::string> reference;
  {
    std::istringstream in(kReferenceRows);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) reference.push_back(line);
    std::sort(reference.begin(), reference.end());
  }

  r.check(restricted.size() == 80, "appD: expected exactly 80 restricted rows, measured " +
                                       std::to_string(restricted.size()));
  bool rows_match = restricted == reference;
  std::string row_text = "appD: all " + std::to_string(reference.size()) +
                         " bundled reference rows match field by field";
  if (!rows_match)
    for (std::size_t k = 0; k < std::max(restricted.size(), reference.size()); ++k) {
      std::string got = k < restricted.size() ? restricted[k] : "(none)";
      std::string want = k < reference.size() ? reference[k] : "(none)";
      if (got != want) {
        row_text += "; first difference at sorted position " + std::to_string(k) + ": measured " +
                    got + ", reference " + want;
        break;
      }
    }
  r.check(rows_match, row_text);

  const Matching& mu = inst.matchings.at("mu");
  r.check(is_stable(m, mu).ok(), "appD: mu is stable");
  bool efficient = oracle_constrained_efficient(m, mu);
  std::string eff_text = "appD: mu expected efficient in the stable set";
  if (!efficient) {
    auto stable = pimatch::detail::enumerate_stable(m);
    int dominating = 0;
    for (const Matching& other : stable)
      if (pareto_dominates(m, other, mu)) ++dominating;
    eff_text += ", measured dominated by " + std::to_string(dominating) + " of " +
                std::to_string(stable.size()) + " stable matchings";
  }
  r.check(efficient, eff_text);

  auto cyc = find_psic(m, mu);
  std::string cyc_text = "appD: expected improvement cycle (i1,i3,i2,i4)";
  if (cyc) {
    cyc_text += ", measured (";
    for (std::size_t k = 0; k < cyc->size(); ++k)
      cyc_text += (k ? "," : "") + m.students.name((*cyc)[k]);
    cyc_text += ")";
  } else {
    cyc_text += ", measured none";
  }
  r.check(cyc.has_value() && *cyc == std::vector<int>{0, 2, 1, 3}, cyc_text);
}

void criterion9(CriterionResult& r) {
  std::mt19937_64 rng(923);
  const int markets = 200;
  int stable_seen = 0;
  bool equivalence = true;
  bool lifts = true;
  for (int t = 0; t < markets; ++t) {
    Market m = gen::random_market(5, 4, rng);
    for (const Matching& mu : pimatch::detail::enumerate_stable(m)) {
      ++stable_seen;
      bool oracle = oracle_constrained_efficient(m, mu);
      bool characterized = is_maximal(m, mu).ok() && !find_psic(m, mu).has_value();
      equivalence = equivalence && oracle == characterized;
    }
    Matching da = deferred_acceptance(m, default_school_weights(m));
    lifts = lifts && oracle_constrained_efficient(m, constrained_efficient(m, da));
  }
  r.check(equivalence, "efficiency matches (maximal and cycle-free) on " +
                           std::to_string(stable_seen) + " stable matchings across " +
                           std::to_string(markets) + " markets");
  r.check(lifts, "the pipeline output passes the efficiency oracle in every market");
}

void criterion10(CriterionResult& r) {
  std::mt19937_64 rng(924);
  int concave = 0;
  const int instances = 16;
  for (int t = 0; t < instances; ++t) {
    GroundSet gs = gen::elements((t % 2) ? 5 : 4);
    UtilityFunction u = gen::family_utility(gs, t % 8, rng);
    if (check_ordinal_concavity(u, 8).ok() && check_size_restricted_concavity(u, 8).ok())
      ++concave;
  }
  r.check(concave == instances, "utility families (n = 4, 5): " + std::to_string(concave) + "/" +
                                    std::to_string(instances) +
                                    " pass ordinal and size-restricted concavity");

  int pi_ok = 0;
  const int small = 12;
  for (int t = 0; t < small; ++t) {
    GroundSet gs = gen::elements(2 + t % 3);
    UtilityFunction u = gen::family_utility(gs, t % 8, rng);
    if (!check_ordinal_concavity(u, 8).ok()) continue;
    if (check_pi_corr(ChoiceCorrespondence::from_utility(gs, u)).ok()) ++pi_ok;
  }
  r.check(pi_ok == small, "ordinal-concave utilities (n <= 4): " + std::to_string(pi_ok) + "/" +
                              std::to_string(small) +
                              " induce path-independent tie-broken choices");
}

}  // namespace

int main() {
  struct Row {
    int number;
    const char* label;
    double budget;
    std::function<void(CriterionResult&)> body;
  };
  const std::vector<Row> rows = {
      {1, "bundled five-correspondence classification", 5.0, criterion1},
      {2, "chosen families are exchange-closed", 10.0, criterion2},
      {3, "rationalization round-trips", 5.0, criterion3},
      {4, "tie-breaking within query budgets", 60.0, criterion4},
      {5, "ex4.1 pipeline lift", 1.0, criterion5},
      {6, "ex4.3 improvement cycles", 1.0, criterion6},
      {7, "ex4.2 negative control", 1.0, criterion7},
      {8, "appD committee and reference rows", 5.0, criterion8},
      {9, "efficiency characterization on random markets", 120.0, criterion9},
      {10, "concavity and induced path independence", 30.0, criterion10},
  };

  int failed = 0;
  for (const Row& row : rows) {
    CriterionResult result;
    auto t0 = std::chrono::steady_clock::now();
    try {
      row.body(result);
    } catch (const std::exception& e) {
      result.check(false, std::string("unexpected exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool within = secs < row.budget;
    bool pass = result.pass && within;
    std::ostringstream line;
    line << (pass ? "[PASS]" : "[FAIL]") << " criterion " << row.number << ": " << row.label
         << " (" << std::fixed << std::setprecision(2) << secs << " s, budget "
         << std::setprecision(0) << row.budget << " s)";
    std::cout << line.str() << "\n";
    if (!pass) {
      for (const SubCheck& sub : result.subs)
        std::cout << "       " << (sub.ok ? "ok   " : "FAIL ") << sub.text << "\n";
      if (!within) std::cout << "       FAIL over the runtime budget\n";
    }
    if (!pass) ++failed;
  }
  std::cout << (10 - failed) << " criteria passed, " << failed << " failed\n";
  return failed;
}
