#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pimatch/applications.hpp"
#include "pimatch/axioms.hpp"
#include "pimatch/io.hpp"
#include "pimatch/matching.hpp"
#include "pimatch/rationalize.hpp"
#include "pimatch/tiebreak.hpp"

namespace pimatch::cli {

inline const char* errc_label(Errc c) {
  switch (c) {
    case Errc::cap_exceeded:
      return "cap_exceeded";
    case Errc::empty_family:
      return "empty_family";
    case Errc::not_um:
      return "not_um";
    case Errc::invalid_table:
      return "invalid_table";
    case Errc::oracle_inconsistent:
      return "oracle_inconsistent";
    case Errc::no_valid_candidate:
      return "no_valid_candidate";
    case Errc::not_pi:
      return "not_pi";
    case Errc::not_partial_order:
      return "not_partial_order";
    case Errc::not_acceptant:
      return "not_acceptant";
    case Errc::not_in_family:
      return "not_in_family";
    case Errc::unknown_id:
      return "unknown_id";
    case Errc::invalid_cycle:
      return "invalid_cycle";
    case Errc::not_stable_input:
      return "not_stable_input";
    case Errc::parse_error:
      return "parse_error";
    case Errc::overlapping_types:
      return "overlapping_types";
    case Errc::bad_argument:
      return "bad_argument";
  }
  return "unknown";
}

// 0 success, 1 violated witness, 2 input error, 3 failed precondition,
// 4 axiom gate refused the computation.
inline int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::not_stable_input:
      return 3;
    case Errc::not_pi:
      return 4;
    default:
      return 2;
  }
}

struct Output {
  bool pretty = false;
};

inline void emit(const Output& out, const Json& j) {
  std::cout << (out.pretty ? j.dump(2) : j.dump()) << "\n";
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream f(path);
  if (!f) fail(Errc::bad_argument, "cannot open " + path + " for writing");
  f << j.dump(2) << "\n";
}

inline std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Largest chosen-set size anywhere; for an acceptant correspondence this is
// the quota, and the bridging scan rejects inputs where the guess is wrong.
inline int inferred_quota(const ChoiceCorrespondence& corr, int cap) {
  auto table = materialize(corr, cap);
  int q = 0;
  for (const auto& row : table)
    for (Subset y : row) q = std::max(q, y.size());
  return q;
}

inline Json classes_json(const GroundSet& gs, const RevealedOrder& order) {
  Json classes = Json::array();
  for (const auto& cls : order.classes) {
    Json one = Json::array();
    for (Subset s : cls) one.push_back(set_json(gs, s));
    classes.push_back(std::move(one));
  }
  return classes;
}

inline Verdict run_check(const std::string& name, const ChoiceCorrespondence& corr,
                         const AxiomCaps& caps, int cap) {
  const GroundSet& gs = corr.ground();
  if (name == "pi") return check_pi_corr(corr, caps);
  if (name == "lad") return check_lad_corr(corr, caps);
  if (name == "sub") {
    Verdict v = check_sc1(corr, cap);
    if (!v.ok()) return v;
    return check_sc2(corr, cap);
  }
  if (name == "sc1") return check_sc1(corr, cap);
  if (name == "sc2") return check_sc2(corr, cap);
  if (name == "irc") return check_irc_corr(corr, cap);
  if (name == "acceptant") return check_acceptant_corr(corr, cap);
  if (name == "gmatroid") {
    auto table = materialize(corr, cap);
    for (std::uint32_t x = 0; x < table.size(); ++x) {
      if (Verdict v = check_gmatroid(gs, table[x]); !v.ok())
        return Verdict::violated_with(
            Json{{"menu", set_json(gs, Subset(x))}, {"witness", std::move(v.witness)}});
    }
    return Verdict::holds();
  }
  if (name == "bridging") {
    int q = inferred_quota(corr, cap);
    Verdict v = check_bridging(corr, q, cap);
    if (v.ok())
      v.details["quota"] = q;
    else
      v.witness["quota"] = q;
    return v;
  }
  if (name == "rationalizable") {
    SarpResult r = sarp_check(corr, cap);
    if (!r.rationalizable) return Verdict::violated_with(cycle_json(gs, *r.cycle));
    return Verdict::holds_with(Json{{"classes", classes_json(gs, *r.order)}});
  }
  if (name == "closure") return check_closure(corr, cap);
  if (name == "ordinal_concave" || name == "size_restricted" || name == "mnat") {
    const UtilityFunction* u = corr.utility();
    if (!u) fail(Errc::bad_argument, "check '" + name + "' needs a utility-backed correspondence");
    int ucap = std::min(cap, 8);
    if (name == "ordinal_concave") return check_ordinal_concavity(*u, ucap);
    if (name == "size_restricted") return check_size_restricted_concavity(*u, ucap);
    return check_mnat(*u, ucap);
  }
  fail(Errc::bad_argument, "unknown check '" + name + "'");
}

inline int cmd_axioms(const std::string& file, std::string checks, int n_random,
                      std::uint64_t seed, int cap, const Output& out) {
  ChoiceCorrespondence corr = corr_from_json(load_json_file(file));
  AxiomCaps caps;
  caps.random_samples = n_random;
  caps.seed = seed;
  int pair_cap = cap > 0 ? cap : kAxiomPairCap;
  if (cap > 0) caps.pairwise = cap;
  if (checks.empty()) checks = "pi,lad";

  Json report;
  report["ground"] = set_json(corr.ground(), corr.ground().full());
  report["checks"] = Json::object();
  bool violated = false;
  for (const std::string& raw : pimatch::detail::split(checks, ',')) {
    std::string name = trimmed(raw);
    if (name.empty()) continue;
    Verdict v = run_check(name, corr, caps, pair_cap);
    report["checks"][name] = verdict_json(v);
    violated = violated || !v.ok();
  }
  emit(out, report);
  return violated ? 1 : 0;
}

inline int cmd_choose(const std::string& file, const std::string& set_key, bool set_given,
                      const std::string& weight_spec, int cap, const Output& out) {
  ChoiceCorrespondence corr = corr_from_json(load_json_file(file));
  const GroundSet& gs = corr.ground();
  Subset menu = set_given ? gs.parse_key(set_key) : gs.full();
  int enum_cap = cap > 0 ? cap : kDefaultEnumCap;

  Json report;
  report["set"] = set_json(gs, menu);
  auto family = corr.enumerate(menu, enum_cap);
  Json chosen = Json::array();
  for (Subset y : family) chosen.push_back(set_json(gs, y));
  report["chosen"] = std::move(chosen);
  report["count"] = family.size();

  if (!weight_spec.empty()) {
    UMWeight w = weight_from_spec(gs, weight_spec);
    Json tb;
    tb["weight"] = weight_json(gs, w);
    Subset brute = choose_bruteforce(corr, w, menu, enum_cap);
    tb["bruteforce"] = set_json(gs, brute);
    bool agree = true;
    try {
      auto r = choose_tiebroken(corr.with_pi_asserted(true), w, menu, enum_cap);
      tb["exchange"] = Json{{"chosen", set_json(gs, r.chosen)},
                            {"oracle_calls", r.stats.oracle_calls},
                            {"candidate_evals", r.stats.candidate_evals}};
      agree = agree && r.chosen == brute;
    } catch (const Error& e) {
      tb["exchange"] = Json{{"error", e.what()}};
      agree = false;
    }
    try {
      auto r = choose_pi_lad(corr, w, menu);
      tb["incremental"] = Json{{"chosen", set_json(gs, r.chosen)},
                               {"oracle_calls", r.stats.oracle_calls},
                               {"candidate_evals", r.stats.candidate_evals}};
      agree = agree && r.chosen == brute;
    } catch (const Error& e) {
      tb["incremental"] = Json{{"error", e.what()}};
      agree = false;
    }
    tb["agree"] = agree;
    report["tiebreak"] = std::move(tb);
  }
  emit(out, report);
  return 0;
}

inline std::vector<UMWeight> load_school_weights(const Market& m, const std::string& weights_file) {
  if (weights_file.empty()) return default_school_weights(m);
  return school_weights_from_json(m, load_json_file(weights_file));
}

inline int cmd_da(const std::string& market_file, const std::string& weights_file,
                  const std::string& trace_path, int cap, const Output& out) {
  Market m = market_from_json(load_json_file(market_file));
  int enum_cap = cap > 0 ? cap : kDefaultEnumCap;
  Json trace;
  Matching mu = deferred_acceptance(m, load_school_weights(m, weights_file),
                                    trace_path.empty() ? nullptr : &trace, enum_cap);
  Json report;
  report["matching"] = matching_json(m, mu);
  if (!trace_path.empty()) {
    write_json_file(trace_path, trace);
    report["trace_file"] = trace_path;
  }
  emit(out, report);
  return 0;
}

inline int cmd_efficient(const std::string& market_file, const std::string& start_spec,
                         const std::string& weights_file, const std::string& trace_path,
                         bool assume_pi_lad, int cap, const Output& out) {
  Market m = market_from_json(load_json_file(market_file));
  int enum_cap = cap > 0 ? cap : kDefaultEnumCap;

  if (!assume_pi_lad) {
    Json gate = Json::object();
    bool bad = false;
    for (const School& s : m.schools) {
      Verdict pi = check_pi_corr(s.choice);
      Verdict lad = check_lad_corr(s.choice);
      gate[s.name] = Json{{"pi", verdict_json(pi)}, {"lad", verdict_json(lad)}};
      bad = bad || !pi.ok() || !lad.ok();
    }
    if (bad) {
      emit(out, Json{{"axiom_gate", std::move(gate)}});
      return 4;
    }
  }

  Matching start;
  if (start_spec == "da")
    start = deferred_acceptance(m, load_school_weights(m, weights_file), nullptr, enum_cap);
  else
    start = matching_from_json(m, load_json_file(start_spec));

  Json trace;
  Matching mu = constrained_efficient(m, start, &trace, enum_cap);
  Json report;
  report["start"] = matching_json(m, start);
  report["matching"] = matching_json(m, mu);
  report["improved"] = !(mu == start);
  report["phases"] = trace["phases"].size();
  if (!trace_path.empty()) {
    write_json_file(trace_path, trace);
    report["trace_file"] = trace_path;
  }
  emit(out, report);
  return 0;
}

inline int cmd_rationalize(const std::string& file, int cap, const Output& out) {
  ChoiceCorrespondence corr = corr_from_json(load_json_file(file));
  const GroundSet& gs = corr.ground();
  int enum_cap = cap > 0 ? cap : kDefaultDpCap;
  SarpResult r = sarp_check(corr, enum_cap);
  if (!r.rationalizable) {
    emit(out, Json{{"rationalizable", false}, {"cycle", cycle_json(gs, *r.cycle)}});
    return 1;
  }
  UtilityFunction u = utility_from_order(*r.order);
  Json values = Json::object();
  for (std::uint32_t x = 0; x < (std::uint32_t(1) << gs.size()); ++x)
    values[gs.key(Subset(x))] = rat_str(u.eval(Subset(x)).components()[0]);
  emit(out, Json{{"rationalizable", true},
                 {"classes", classes_json(gs, *r.order)},
                 {"utility", std::move(values)}});
  return 0;
}

namespace detail {

struct Reporter {
  int failures = 0;

  void check(bool ok, const std::string& what) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << what << "\n";
    if (!ok) ++failures;
  }
  void note(const std::string& what) { std::cout << "[NOTE] " << what << "\n"; }
};

inline std::string sets_str(const GroundSet& gs, const std::vector<Subset>& family) {
  std::string out;
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (k) out += " ";
    out += gs.format(family[k]);
  }
  return out;
}

inline Rat witness_weight(const Json& witness, const std::string& name) {
  return rat_parse(witness.at("weight").at(name).get<std::string>());
}

inline void reproduce_table1(Reporter& rep) {
  struct Row {
    const char* name;
    bool pi_ok;
    bool lad_ok;
  };
  const Row rows[] = {{"C0", true, true},
                      {"C1", true, true},
                      {"C2", false, false},
                      {"C3", false, true},
                      {"C4", false, false}};
  for (const Row& row : rows) {
    std::string id = std::string("table1.") + row.name;
    PaperInstance inst = paper_instance(id);
    Verdict pi = check_pi_corr(*inst.corr);
    Verdict lad = check_lad_corr(*inst.corr);
    rep.check(pi.ok() == row.pi_ok,
              id + ": path independence " +
                  (row.pi_ok ? "holds on the tested family" : "is violated") + " (got " +
                  to_string(pi.status) + ")");
    rep.check(lad.ok() == row.lad_ok,
              id + ": aggregate-demand monotonicity " +
                  (row.lad_ok ? "holds on the tested family" : "is violated") + " (got " +
                  to_string(lad.status) + ")");
  }

  {
    PaperInstance inst = paper_instance("table1.C2");
    Verdict lad = check_lad_corr(*inst.corr);
    bool classed = false;
    if (!lad.ok() && lad.witness.contains("weight")) {
      Rat wa = witness_weight(lad.witness, "a");
      Rat wb = witness_weight(lad.witness, "b");
      Rat wc = witness_weight(lad.witness, "c");
      classed = wa > wb + wc && wb > 0 && wc > 0;
    }
    rep.check(classed, "table1.C2: the size-drop weight is positive with w(a) > w(b) + w(c)");

    rep.note(
        "table1.C2: from {a,b} and {a,c} the table forces {a}, yet from {a,b,c} it may pick "
        "{b,c}; any weight with w(b) + w(c) > w(a) chooses {b,c} directly but {a} through the "
        "recomposition, so no tie-break of this table is path independent");
    Verdict pi = check_pi_corr(*inst.corr);
    bool pi_classed = false;
    if (!pi.ok() && pi.witness.contains("weight")) {
      Rat wa = witness_weight(pi.witness, "a");
      Rat wb = witness_weight(pi.witness, "b");
      Rat wc = witness_weight(pi.witness, "c");
      pi_classed = wb + wc > wa && pi.witness.at("direct") == Json::array({"b", "c"}) &&
                   pi.witness.at("recomposed") == Json::array({"a"});
    }
    rep.check(pi_classed,
              "table1.C2: the recomposition witness has w(b) + w(c) > w(a), direct {b,c}, "
              "recomposed {a}");
  }
  {
    PaperInstance inst = paper_instance("table1.C3");
    Verdict pi = check_pi_corr(*inst.corr);
    bool classed = false;
    if (!pi.ok() && pi.witness.contains("weight")) {
      Rat wa = witness_weight(pi.witness, "a");
      Rat wb = witness_weight(pi.witness, "b");
      Rat wc = witness_weight(pi.witness, "c");
      classed = wa > wb && wb > wc && wc > 0;
    }
    rep.check(classed, "table1.C3: the violating weight is positive with w(a) > w(b) > w(c)");
  }
  {
    PaperInstance inst = paper_instance("table1.C4");
    const ChoiceCorrespondence& corr = *inst.corr;
    const GroundSet& gs = corr.ground();
    UMWeight w = verify_um(UMWeight{{Rat(-1), Rat(2), Rat(-4)}, false});
    auto table = materialize(corr, 8);
    auto t = pimatch::detail::cw_table(table, pimatch::detail::weight_sums(w, gs.size()));
    Subset a = gs.parse_key("a");
    Subset ab = gs.parse_key("a,b");
    Subset abc = gs.parse_key("a,b,c");
    rep.check(t[a.bits()] == Subset::empty() && t[ab.bits()] == ab &&
                  t[abc.bits()] == Subset::empty(),
              "table1.C4: weight (-1,2,-4) selects {} from {a}, {a,b} from {a,b}, {} from {a,b,c}");
    rep.check(pimatch::detail::pi_violation(t).has_value() &&
                  pimatch::detail::lad_violation(t).has_value(),
              "table1.C4: that selection breaks both recomposition and size monotonicity");
  }
}

inline void reproduce_ex41(Reporter& rep) {
  PaperInstance inst = paper_instance("ex4.1");
  const Market& m = *inst.market;
  const Matching& mu = inst.matchings.at("mu");
  const Matching& muprime = inst.matchings.at("muprime");
  rep.check(is_stable(m, mu).ok(), "ex4.1: mu is stable");
  rep.check(!oracle_constrained_efficient(m, mu),
            "ex4.1: mu is dominated by another stable matching");
  rep.check(is_stable(m, muprime).ok(), "ex4.1: muprime is stable");
  rep.check(pareto_dominates(m, muprime, mu), "ex4.1: muprime Pareto dominates mu");
  Matching lifted = constrained_efficient(m, mu);
  rep.check(lifted == muprime, "ex4.1: the pipeline lifts mu exactly to muprime");
  rep.check(oracle_constrained_efficient(m, lifted),
            "ex4.1: the pipeline output is efficient within the stable set");
}

inline void reproduce_ex42(Reporter& rep) {
  PaperInstance inst = paper_instance("ex4.2");
  const Market& m = *inst.market;
  const Matching& mu = inst.matchings.at("mu");
  rep.check(is_stable(m, mu).ok(), "ex4.2: mu is stable");
  rep.check(oracle_constrained_efficient(m, mu),
            "ex4.2: mu is efficient within the stable set");
  auto cyc = find_psic(m, mu);
  rep.check(cyc.has_value(), "ex4.2: the exchange graph still has an improvement cycle");
  if (cyc) {
    Matching swapped = apply_psic(m, mu, *cyc);
    rep.check(!is_stable(m, swapped).ok(), "ex4.2: applying that cycle breaks stability");
  }
  Verdict pi = check_pi_corr(m.schools[std::size_t(m.school_index("s1"))].choice);
  rep.check(!pi.ok(), "ex4.2: school s1's choices are not path independent");
}

inline void reproduce_ex43(Reporter& rep) {
  PaperInstance inst = paper_instance("ex4.3");
  const Market& m = *inst.market;
  const Matching& mu = inst.matchings.at("mu");
  const Matching& nu = inst.matchings.at("nu");
  const Matching& nuprime = inst.matchings.at("nuprime");

  rep.check(is_stable(m, mu).ok(), "ex4.3: mu is stable");
  auto cyc = find_psic(m, mu);
  rep.check(cyc.has_value() && *cyc == std::vector<int>{0, 1},
            "ex4.3: the shortest improvement cycle swaps i1 and i2");
  Matching two = apply_psic(m, mu, {0, 1});
  rep.check(two == nuprime, "ex4.3: applying the short cycle yields nuprime");
  rep.check(is_stable(m, two).ok(), "ex4.3: nuprime is stable");

  Matching four = apply_psic(m, mu, {0, 1, 2, 3});
  rep.check(four == nu, "ex4.3: the long cycle through i1,i2,i3,i4 yields nu");
  Verdict st = is_stable(m, four);
  bool blocked = !st.ok() && st.witness.value("kind", "") == "blocking" &&
                 st.witness.value("school", "") == "s1";
  bool via_i5 = false;
  if (blocked)
    for (const auto& nm : st.witness.at("coalition")) via_i5 = via_i5 || nm == "i5";
  rep.check(blocked && via_i5, "ex4.3: nu is blocked at s1 through i5");

  Matching lifted = constrained_efficient(m, mu);
  rep.check(lifted == nuprime, "ex4.3: the pipeline lifts mu exactly to nuprime");
  rep.check(oracle_constrained_efficient(m, lifted),
            "ex4.3: nuprime is efficient within the stable set");

  const ChoiceCorrespondence& s1 = m.schools[std::size_t(m.school_index("s1"))].choice;
  auto both = s1.enumerate(m.students.parse_key("i1,i3,i5"), 8);
  std::vector<Subset> expect = {m.students.parse_key("i1,i5"), m.students.parse_key("i3,i5")};
  std::sort(expect.begin(), expect.end());
  rep.check(both == expect, "ex4.3: s1 is indifferent between {i1,i5} and {i3,i5}");
}

inline void reproduce_appd(Reporter& rep) {
  PaperInstance inst = paper_instance("appD");
  const Market& m = *inst.market;
  const ChoiceCorrespondence& committee = m.schools[std::size_t(m.school_index("s1"))].choice;
  const GroundSet& st = committee.ground();

  auto at_full = committee.enumerate(st.full(), 8);
  std::vector<Subset> expect = {st.parse_key("i1,i2"), st.parse_key("i1,i3"),
                                st.parse_key("i2,i4")};
  std::sort(expect.begin(), expect.end());
  rep.check(at_full == expect,
            "appD: the committee picks exactly {i1,i2}, {i1,i3}, {i2,i4} from everyone");

  Verdict br = check_bridging(committee, 2);
  rep.check(br.ok(), "appD: roster bridging holds for the committee choices");
  auto rows = bridging_rows(committee, 2);
  int restricted = 0;
  for (const auto& r : rows)
    if (r.X != r.Y && r.Y.size() > 2) ++restricted;
  rep.note("appD: bridging instances checked in full: " + std::to_string(rows.size()));
  rep.check(restricted == 78,
            "appD: 78 rows survive the proper-subset, size-over-2 restriction");

  const Matching& mu = inst.matchings.at("mu");
  rep.check(is_stable(m, mu).ok(), "appD: mu is stable");
  rep.check(is_maximal(m, mu).ok(), "appD: mu is maximal");

  rep.note(
      "appD: s1 accepts {i2,i3} once i1 withdraws and accepts {i1,i4} once i2 withdraws, so "
      "mu admits the two-student exchanges (i1,i3) and (i2,i4); either one lands on a stable "
      "matching that every student weakly prefers");
  auto stable_set = pimatch::detail::enumerate_stable(m);
  int dominating = 0;
  for (const Matching& other : stable_set)
    if (pareto_dominates(m, other, mu)) ++dominating;
  rep.check(stable_set.size() == 5, "appD: the market has exactly five stable matchings");
  rep.check(dominating == 2, "appD: two of them Pareto dominate mu");
  rep.check(!oracle_constrained_efficient(m, mu),
            "appD: mu is not efficient within the stable set");

  auto cyc = find_psic(m, mu);
  rep.check(cyc.has_value() && *cyc == std::vector<int>{0, 2},
            "appD: the shortest improvement cycle swaps i1 and i3");
  Matching nu = apply_psic(m, mu, {0, 2});
  rep.check(is_stable(m, nu).ok() && pareto_dominates(m, nu, mu),
            "appD: swapping i1 and i3 stays stable and improves mu");
  Matching nu2 = apply_psic(m, mu, {1, 3});
  rep.check(is_stable(m, nu2).ok() && pareto_dominates(m, nu2, mu),
            "appD: swapping i2 and i4 stays stable and improves mu");

  Matching four = apply_psic(m, mu, {0, 2, 1, 3});
  Verdict ver = is_stable(m, four);
  bool blocked = !ver.ok() && ver.witness.value("kind", "") == "blocking" &&
                 ver.witness.value("school", "") == "s1";
  rep.check(blocked,
            "appD: the four-student cycle i1,i3,i2,i4 trades cleanly but s1 blocks the result");

  Matching lifted = constrained_efficient(m, mu);
  rep.check(lifted == nu, "appD: the pipeline lifts mu exactly to the i1-i3 swap");
  rep.check(oracle_constrained_efficient(m, lifted),
            "appD: the pipeline output is efficient within the stable set");
}

inline void reproduce_admission(Reporter& rep) {
  PaperInstance inst = paper_instance("admission");
  const ChoiceCorrespondence& corr = *inst.corr;
  const GroundSet& st = corr.ground();

  auto at_full = corr.enumerate(st.full(), 8);
  rep.note("admission: choices from the full pool: " + sets_str(st, at_full));
  Subset x13 = st.parse_key("i1,i3");
  Subset y24 = st.parse_key("i2,i4");
  bool has_both = std::binary_search(at_full.begin(), at_full.end(), x13) &&
                  std::binary_search(at_full.begin(), at_full.end(), y24);
  rep.check(has_both, "admission: {i1,i3} and {i2,i4} are both chosen from the full pool");

  auto mid = corr.enumerate(st.parse_key("i2,i3,i4"), 8);
  std::vector<Subset> expect = {st.parse_key("i2,i3"), st.parse_key("i2,i4")};
  std::sort(expect.begin(), expect.end());
  rep.check(mid == expect, "admission: the pool {i2,i3,i4} yields {i2,i3} and {i2,i4}");

  auto table = materialize(corr, 8);
  std::optional<Json> witness;
  Subset where;
  for (std::uint32_t x = 0; x < table.size() && !witness; ++x) {
    if (Verdict v = check_gmatroid(st, table[x]); !v.ok()) {
      witness = v.witness;
      where = Subset(x);
    }
  }
  rep.check(witness.has_value() && where == st.full(),
            "admission: the exchange property first fails at the full pool");
  bool fields = witness.has_value() && (*witness)["X"] == Json::array({"i1", "i3"}) &&
                (*witness)["Y"] == Json::array({"i2", "i4"}) && (*witness)["e"] == "i1";
  rep.check(fields, "admission: no swap repairs X={i1,i3}, Y={i2,i4} after dropping i1");

  SarpResult r = sarp_check(corr);
  rep.check(!r.rationalizable,
            "admission: revealed preferences cycle, so no single ranking explains the choices");
  rep.check(check_sc1(corr).ok() && check_sc2(corr).ok(),
            "admission: both set-covering directions hold");
  rep.check(check_acceptant_corr(corr).ok(), "admission: choices fill the quota when they can");
}

}  // namespace detail

inline int cmd_reproduce(const std::string& id) {
  detail::Reporter rep;
  if (id == "table1")
    detail::reproduce_table1(rep);
  else if (id == "ex4.1")
    detail::reproduce_ex41(rep);
  else if (id == "ex4.2")
    detail::reproduce_ex42(rep);
  else if (id == "ex4.3")
    detail::reproduce_ex43(rep);
  else if (id == "appD")
    detail::reproduce_appd(rep);
  else if (id == "admission")
    detail::reproduce_admission(rep);
  else if (id == "all") {
    detail::reproduce_table1(rep);
    detail::reproduce_ex41(rep);
    detail::reproduce_ex42(rep);
    detail::reproduce_ex43(rep);
    detail::reproduce_appd(rep);
    detail::reproduce_admission(rep);
  } else {
    fail(Errc::unknown_id,
         "unknown reproduce id '" + id +
             "' (expected table1, ex4.1, ex4.2, ex4.3, appD, admission, or all)");
  }
  if (rep.failures == 0)
    std::cout << "all assertions passed\n";
  else
    std::cout << rep.failures << " assertion(s) failed\n";
  return rep.failures == 0 ? 0 : 1;
}

inline int run_cli(int argc, char** argv) {
  CLI::App app{"path-independent choice correspondences and constrained-efficient matching"};
  app.require_subcommand(1);
  app.fallthrough();

  Output out;
  app.add_flag("--pretty", out.pretty, "indent JSON output");

  std::string file, set_key, weight_spec, market_file, weights_file, trace_path, checks, repro_id;
  std::string start_spec = "da";
  int n_random = 100;
  int cap = 0;
  std::uint64_t seed = 2026;
  bool assume_pi_lad = false;

  auto* ax = app.add_subcommand("axioms", "run axiom checks on a correspondence");
  ax->add_option("file", file, "correspondence or builder JSON")->required();
  ax->add_option("--checks", checks,
                 "comma-separated: pi, lad, sub, sc1, sc2, irc, acceptant, gmatroid, bridging, "
                 "rationalizable, closure, ordinal_concave, size_restricted, mnat (default pi,lad)");
  ax->add_option("--n-random", n_random, "random weights sampled on top of the systematic sweep");
  ax->add_option("--seed", seed, "seed for the random weight samples");
  ax->add_option("--cap", cap, "ground-size cap for exhaustive scans");

  auto* ch = app.add_subcommand("choose", "enumerate choices and tie-break with a weight");
  ch->add_option("file", file, "correspondence or builder JSON")->required();
  auto* set_opt = ch->add_option("--set", set_key, "menu as comma-joined names (default: all)");
  ch->add_option("--weight", weight_spec, "weight as 'names;signs' or a JSON file path");
  ch->add_option("--cap", cap, "menu-size cap for enumeration");

  auto* da = app.add_subcommand("da", "student-proposing deferred acceptance");
  da->add_option("market", market_file, "market JSON")->required();
  da->add_option("--weights", weights_file, "per-school tie-break weights JSON");
  da->add_option("--trace", trace_path, "write the per-round trace JSON here");
  da->add_option("--cap", cap, "menu-size cap for school choices");

  auto* eff = app.add_subcommand("efficient",
                                 "lift a stable matching until no student can gain");
  eff->add_option("market", market_file, "market JSON")->required();
  eff->add_option("--start", start_spec, "'da' or a matching JSON path (default da)");
  eff->add_option("--weights", weights_file, "per-school tie-break weights JSON for the da start");
  eff->add_option("--trace", trace_path, "write the phase trace JSON here");
  eff->add_flag("--assume-pi-lad", assume_pi_lad,
                "skip the axiom gate; unsafe when the school axioms fail");
  eff->add_option("--cap", cap, "menu-size cap for school choices");

  auto* ra = app.add_subcommand("rationalize",
                                "fit a single ranking that explains the choices");
  ra->add_option("file", file, "correspondence or builder JSON")->required();
  ra->add_option("--cap", cap, "ground-size cap");

  auto* re = app.add_subcommand("reproduce", "run a named instance's assertion suite");
  re->add_option("id", repro_id, "table1, ex4.1, ex4.2, ex4.3, appD, admission, or all")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (ax->parsed()) return cmd_axioms(file, checks, n_random, seed, cap, out);
    if (ch->parsed())
      return cmd_choose(file, set_key, set_opt->count() > 0, weight_spec, cap, out);
    if (da->parsed()) return cmd_da(market_file, weights_file, trace_path, cap, out);
    if (eff->parsed())
      return cmd_efficient(market_file, start_spec, weights_file, trace_path, assume_pi_lad, cap,
                           out);
    if (ra->parsed()) return cmd_rationalize(file, cap, out);
    if (re->parsed()) return cmd_reproduce(repro_id);
  } catch (const Error& e) {
    std::cerr << Json{{"error", Json{{"code", errc_label(e.code())}, {"what", e.what()}}}}.dump()
              << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", Json{{"code", "exception"}, {"what", e.what()}}}}.dump() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace pimatch::cli
