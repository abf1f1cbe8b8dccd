#pragma once

#include <fstream>

#include "pimatch/applications.hpp"
#include "pimatch/jsonutil.hpp"

namespace pimatch {

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(Errc::parse_error, path + ": " + e.what());
  }
}

namespace detail {

inline const Json& field(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(Errc::parse_error, std::string("missing field \"") + key + "\"");
  return *it;
}

inline Rat rat_from_json(const Json& v) {
  if (v.is_number_integer()) return Rat(v.get<long long>());
  if (v.is_string()) {
    try {
      return rat_parse(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(Errc::parse_error, e.what());
    }
  }
  fail(Errc::parse_error, "values must be integers or rational strings, got " + v.dump());
}

inline int int_from_json(const Json& v, const char* what) {
  if (!v.is_number_integer()) fail(Errc::parse_error, std::string(what) + " must be an integer");
  return v.get<int>();
}

inline std::string string_from_json(const Json& v, const char* what) {
  if (!v.is_string()) fail(Errc::parse_error, std::string(what) + " must be a string");
  return v.get<std::string>();
}

inline GroundSet ground_from_json(const Json& arr) {
  if (!arr.is_array()) fail(Errc::parse_error, "\"ground\" must be an array of element names");
  std::vector<std::string> names;
  for (const auto& v : arr) names.push_back(string_from_json(v, "an element name"));
  return GroundSet(std::move(names));
}

inline std::vector<Rat> scores_from_json(const GroundSet& gs, const Json& obj) {
  if (!obj.is_object()) fail(Errc::parse_error, "\"scores\" must map element names to values");
  std::vector<Rat> v(static_cast<std::size_t>(gs.size()));
  std::vector<bool> seen(static_cast<std::size_t>(gs.size()), false);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    int i = gs.index(it.key());
    v[static_cast<std::size_t>(i)] = rat_from_json(it.value());
    seen[static_cast<std::size_t>(i)] = true;
  }
  for (int i = 0; i < gs.size(); ++i)
    if (!seen[static_cast<std::size_t>(i)])
      fail(Errc::parse_error, "missing score for " + gs.name(i));
  return v;
}

inline std::vector<Subset> sets_from_json(const GroundSet& gs, const Json& arr, const char* what) {
  if (!arr.is_array()) fail(Errc::parse_error, std::string(what) + " must be an array of sets");
  std::vector<Subset> out;
  for (const auto& v : arr) out.push_back(set_from_json(gs, v));
  return out;
}

inline std::vector<int> ints_from_json(const Json& arr, const char* what) {
  if (!arr.is_array()) fail(Errc::parse_error, std::string(what) + " must be an array of integers");
  std::vector<int> out;
  for (const auto& v : arr) out.push_back(int_from_json(v, what));
  return out;
}

}  // namespace detail

inline Matroid matroid_from_json(const GroundSet& gs, const Json& spec) {
  if (!spec.is_object()) fail(Errc::parse_error, "matroid spec must be an object");
  std::string type = detail::string_from_json(detail::field(spec, "type"), "\"type\"");
  if (type == "uniform")
    return uniform_matroid(gs, detail::int_from_json(detail::field(spec, "rank"), "\"rank\""));
  if (type == "laminar") {
    const Json& caps = detail::field(spec, "caps");
    if (!caps.is_array()) fail(Errc::parse_error, "\"caps\" must be an array");
    std::vector<std::pair<Subset, int>> parsed;
    for (const auto& c : caps)
      parsed.emplace_back(set_from_json(gs, detail::field(c, "set")),
                          detail::int_from_json(detail::field(c, "cap"), "\"cap\""));
    return laminar_matroid(gs, std::move(parsed));
  }
  if (type == "transversal")
    return transversal_matroid(gs,
                               detail::sets_from_json(gs, detail::field(spec, "seats"), "\"seats\""));
  fail(Errc::parse_error, "unknown matroid type \"" + type + "\"");
}

// Correspondence spec: an object with a "kind" (default "explicit") and kind
// specific fields. The ground set comes from a "ground" array, or from the
// surrounding market when the spec appears inside one.
inline ChoiceCorrespondence corr_from_json(const Json& spec,
                                           const GroundSet* market_ground = nullptr) {
  if (!spec.is_object()) fail(Errc::parse_error, "correspondence spec must be an object");
  GroundSet gs;
  if (spec.contains("ground"))
    gs = detail::ground_from_json(spec["ground"]);
  else if (market_ground)
    gs = *market_ground;
  else
    fail(Errc::parse_error, "correspondence spec needs a \"ground\" array");
  std::string kind =
      spec.contains("kind") ? detail::string_from_json(spec["kind"], "\"kind\"") : "explicit";

  if (kind == "explicit") {
    const Json& tbl = detail::field(spec, "table");
    if (!tbl.is_object())
      fail(Errc::parse_error, "\"table\" must map menu keys to arrays of chosen sets");
    std::vector<std::vector<Subset>> table(std::size_t(1) << gs.size());
    table[0] = {Subset::empty()};
    for (auto it = tbl.begin(); it != tbl.end(); ++it) {
      Subset X = gs.parse_key(it.key());
      if (!it.value().is_array())
        fail(Errc::parse_error, "chosen sets for a menu must form an array");
      table[X.bits()].clear();
      for (const auto& row : it.value()) {
        if (row.is_string())
          table[X.bits()].push_back(gs.parse_key(row.get<std::string>()));
        else
          table[X.bits()].push_back(set_from_json(gs, row));
      }
    }
    return ChoiceCorrespondence::from_table(std::move(gs), std::move(table));
  }
  if (kind == "responsive") {
    int q = detail::int_from_json(detail::field(spec, "q"), "\"q\"");
    auto scores = detail::scores_from_json(gs, detail::field(spec, "scores"));
    return ChoiceCorrespondence::from_utility(gs, responsive(gs, q, std::move(scores)));
  }
  if (kind == "controlled") {
    int q = detail::int_from_json(detail::field(spec, "q"), "\"q\"");
    auto types = TypeStructure::partition(
        gs, detail::sets_from_json(gs, detail::field(spec, "types"), "\"types\""));
    auto floors = detail::ints_from_json(detail::field(spec, "floors"), "\"floors\"");
    auto ceilings = detail::ints_from_json(detail::field(spec, "ceilings"), "\"ceilings\"");
    auto scores = detail::scores_from_json(gs, detail::field(spec, "scores"));
    return ChoiceCorrespondence::from_utility(
        gs, controlled_choice(gs, q, types, std::move(floors), std::move(ceilings),
                              std::move(scores)));
  }
  if (kind == "edcr") {
    int q = detail::int_from_json(detail::field(spec, "q"), "\"q\"");
    auto types = TypeStructure::partition(
        gs, detail::sets_from_json(gs, detail::field(spec, "types"), "\"types\""));
    auto reserves = detail::ints_from_json(detail::field(spec, "reserves"), "\"reserves\"");
    auto scores = detail::scores_from_json(gs, detail::field(spec, "scores"));
    return ChoiceCorrespondence::from_utility(
        gs, edcr(gs, q, types, std::move(reserves), std::move(scores)));
  }
  if (kind == "overlapping") {
    int q = detail::int_from_json(detail::field(spec, "q"), "\"q\"");
    auto pools = detail::sets_from_json(gs, detail::field(spec, "pools"), "\"pools\"");
    auto reserves = detail::ints_from_json(detail::field(spec, "reserves"), "\"reserves\"");
    auto scores = detail::scores_from_json(gs, detail::field(spec, "scores"));
    return ChoiceCorrespondence::from_utility(
        gs, overlapping_reserves(gs, q, std::move(pools), std::move(reserves), std::move(scores)));
  }
  if (kind == "committee") {
    int q = detail::int_from_json(detail::field(spec, "q"), "\"q\"");
    const Json& refs = detail::field(spec, "referees");
    if (!refs.is_array()) fail(Errc::parse_error, "\"referees\" must be an array of orders");
    std::vector<std::vector<int>> orders;
    for (const auto& r : refs) {
      if (!r.is_array()) fail(Errc::parse_error, "a referee order must be an array of names");
      std::vector<int> order;
      for (const auto& v : r) order.push_back(gs.index(detail::string_from_json(v, "a name")));
      orders.push_back(std::move(order));
    }
    std::optional<std::vector<std::vector<int>>> profiles;
    if (spec.contains("profiles")) {
      profiles.emplace();
      for (const auto& p : spec["profiles"])
        profiles->push_back(detail::ints_from_json(p, "a profile entry"));
    }
    return committee(gs, q, orders, profiles);
  }
  if (kind == "weighted_matroid") {
    Matroid m = matroid_from_json(gs, detail::field(spec, "matroid"));
    auto scores = detail::scores_from_json(gs, detail::field(spec, "scores"));
    return ChoiceCorrespondence::from_utility(gs,
                                              weighted_matroid_utility(m, std::move(scores)));
  }
  if (kind == "laminar_concave") {
    const Json& ps = detail::field(spec, "pieces");
    if (!ps.is_array()) fail(Errc::parse_error, "\"pieces\" must be an array");
    std::vector<LaminarPiece> pieces;
    for (const auto& p : ps) {
      LaminarPiece piece;
      piece.members = set_from_json(gs, detail::field(p, "set"));
      const Json& vals = detail::field(p, "values");
      if (!vals.is_array()) fail(Errc::parse_error, "piece \"values\" must be an array");
      for (const auto& v : vals) piece.values.push_back(detail::rat_from_json(v));
      pieces.push_back(std::move(piece));
    }
    return ChoiceCorrespondence::from_utility(gs, laminar_concave_utility(gs, std::move(pieces)));
  }
  if (kind == "feasible_family") {
    auto family = detail::sets_from_json(gs, detail::field(spec, "family"), "\"family\"");
    return ChoiceCorrespondence::from_family(std::move(gs), std::move(family));
  }
  fail(Errc::parse_error, "unknown correspondence kind \"" + kind + "\"");
}

inline Json corr_to_json(const ChoiceCorrespondence& corr, int cap = kDefaultDpCap) {
  const GroundSet& gs = corr.ground();
  Json out = Json::object();
  out["kind"] = "explicit";
  Json ground = Json::array();
  for (const std::string& name : gs.names()) ground.push_back(name);
  out["ground"] = ground;
  Json tbl = Json::object();
  auto table = materialize(corr, cap);
  for (std::uint32_t x = 0; x < table.size(); ++x) {
    Json row = Json::array();
    for (Subset y : table[x]) row.push_back(gs.key(y));
    tbl[gs.key(Subset(x))] = row;
  }
  out["table"] = tbl;
  return out;
}

inline Market market_from_json(const Json& spec) {
  if (!spec.is_object()) fail(Errc::parse_error, "market spec must be an object");
  Market m;
  m.students = detail::ground_from_json(detail::field(spec, "students"));
  const Json& schools = detail::field(spec, "schools");
  if (!schools.is_array()) fail(Errc::parse_error, "\"schools\" must be an array");
  for (const auto& sj : schools) {
    if (!sj.is_object()) fail(Errc::parse_error, "a school spec must be an object");
    m.schools.push_back(
        School{detail::string_from_json(detail::field(sj, "name"), "school \"name\""),
               corr_from_json(detail::field(sj, "choice"), &m.students)});
  }
  const Json& prefs = detail::field(spec, "preferences");
  if (!prefs.is_object()) fail(Errc::parse_error, "\"preferences\" must map students to lists");
  m.prefs.assign(static_cast<std::size_t>(m.students.size()), {});
  for (auto it = prefs.begin(); it != prefs.end(); ++it) {
    int i = m.students.index(it.key());
    if (!it.value().is_array())
      fail(Errc::parse_error, "preference list for " + it.key() + " must be an array");
    for (const auto& v : it.value())
      m.prefs[static_cast<std::size_t>(i)].push_back(
          m.school_index(detail::string_from_json(v, "a school name")));
  }
  m.validate();
  return m;
}

inline Matching matching_from_json(const Market& m, const Json& spec) {
  if (!spec.is_object()) fail(Errc::parse_error, "matching spec must be an object");
  const Json& assign = detail::field(spec, "assignment");
  if (!assign.is_object()) fail(Errc::parse_error, "\"assignment\" must map students to schools");
  Matching mu = Matching::unmatched(m);
  for (auto it = assign.begin(); it != assign.end(); ++it) {
    int i = m.students.index(it.key());
    if (it.value().is_null()) continue;
    mu.assign[static_cast<std::size_t>(i)] =
        m.school_index(detail::string_from_json(it.value(), "a school name"));
  }
  return mu;
}

inline Json matching_json(const Market& m, const Matching& mu) {
  Json assign = Json::object();
  for (int i = 0; i < m.students.size(); ++i) {
    int s = mu.assign[static_cast<std::size_t>(i)];
    if (s < 0)
      assign[m.students.name(i)] = nullptr;
    else
      assign[m.students.name(i)] = m.schools[static_cast<std::size_t>(s)].name;
  }
  Json out = Json::object();
  out["assignment"] = std::move(assign);
  return out;
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

// Weight given either inline as "names;signs" (a full ranking, best first,
// with one +/- per rank) or as a path to a JSON file of per-element values.
inline UMWeight weight_from_spec(const GroundSet& gs, const std::string& spec) {
  std::size_t semi = spec.find(';');
  if (semi == std::string::npos) return weight_from_json(gs, load_json_file(spec));
  std::vector<std::string> names = detail::split(spec.substr(0, semi), ',');
  std::vector<std::string> signs = detail::split(spec.substr(semi + 1), ',');
  if (static_cast<int>(names.size()) != gs.size() || names.size() != signs.size())
    fail(Errc::parse_error, "inline weight must rank every element and give one sign per rank");
  std::vector<int> order;
  std::vector<bool> negative;
  for (std::size_t j = 0; j < names.size(); ++j) {
    order.push_back(gs.index(names[j]));
    if (signs[j] == "+")
      negative.push_back(false);
    else if (signs[j] == "-")
      negative.push_back(true);
    else
      fail(Errc::parse_error, "weight signs must be + or -, got \"" + signs[j] + "\"");
  }
  return canonical_weight(gs, order, negative);
}

inline std::vector<UMWeight> school_weights_from_json(const Market& m, const Json& spec) {
  if (!spec.is_object()) fail(Errc::parse_error, "school weights must be an object");
  std::vector<UMWeight> out = default_school_weights(m);
  for (auto it = spec.begin(); it != spec.end(); ++it)
    out[static_cast<std::size_t>(m.school_index(it.key()))] =
        weight_from_json(m.students, it.value());
  return out;
}

}  // namespace pimatch
