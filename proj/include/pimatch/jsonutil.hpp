#pragma once

#include <json.hpp>

#include "pimatch/core.hpp"

namespace pimatch {

using Json = nlohmann::json;

inline Json set_json(const GroundSet& gs, Subset x) {
  Json arr = Json::array();
  for (int i : x.members()) arr.push_back(gs.name(i));
  return arr;
}

inline Subset set_from_json(const GroundSet& gs, const Json& arr) {
  if (!arr.is_array()) fail(Errc::parse_error, "expected an array of element names");
  Subset x;
  for (const auto& v : arr) {
    if (!v.is_string()) fail(Errc::parse_error, "element names must be strings");
    x = x.plus(gs.index(v.get<std::string>()));
  }
  return x;
}

inline Json weight_json(const GroundSet& gs, const UMWeight& w) {
  Json obj = Json::object();
  for (int i = 0; i < gs.size(); ++i) obj[gs.name(i)] = rat_str(w.w[std::size_t(i)]);
  return obj;
}

inline UMWeight weight_from_json(const GroundSet& gs, const Json& obj, bool verify = true) {
  if (!obj.is_object()) fail(Errc::parse_error, "expected an object of element weights");
  UMWeight w;
  w.w.assign(std::size_t(gs.size()), Rat(0));
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    int i = gs.index(it.key());
    if (it.value().is_number_integer())
      w.w[std::size_t(i)] = Rat(it.value().get<long long>());
    else if (it.value().is_string())
      w.w[std::size_t(i)] = rat_parse(it.value().get<std::string>());
    else
      fail(Errc::parse_error, "weights must be integers or rational strings");
  }
  return verify ? verify_um(w) : w;
}

}  // namespace pimatch
