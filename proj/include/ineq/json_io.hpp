#pragma once

#include <json.hpp>

#include "ineq/hardy.hpp"
#include "ineq/mlsi.hpp"
#include "ineq/young.hpp"

namespace ineq {

using nlohmann::json;

// {"family":"power_law","p":1.5} | {"family":"gaussian"} |
// {"family":"double_exp"} | {"family":"uniform","a":0,"b":1} |
// {"family":"custom","terms":[[c,e],...],"support":[lo,hi],"smooth":s}
PotentialSpec measure_from_json(const json& j);

// {"family":"power","q":3} | {"family":"scaled_power","q":3,"c":2} |
// {"family":"plus_square","base":{...}}
YoungFn phi_from_json(const json& j);

// Inline string if it starts with '{', otherwise a file path.
json load_spec(const std::string& arg);

json encode_real(double v);   // finite -> number, +inf -> "inf", nan -> "nan"

json report_json(const CriterionReport& rep);
json classification_json(const Classification& c);

} // namespace ineq
