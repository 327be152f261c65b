#pragma once

#include "gausep/model.hpp"

#include <json.hpp>

namespace gausep {

using json = nlohmann::json;

json matrix_to_json(const Mat& M);
Mat matrix_from_json(const json& j, const std::string& what);
json vector_to_json(const Vec& v);
Vec vector_from_json(const json& j, const std::string& what);

// Schema:
// { "layout": {"n_a":1,"n_b":1},
//   "h_a": [[...]], "h_b": [[...]],
//   "coupling": {"kind":"rank1","k_g":..,"u_a":[..],"u_b":[..]}
//             | {"kind":"general","q_g":[[..]]},
//   "noise": {"kind":"scalar_white","s_a":..,"s_b":..,"s_ab":..}
//          | {"kind":"matrix_white","q_a":[[..]],"q_b":[[..]]} }
json model_to_json(const SystemModel& model);
SystemModel model_from_json(const json& j);

}  // namespace gausep
