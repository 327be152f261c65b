#pragma once

#include "gausep/locc.hpp"
#include "gausep/model_io.hpp"

namespace gausep {

// { "layout": {...}, "trotter_steps": n, "local_unitary_generator": [[..]],
//   "channels": [ {"x_a":[..],"x_b":[..],"gamma_a":..,"gamma_b":..,
//                  "lambda":..,"kappa_a":..,"kappa_b":..}, ... ] }
json protocol_to_json(const LoccProtocol& p);
LoccProtocol protocol_from_json(const json& j);

json synthesis_to_json(const SynthesisResult& r);

}  // namespace gausep
