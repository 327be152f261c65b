#include "gausep/locc_io.hpp"

namespace gausep {

namespace {

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw DomainError(std::string("protocol: missing number '") + key + "'");
  return j.at(key).get<double>();
}

}  // namespace

json protocol_to_json(const LoccProtocol& p) {
  json chans = json::array();
  for (const auto& c : p.channels) {
    chans.push_back({{"x_a", vector_to_json(c.x_a)},
                     {"x_b", vector_to_json(c.x_b)},
                     {"gamma_a", c.gamma_a},
                     {"gamma_b", c.gamma_b},
                     {"lambda", c.lambda},
                     {"kappa_a", c.kappa_a},
                     {"kappa_b", c.kappa_b}});
  }
  return {{"layout", {{"n_a", p.layout.n_a}, {"n_b", p.layout.n_b}}},
          {"trotter_steps", p.trotter_steps},
          {"local_unitary_generator", matrix_to_json(p.local_unitary_generator)},
          {"channels", chans}};
}

LoccProtocol protocol_from_json(const json& j) {
  LoccProtocol p;
  if (!j.contains("layout")) throw DomainError("protocol: missing 'layout'");
  p.layout.n_a = j.at("layout").value("n_a", 1);
  p.layout.n_b = j.at("layout").value("n_b", 0);
  p.trotter_steps = j.value("trotter_steps", 1);
  if (!j.contains("local_unitary_generator")) throw DomainError("protocol: missing 'local_unitary_generator'");
  p.local_unitary_generator = matrix_from_json(j.at("local_unitary_generator"), "local_unitary_generator");
  if (j.contains("channels")) {
    for (const auto& c : j.at("channels")) {
      Rank1Channel ch;
      ch.x_a = vector_from_json(c.at("x_a"), "x_a");
      ch.x_b = vector_from_json(c.at("x_b"), "x_b");
      ch.gamma_a = number(c, "gamma_a");
      ch.gamma_b = number(c, "gamma_b");
      ch.lambda = number(c, "lambda");
      ch.kappa_a = c.value("kappa_a", 0.0);
      ch.kappa_b = c.value("kappa_b", 0.0);
      p.channels.push_back(ch);
    }
  }
  p.validate();
  return p;
}

json synthesis_to_json(const SynthesisResult& r) {
  json j = {{"feasible", r.feasible},
            {"rank_a", r.rank_a},
            {"rank_b", r.rank_b},
            {"singular_values", r.singular_values},
            {"range_residual", r.range_residual}};
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (r.protocol) j["protocol"] = protocol_to_json(*r.protocol);
  return j;
}

}  // namespace gausep
