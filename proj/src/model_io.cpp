#include "gausep/model_io.hpp"

namespace gausep {

json matrix_to_json(const Mat& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

Mat matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw DomainError(what + ": expected array of rows");
  const auto rows = j.size();
  if (rows == 0) return Mat(0, 0);
  if (!j[0].is_array()) throw DomainError(what + ": expected array of rows");
  const auto cols = j[0].size();
  Mat M(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw DomainError(what + ": ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw DomainError(what + ": non-numeric entry");
      M(r, c) = j[r][c].get<double>();
    }
  }
  return M;
}

json vector_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vec vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw DomainError(what + ": expected array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw DomainError(what + ": non-numeric entry");
    v(i) = j[i].get<double>();
  }
  return v;
}

static const json& field(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(ctx + ": missing field '" + key + "'");
  return j.at(key);
}

static double number(const json& j, const char* key, const std::string& ctx) {
  const json& v = field(j, key, ctx);
  if (!v.is_number()) throw DomainError(ctx + ": field '" + key + "' must be a number");
  return v.get<double>();
}

json model_to_json(const SystemModel& m) {
  json j;
  j["layout"] = {{"n_a", m.layout.n_a}, {"n_b", m.layout.n_b}};
  j["h_a"] = matrix_to_json(m.h_a);
  j["h_b"] = matrix_to_json(m.h_b);
  if (auto* r = std::get_if<Rank1Coupling>(&m.coupling)) {
    j["coupling"] = {{"kind", "rank1"}, {"k_g", r->k_g}, {"u_a", vector_to_json(r->u_a)},
                     {"u_b", vector_to_json(r->u_b)}};
  } else {
    j["coupling"] = {{"kind", "general"}, {"q_g", matrix_to_json(std::get<GeneralCoupling>(m.coupling).q_g)}};
  }
  if (auto* s = std::get_if<ScalarWhite>(&m.noise)) {
    j["noise"] = {{"kind", "scalar_white"}, {"s_a", s->s_a}, {"s_b", s->s_b}, {"s_ab", s->s_ab}};
  } else {
    const auto& q = std::get<MatrixWhite>(m.noise);
    j["noise"] = {{"kind", "matrix_white"}, {"q_a", matrix_to_json(q.q_a)}, {"q_b", matrix_to_json(q.q_b)}};
  }
  return j;
}

SystemModel model_from_json(const json& j) {
  SystemModel m;
  const json& lay = field(j, "layout", "model");
  m.layout.n_a = static_cast<int>(number(lay, "n_a", "layout"));
  m.layout.n_b = static_cast<int>(number(lay, "n_b", "layout"));
  m.h_a = matrix_from_json(field(j, "h_a", "model"), "h_a");
  m.h_b = j.contains("h_b") ? matrix_from_json(j["h_b"], "h_b") : Mat(0, 0);
  if (m.h_b.size() == 0) m.h_b = Mat::Zero(m.layout.dim_b(), m.layout.dim_b());

  const json& c = field(j, "coupling", "model");
  std::string kind = field(c, "kind", "coupling").get<std::string>();
  if (kind == "rank1") {
    m.coupling = Rank1Coupling{number(c, "k_g", "coupling"), vector_from_json(field(c, "u_a", "coupling"), "u_a"),
                               vector_from_json(field(c, "u_b", "coupling"), "u_b")};
  } else if (kind == "general") {
    m.coupling = GeneralCoupling{matrix_from_json(field(c, "q_g", "coupling"), "q_g")};
  } else {
    throw DomainError("coupling: unknown kind '" + kind + "'");
  }

  const json& n = field(j, "noise", "model");
  kind = field(n, "kind", "noise").get<std::string>();
  if (kind == "scalar_white") {
    m.noise = ScalarWhite{number(n, "s_a", "noise"), number(n, "s_b", "noise"),
                          n.contains("s_ab") ? number(n, "s_ab", "noise") : 0.0};
  } else if (kind == "matrix_white") {
    m.noise = MatrixWhite{matrix_from_json(field(n, "q_a", "noise"), "q_a"),
                          matrix_from_json(field(n, "q_b", "noise"), "q_b")};
  } else {
    throw DomainError("noise: unknown kind '" + kind + "'");
  }
  m.validate();
  return m;
}

}  // namespace gausep
