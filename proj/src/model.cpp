#include "gausep/model.hpp"

#include <cmath>

namespace gausep {

namespace {

void check_block(const Mat& M, int dim, const char* what) {
  if (M.rows() != dim || M.cols() != dim)
    throw DimensionError(std::string("model: ") + what + " has wrong shape");
  if (!M.allFinite()) throw DomainError(std::string("model: ") + what + " non-finite");
  if (max_abs(M - M.transpose()) > 1e-12 * std::max(1.0, max_abs(M)))
    throw DomainError(std::string("model: ") + what + " not symmetric");
}

void check_psd(const Mat& M, const char* what) {
  if (M.size() && min_eig_sym(M) < -1e-12 * std::max(1.0, max_abs(M)))
    throw DomainError(std::string("model: ") + what + " not PSD");
}

}  // namespace

void SystemModel::validate() const {
  layout.validate();
  const int da = layout.dim_a(), db = layout.dim_b();
  check_block(h_a, da, "h_a");
  check_block(h_b, db, "h_b");
  if (auto* r = std::get_if<Rank1Coupling>(&coupling)) {
    if (r->u_a.size() != da || r->u_b.size() != db) throw DimensionError("model: u vector length");
    if (!std::isfinite(r->k_g) || !r->u_a.allFinite() || !r->u_b.allFinite())
      throw DomainError("model: rank1 coupling non-finite");
    if (r->u_a.norm() == 0.0 || r->u_b.norm() == 0.0) throw DomainError("model: zero u vector");
  } else {
    const auto& g = std::get<GeneralCoupling>(coupling);
    if (g.q_g.rows() != da || g.q_g.cols() != db) throw DimensionError("model: q_g has wrong shape");
    if (!g.q_g.allFinite()) throw DomainError("model: q_g non-finite");
  }
  if (auto* s = std::get_if<ScalarWhite>(&noise)) {
    if (!(s->s_a >= 0) || !(s->s_b >= 0)) throw DomainError("model: negative noise strength");
    if (!std::isfinite(s->s_ab)) throw DomainError("model: s_ab non-finite");
    if (s->s_ab * s->s_ab > s->s_a * s->s_b * (1 + 1e-12))
      throw DomainError("model: s_ab^2 exceeds s_a*s_b");
  } else {
    const auto& m = std::get<MatrixWhite>(noise);
    check_block(m.q_a, da, "q_a");
    check_block(m.q_b, db, "q_b");
    check_psd(m.q_a, "q_a");
    check_psd(m.q_b, "q_b");
  }
}

Mat coupling_matrix(const SystemModel& model) {
  if (auto* r = std::get_if<Rank1Coupling>(&model.coupling))
    return r->k_g * r->u_a * r->u_b.transpose();
  return std::get<GeneralCoupling>(model.coupling).q_g;
}

Mat kossakowski_matrix(const SystemModel& model) {
  const int da = model.layout.dim_a(), db = model.layout.dim_b();
  Mat K = Mat::Zero(da + db, da + db);
  if (auto* s = std::get_if<ScalarWhite>(&model.noise)) {
    if (!model.is_rank1()) throw DomainError("scalar noise requires rank-1 coupling vectors");
    const auto& r = model.rank1();
    K.topLeftCorner(da, da) = s->s_a * r.u_a * r.u_a.transpose();
    K.bottomRightCorner(db, db) = s->s_b * r.u_b * r.u_b.transpose();
    K.topRightCorner(da, db) = s->s_ab * r.u_a * r.u_b.transpose();
    K.bottomLeftCorner(db, da) = K.topRightCorner(da, db).transpose();
  } else {
    const auto& m = std::get<MatrixWhite>(model.noise);
    K.topLeftCorner(da, da) = m.q_a;
    K.bottomRightCorner(db, db) = m.q_b;
  }
  return K;
}

Mat hamiltonian_matrix(const SystemModel& model) {
  const int da = model.layout.dim_a(), db = model.layout.dim_b();
  Mat G = Mat::Zero(da + db, da + db);
  G.topLeftCorner(da, da) = model.h_a;
  G.bottomRightCorner(db, db) = model.h_b;
  Mat Q = coupling_matrix(model);
  G.topRightCorner(da, db) = Q;
  G.bottomLeftCorner(db, da) = Q.transpose();
  return G;
}

static GkslGenerator assemble(const SystemModel& model) {
  Mat Om = build_form(model.layout);
  GkslGenerator g;
  g.hamiltonian_matrix = hamiltonian_matrix(model);
  g.drift = Om * g.hamiltonian_matrix;
  g.diffusion = symmetrize(Om * kossakowski_matrix(model) * Om.transpose());
  return g;
}

GkslGenerator build_rank1_generator(const SystemModel& model) {
  model.validate();
  if (!model.is_rank1()) throw DomainError("build_rank1_generator: coupling is not rank-1");
  if (!model.is_scalar_noise()) throw DomainError("build_rank1_generator: noise is not scalar white");
  return assemble(model);
}

GkslGenerator build_general_generator(const SystemModel& model) {
  model.validate();
  if (model.is_rank1()) throw DomainError("build_general_generator: coupling is rank-1");
  if (model.is_scalar_noise()) throw DomainError("build_general_generator: noise is not matrix white");
  return assemble(model);
}

GkslGenerator build_generator(const SystemModel& model) {
  model.validate();
  if (!model.is_rank1() && model.is_scalar_noise())
    throw DomainError("scalar noise requires rank-1 coupling vectors");
  return assemble(model);
}

SystemModel to_general(const SystemModel& model) {
  model.validate();
  SystemModel g = model;
  g.coupling = GeneralCoupling{coupling_matrix(model)};
  if (auto* s = std::get_if<ScalarWhite>(&model.noise)) {
    if (s->s_ab != 0.0) throw DomainError("to_general: correlated noise has no matrix-white form");
    const auto& r = model.rank1();
    g.noise = MatrixWhite{s->s_a * r.u_a * r.u_a.transpose(), s->s_b * r.u_b * r.u_b.transpose()};
  }
  return g;
}

Mat moment_equations(const GkslGenerator& gen, const Mat& V) {
  if (V.rows() != gen.drift.rows() || V.cols() != gen.drift.cols())
    throw DimensionError("moment_equations: shape mismatch");
  return gen.drift * V + V * gen.drift.transpose() + gen.diffusion;
}

SystemModel make_rank1_model(const ModeLayout& layout, const Mat& h_a, const Mat& h_b, double k_g,
                             const Vec& u_a, const Vec& u_b, double s_a, double s_b, double s_ab) {
  SystemModel m;
  m.layout = layout;
  m.h_a = h_a;
  m.h_b = h_b;
  m.coupling = Rank1Coupling{k_g, u_a, u_b};
  m.noise = ScalarWhite{s_a, s_b, s_ab};
  m.validate();
  return m;
}

Vec position_vector(int modes, int mode) {
  Vec u = Vec::Zero(2 * modes);
  u(2 * mode) = 1.0;
  return u;
}

}  // namespace gausep
