#include "gausep/separability.hpp"

#include <algorithm>
#include <cmath>

namespace gausep {

PptTwoMode ppt_two_mode(const Mat& V, double tol) {
  if (V.rows() != 4 || V.cols() != 4) throw DimensionError("ppt_two_mode: need a 1+1 mode covariance");
  const double dA = V.topLeftCorner(2, 2).determinant();
  const double dB = V.bottomRightCorner(2, 2).determinant();
  const double dC = V.topRightCorner(2, 2).determinant();
  const double dV = V.determinant();
  const double delta = dA + dB - 2 * dC;
  const double disc = std::max(0.0, delta * delta - 4 * dV);
  PptTwoMode out;
  out.nu_tilde_minus = std::sqrt(std::max(0.0, 0.5 * (delta - std::sqrt(disc))));
  out.separable = out.nu_tilde_minus >= 0.5 - tol;
  return out;
}

PptMultimode ppt_multimode(const Mat& V, const ModeLayout& layout, double tol) {
  auto spec = symplectic_spectrum(partial_transpose(V, layout));
  PptMultimode out;
  out.min_sympl_eig = spec.front();
  out.npt = out.min_sympl_eig < 0.5 - tol;
  if (out.npt)
    out.verdict = PptVerdict::Npt;
  else if (layout.n_a == 1 || layout.n_b == 1)
    out.verdict = PptVerdict::Separable;
  else
    out.verdict = PptVerdict::Inconclusive;
  return out;
}

double log_negativity(const Mat& V, const ModeLayout& layout) {
  double en = 0;
  for (double nu : symplectic_spectrum(partial_transpose(V, layout)))
    if (nu < 0.5) en += -std::log2(2 * nu);
  return en;
}

const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::Rank1: return "rank1";
    case BoundKind::Rank1Correlated: return "rank1_correlated";
    case BoundKind::GeneralMatrix: return "general_matrix";
    case BoundKind::Damped: return "damped";
    case BoundKind::StringentNS: return "stringent_ns";
  }
  return "?";
}

ThresholdVerdict threshold(const SystemModel& model, double tol_margin) {
  model.validate();
  ThresholdVerdict v;
  if (model.is_rank1() && model.is_scalar_noise()) {
    const auto& s = model.scalar_noise();
    const double K = model.rank1().k_g;
    if (s.s_ab != 0.0) {
      v.bound_kind = BoundKind::Rank1Correlated;
      v.margin = s.s_a * s.s_b - K * K - s.s_ab * s.s_ab;
    } else {
      v.bound_kind = BoundKind::Rank1;
      v.margin = s.s_a * s.s_b - K * K;
    }
  } else {
    SystemModel g = to_general(model);
    const auto& q = std::get<MatrixWhite>(g.noise);
    const int da = g.layout.dim_a(), db = g.layout.dim_b();
    Mat B(da + db, da + db);
    B.topLeftCorner(da, da) = q.q_a;
    B.bottomRightCorner(db, db) = q.q_b;
    B.topRightCorner(da, db) = coupling_matrix(g);
    B.bottomLeftCorner(db, da) = coupling_matrix(g).transpose();
    v.bound_kind = BoundKind::GeneralMatrix;
    v.margin = min_eig_sym(B);
  }
  v.satisfied = v.margin >= -tol_margin;
  return v;
}

ThresholdVerdict stringent_ns_check(const ShapeFunctions& shapes, double s_a, double s_b, double s_ab,
                                    double k_g, double tol_margin) {
  ThresholdVerdict v;
  v.bound_kind = BoundKind::StringentNS;
  v.margin = s_a * s_b - shapes.rho_sq * (k_g * k_g + s_ab * s_ab);
  v.satisfied = v.margin >= -tol_margin;
  v.necessary_and_sufficient = std::abs(shapes.rho_sq - 1.0) <= 1e-12;
  return v;
}

}  // namespace gausep
