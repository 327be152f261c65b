#include "gausep/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace gausep {

Mat expm(const Mat& A) {
  require_square(A, "expm");
  const Eigen::Index n = A.rows();
  if (n == 0) return A;
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) return Mat::Identity(n, n);
  int s = 0;
  if (norm1 > theta13) s = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
  Mat As = A / std::ldexp(1.0, s);
  Mat I = Mat::Identity(n, n);
  Mat A2 = As * As, A4 = A2 * A2, A6 = A4 * A2;
  Mat U = As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  Mat V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  Mat R = (V - U).partialPivLu().solve(V + U);
  for (int k = 0; k < s; ++k) R = R * R;
  return R;
}

Mat sandwich_integral(const Mat& X, const Mat& W, const Mat& Y, double t) {
  const Eigen::Index n = X.rows(), m = Y.rows();
  if (W.rows() != n || W.cols() != m) throw DimensionError("sandwich_integral: shape");
  Mat Z = Mat::Zero(n + m, n + m);
  Z.topLeftCorner(n, n) = -X;
  Z.topRightCorner(n, m) = W;
  Z.bottomRightCorner(m, m) = Y;
  Mat E = expm(Z * t);
  return expm(X * t) * E.topRightCorner(n, m);
}

Mat symmetrize(const Mat& A) { return 0.5 * (A + A.transpose()); }

double max_abs(const Mat& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

Mat psd_sqrt(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(A));
  Vec d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Mat psd_pinv_sqrt(const Mat& A, double rel_cut, int* rank) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(A));
  const Vec& ev = es.eigenvalues();
  double scale = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  Vec d = Vec::Zero(ev.size());
  int r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > rel_cut * scale && ev(i) > 0) {
      d(i) = 1.0 / std::sqrt(ev(i));
      ++r;
    }
  }
  if (rank) *rank = r;
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

double min_eig_sym(const Mat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(A), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double min_eig_herm(const CMat& A) {
  if (A.size() == 0) return 0.0;
  CMat H = 0.5 * (A + A.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

void require_square(const Mat& A, const std::string& what) {
  if (A.rows() != A.cols()) throw DimensionError(what + ": matrix not square");
}

void require_finite(const Mat& A, const std::string& what) {
  if (!A.allFinite()) throw DomainError(what + ": non-finite entries");
}

}  // namespace gausep
