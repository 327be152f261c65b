#include "gausep/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace gausep {

void ModeLayout::validate() const {
  if (n_a < 1) throw DimensionError("layout: n_a must be >= 1");
  if (n_b < 0) throw DimensionError("layout: n_b must be >= 0");
}

Mat eta() {
  Mat e(2, 2);
  e << 0, 1, -1, 0;
  return e;
}

Mat build_form(int modes) {
  Mat W = Mat::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    W(2 * k, 2 * k + 1) = 1.0;
    W(2 * k + 1, 2 * k) = -1.0;
  }
  return W;
}

Mat build_form(const ModeLayout& layout) {
  layout.validate();
  return build_form(layout.modes());
}

static int modes_of(const Mat& V) {
  require_square(V, "covariance");
  if (V.rows() % 2) throw DimensionError("covariance: odd dimension");
  return static_cast<int>(V.rows() / 2);
}

double default_tol_psd(const Mat& V) { return 1e-9 * std::max(1.0, max_abs(V)); }

double physicality_margin(const Mat& V) {
  int n = modes_of(V);
  CMat H = V.cast<std::complex<double>>();
  H += std::complex<double>(0, 0.5) * build_form(n).cast<std::complex<double>>();
  return min_eig_herm(H);
}

bool is_physical(const Mat& V, double tol) { return physicality_margin(V) >= -tol; }
bool is_physical(const Mat& V) { return is_physical(V, default_tol_psd(V)); }

namespace {

// Fix the global phase of z: largest component (lowest index on ties)
// becomes +i|z_j| on an x slot, real positive on a p slot.
void normalize_phase(CVec& z) {
  Eigen::Index j = 0;
  double best = -1;
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    double a = std::abs(z(k));
    if (a > best * (1 + 1e-10) + 1e-14) {
      best = a;
      j = k;
    }
  }
  std::complex<double> target = (j % 2 == 0) ? std::complex<double>(0, 1) : std::complex<double>(1, 0);
  z *= target * std::conj(z(j)) / std::abs(z(j));
}

}  // namespace

WilliamsonDecomposition williamson(const Mat& V) {
  const int n = modes_of(V);
  require_finite(V, "williamson");
  Mat Vs = symmetrize(V);
  Eigen::SelfAdjointEigenSolver<Mat> es(Vs);
  if (es.eigenvalues()(0) <= 0) throw DomainError("williamson: input not positive definite");
  Mat W = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  Mat Winv = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
             es.eigenvectors().transpose();

  Mat Om = build_form(n);
  CMat H = std::complex<double>(0, 1) * (W * Om * W).cast<std::complex<double>>();
  H = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> hs(H);
  // ascending: indices n..2n-1 are the positive branch
  std::vector<double> nu(n);
  CMat Z(2 * n, n);
  for (int k = 0; k < n; ++k) {
    nu[k] = hs.eigenvalues()(2 * n - 1 - k);
    Z.col(k) = hs.eigenvectors().col(2 * n - 1 - k);
  }

  // re-derive a deterministic basis inside each degenerate cluster
  const double scale = std::max(nu[0], 1e-300);
  const double dtol = 1e-9 * scale;
  int k0 = 0;
  while (k0 < n) {
    int k1 = k0 + 1;
    while (k1 < n && std::abs(nu[k1] - nu[k0]) < dtol) ++k1;
    const int m = k1 - k0;
    if (m == 1) {
      CVec z = Z.col(k0);
      normalize_phase(z);
      Z.col(k0) = z;
    } else {
      CMat Zc = Z.middleCols(k0, m);
      CMat P = Zc * Zc.adjoint();
      std::vector<CVec> basis;
      for (int j = 0; j < 2 * n && static_cast<int>(basis.size()) < m; ++j) {
        CVec v = P.col(j);
        for (const auto& b : basis) v -= b * b.dot(v);
        for (const auto& b : basis) v -= b * b.dot(v);
        double nv = v.norm();
        if (nv < 1e-6) continue;
        v /= nv;
        normalize_phase(v);
        basis.push_back(v);
      }
      if (static_cast<int>(basis.size()) != m) throw DomainError("williamson: degenerate basis failed");
      double mean = 0;
      for (int k = k0; k < k1; ++k) mean += nu[k];
      mean /= m;
      for (int i = 0; i < m; ++i) {
        Z.col(k0 + i) = basis[i];
        nu[k0 + i] = mean;
      }
    }
    k0 = k1;
  }

  // O columns (b_k, a_k) with z_k = (a_k + i b_k)/sqrt2
  Mat O(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    Vec a = std::sqrt(2.0) * Z.col(k).real();
    Vec b = std::sqrt(2.0) * Z.col(k).imag();
    O.col(2 * k) = b;
    O.col(2 * k + 1) = a;
  }
  Vec d(2 * n);
  for (int k = 0; k < n; ++k) d(2 * k) = d(2 * k + 1) = std::sqrt(nu[k]);
  WilliamsonDecomposition out;
  out.S = d.asDiagonal() * O.transpose() * Winv;
  out.nu = nu;
  return out;
}

Mat partial_transpose(const Mat& V, const ModeLayout& layout) {
  layout.validate();
  if (layout.n_b < 1) throw DimensionError("partial_transpose: n_b must be >= 1");
  if (V.rows() != layout.dim() || V.cols() != layout.dim())
    throw DimensionError("partial_transpose: dimension mismatch with layout");
  Vec p = Vec::Ones(layout.dim());
  for (int k = layout.n_a; k < layout.modes(); ++k) p(2 * k + 1) = -1.0;
  return p.asDiagonal() * V * p.asDiagonal();
}

std::vector<double> symplectic_spectrum(const Mat& V) {
  const int n = modes_of(V);
  Mat W = psd_sqrt(V);
  CMat H = std::complex<double>(0, 1) * (W * build_form(n) * W).cast<std::complex<double>>();
  H = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> hs(H, Eigen::EigenvaluesOnly);
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    // pair the k-th smallest positive with the k-th largest negative
    double pos = hs.eigenvalues()(n + k);
    double neg = -hs.eigenvalues()(n - 1 - k);
    out[k] = 0.5 * (std::abs(pos) + std::abs(neg));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_symplectic(const Mat& S, double tol) {
  require_square(S, "is_symplectic");
  Mat Om = build_form(static_cast<int>(S.rows() / 2));
  return max_abs(S * Om * S.transpose() - Om) < tol;
}

Mat direct_sum(const Mat& A, const Mat& B) {
  Mat R = Mat::Zero(A.rows() + B.rows(), A.cols() + B.cols());
  R.topLeftCorner(A.rows(), A.cols()) = A;
  R.bottomRightCorner(B.rows(), B.cols()) = B;
  return R;
}

}  // namespace gausep
