#include "gausep/separability.hpp"

#include <algorithm>
#include <cmath>

namespace gausep {

namespace {

struct Pieces {
  LocalFrame frame;
  Mat Ma, Mb;     // rotated local drifts
  Mat ea, eb;     // local symplectic forms
  Mat La, Lb, X;  // 2x2 cores
  double s_a, s_b, s_ab, k;
  double t;
};

Mat abs_sym2(const Mat& X) {
  Eigen::SelfAdjointEigenSolver<Mat> es(X);
  return es.eigenvectors() * es.eigenvalues().cwiseAbs().asDiagonal() * es.eigenvectors().transpose();
}

Pieces setup(const SystemModel& model, const Mat& V0, double t) {
  check_perturbative_regime(model, t);
  Pieces p;
  p.frame = local_frame(model, V0);
  const int da = model.layout.dim_a(), db = model.layout.dim_b();
  if (db == 0) throw DimensionError("certificate: n_b must be >= 1");
  p.Ma = p.frame.M_prime.topLeftCorner(da, da);
  p.Mb = p.frame.M_prime.bottomRightCorner(db, db);
  p.ea = build_form(model.layout.n_a);
  p.eb = build_form(model.layout.n_b);
  const auto& s = model.scalar_noise();
  p.s_a = s.s_a;
  p.s_b = s.s_b;
  p.s_ab = s.s_ab;
  p.k = model.rank1().k_g;
  p.t = t;
  p.X = Mat(2, 2);
  p.X << 0, p.k / 2, p.k / 2, p.s_ab;
  const double tau = std::hypot(p.k, p.s_ab);
  if (p.s_ab == 0.0 || tau == 0.0) {
    p.La = 0.5 * p.s_a * Mat::Identity(2, 2);
    p.Lb = 0.5 * p.s_b * Mat::Identity(2, 2);
  } else {
    Mat aX = abs_sym2(p.X);
    p.La = p.s_a / tau * aX;
    p.Lb = p.s_b / tau * aX;
  }
  return p;
}

// int R_x L R_y^T ds, with R = (v, eta v) and P = int v_x v_y^T ds.
Mat r_sandwich(const Mat& P, const Mat& L, const Mat& ex, const Mat& ey) {
  return L(0, 0) * P + L(0, 1) * P * ey.transpose() + L(1, 0) * ex * P + L(1, 1) * ex * P * ey.transpose();
}

Mat core_matrix(const Pieces& p) {
  Mat C(4, 4);
  C << p.La, p.X, p.X.transpose(), p.Lb;
  return C;
}

struct Integrals {
  Mat Paa, Pab, Pbb;
};

Integrals integrals(const Pieces& p) {
  const Vec& wa = p.frame.w_a;
  const Vec& wb = p.frame.w_b;
  Integrals I;
  I.Paa = sandwich_integral(p.Ma.transpose(), wa * wa.transpose(), p.Ma, p.t);
  I.Pab = sandwich_integral(p.Ma.transpose(), wa * wb.transpose(), p.Mb, p.t);
  I.Pbb = sandwich_integral(p.Mb.transpose(), wb * wb.transpose(), p.Mb, p.t);
  return I;
}

Mat n_rotated(const Pieces& p, const Integrals& I) {
  const Eigen::Index da = p.Ma.rows(), db = p.Mb.rows();
  Mat N(da + db, da + db);
  N.topLeftCorner(da, da) = r_sandwich(I.Paa, p.La, p.ea, p.ea);
  N.bottomRightCorner(db, db) = r_sandwich(I.Pbb, p.Lb, p.eb, p.eb);
  N.topRightCorner(da, db) = r_sandwich(I.Pab, p.X, p.ea, p.eb);
  N.bottomLeftCorner(db, da) = N.topRightCorner(da, db).transpose();
  return symmetrize(N);
}

Mat delta_v(const Pieces& p, const Integrals& I) {
  Mat Da = p.La, Db = p.Lb;
  Da(1, 1) -= p.s_a;
  Db(1, 1) -= p.s_b;
  return direct_sum(symmetrize(r_sandwich(I.Paa, Da, p.ea, p.ea)), symmetrize(r_sandwich(I.Pbb, Db, p.eb, p.eb)));
}

}  // namespace

Mat conjugated_first_order_state(const SystemModel& model, const Mat& V0, double t) {
  Pieces p = setup(model, V0, t);
  Integrals I = integrals(p);
  const Eigen::Index n = p.Ma.rows() + p.Mb.rows();
  return 0.5 * Mat::Identity(n, n) + n_rotated(p, I);
}

CertificateResult certificate_first_order(const SystemModel& model, double t, const CertificateOptions& opt) {
  return certificate_first_order(model, vacuum(model.layout.modes()), t, opt);
}

CertificateResult certificate_first_order(const SystemModel& model, const Mat& V0, double t,
                                          const CertificateOptions& opt) {
  Pieces p = setup(model, V0, t);
  const Eigen::Index da = p.Ma.rows(), db = p.Mb.rows();
  const Mat core = core_matrix(p);
  const double scale = std::max({p.s_a, p.s_b, std::abs(p.k), std::abs(p.s_ab), 1e-300});
  CertificateResult res;

  // Gram route: G S G at sample points, then a dense solve of U S U^T.
  double gram_min = INFINITY, dense_min = INFINITY;
  Mat worst_block(2, 2);
  double worst_block_eig = INFINITY;
  const bool uncorrelated = p.s_ab == 0.0;
  const int ns = std::max(2, opt.gram_samples);
  for (int j = 0; j < ns; ++j) {
    const double s = p.t * j / (ns - 1);
    Vec va = expm(p.Ma.transpose() * s) * p.frame.w_a;
    Vec vb = expm(p.Mb.transpose() * s) * p.frame.w_b;
    Mat U = Mat::Zero(da + db, 4);
    U.block(0, 0, da, 1) = va;
    U.block(0, 1, da, 1) = p.ea * va;
    U.block(da, 2, db, 1) = vb;
    U.block(da, 3, db, 1) = p.eb * vb;
    Mat G = U.transpose() * U;
    Mat GSG = G * core * G;
    const double norm_scale = std::max(G.diagonal().maxCoeff(), 1e-300);
    const double gscale = scale * norm_scale * norm_scale;
    if (uncorrelated) {
      Mat b1(2, 2), b2(2, 2);
      b1 << GSG(0, 0), GSG(0, 3), GSG(3, 0), GSG(3, 3);
      b2 << GSG(1, 1), GSG(1, 2), GSG(2, 1), GSG(2, 2);
      for (const Mat* b : {&b1, &b2}) {
        double e = min_eig_sym(*b) / gscale;
        if (e < worst_block_eig) {
          worst_block_eig = e;
          worst_block = *b;
        }
        gram_min = std::min(gram_min, e);
      }
    } else {
      gram_min = std::min(gram_min, min_eig_sym(GSG) / gscale);
    }
    dense_min = std::min(dense_min, min_eig_sym(U * core * U.transpose()) / (scale * norm_scale));
  }

  const double core_min = min_eig_sym(core) / scale;
  const bool gram_ok = gram_min >= -opt.tol;
  const bool dense_ok = dense_min >= -opt.tol;
  if (!gram_ok || !dense_ok || core_min < -opt.tol) {
    CertificateFailure f;
    if (uncorrelated) {
      f.block = worst_block;
      f.min_eig = worst_block_eig;
    } else {
      const double tau = std::hypot(p.k, p.s_ab);
      const double lp = 0.5 * (p.s_ab + tau), lm = 0.5 * (p.s_ab - tau);
      Mat bp(2, 2), bm(2, 2);
      bp << p.s_a / tau, 1, 1, p.s_b / tau;
      bm << p.s_a / tau, -1, -1, p.s_b / tau;
      bp *= std::abs(lp);
      bm *= std::abs(lm);
      f.block = min_eig_sym(bp) <= min_eig_sym(bm) ? bp : bm;
      f.min_eig = min_eig_sym(f.block);
    }
    f.reason = "noise-coupling block not PSD (min eigenvalue " + std::to_string(core_min * scale) + ")";
    res.failure = f;
    return res;
  }

  Integrals I = integrals(p);
  Mat Nr = n_rotated(p, I);
  Mat dV = delta_v(p, I);
  const Eigen::Index n = da + db;
  Mat sigma_final = 0.5 * Mat::Identity(n, n) - dV;
  PerturbativeResult pv = perturbative_v(model, V0, t);

  Mat Sinv = p.frame.S_inv;
  const Mat& R = pv.R;
  auto to_lab = [&](const Mat& A) { return symmetrize(Sinv * R * A * R.transpose() * Sinv.transpose()); };

  SeparabilityCertificate c;
  Mat sig = to_lab(sigma_final);
  c.sigma_a = sig.topLeftCorner(da, da);
  c.sigma_b = sig.bottomRightCorner(db, db);
  c.N = to_lab(Nr);
  c.V = pv.lab();
  c.frame = "lab";
  c.residual = max_abs(c.V - direct_sum(c.sigma_a, c.sigma_b) - c.N);
  c.min_eig_n = min_eig_sym(c.N);
  c.phys_margin_a = physicality_margin(c.sigma_a);
  c.phys_margin_b = physicality_margin(c.sigma_b);
  c.gram_min_eig = gram_min;
  c.dense_min_eig = dense_min;
  res.certificate = std::move(c);
  return res;
}

}  // namespace gausep
