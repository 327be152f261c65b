#include "gausep/locc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gausep {

namespace {

bool finite(double x) { return std::isfinite(x); }

Mat outer(const Vec& a, const Vec& b) { return a * b.transpose(); }

double root_factor(double disc, Branch b) {
  const double r = std::sqrt(std::max(0.0, disc));
  return b == Branch::Plus ? 1.0 + r : 1.0 - r;
}

}  // namespace

void Rank1Channel::validate() const {
  if (!(gamma_a > 0) || !(gamma_b > 0) || !finite(gamma_a) || !finite(gamma_b))
    throw DomainError("Rank1Channel: gamma must be positive and finite");
  if (!finite(lambda) || !finite(kappa_a) || !finite(kappa_b)) throw DomainError("Rank1Channel: non-finite gain");
  require_finite(x_a, "Rank1Channel x_a");
  require_finite(x_b, "Rank1Channel x_b");
}

void LoccProtocol::validate() const {
  layout.validate();
  const int n = layout.dim();
  if (local_unitary_generator.rows() != n || local_unitary_generator.cols() != n)
    throw DimensionError("LoccProtocol: local generator shape");
  const int da = layout.dim_a(), db = layout.dim_b();
  if (max_abs(local_unitary_generator.topRightCorner(da, db)) != 0.0)
    throw DomainError("LoccProtocol: local generator couples A and B");
  if (trotter_steps < 1) throw DomainError("LoccProtocol: trotter_steps must be >= 1");
  for (const auto& ch : channels) {
    ch.validate();
    if (ch.x_a.size() != da || ch.x_b.size() != db) throw DimensionError("LoccProtocol: channel vector size");
  }
}

SymmetricSolution solve_symmetric(double s_a, double s_b, double k_g, Branch branch) {
  SymmetricSolution out;
  if (!(s_a > 0) || !(s_b > 0)) {
    out.reason = "S_A and S_B must be positive";
    return out;
  }
  if (s_a * s_b < k_g * k_g) {
    out.reason = "S_A S_B < K_g^2";
    return out;
  }
  const double f = root_factor(1.0 - k_g * k_g / (s_a * s_b), branch);
  out.gamma_a = 0.5 * s_a * f;
  out.gamma_b = 0.5 * s_b * f;
  if (!(out.gamma_a > 0) || !(out.gamma_b > 0)) {
    out.reason = "minus branch degenerates (gamma = 0)";
    return out;
  }
  out.feasible = true;
  return out;
}

CorrelatedSolution solve_correlated(double s_a, double s_b, double s_ab, double k_g, Branch branch) {
  CorrelatedSolution out;
  if (s_ab == 0.0) {
    auto s = solve_symmetric(s_a, s_b, k_g, branch);
    out.feasible = s.feasible;
    out.gamma_a = s.gamma_a;
    out.gamma_b = s.gamma_b;
    out.reason = s.reason;
    return out;
  }
  if (k_g == 0.0) {
    out.reason = "unsupported: K_g = 0 with S_AB != 0 (self-feedback pick divides by K_g)";
    return out;
  }
  if (!(s_a > 0) || !(s_b > 0)) {
    out.reason = "S_A and S_B must be positive";
    return out;
  }
  const double tau2 = k_g * k_g + s_ab * s_ab;
  if (s_a * s_b < tau2) {
    out.reason = "S_A S_B < K_g^2 + S_AB^2";
    return out;
  }
  const double f = root_factor(1.0 - tau2 / (s_a * s_b), branch);
  const double scale = 1.0 + s_ab * s_ab / (k_g * k_g);
  out.gamma_a = 0.5 * s_a * f / scale;
  out.gamma_b = 0.5 * s_b * f / scale;
  if (!(out.gamma_a > 0) || !(out.gamma_b > 0)) {
    out.reason = "minus branch degenerates (gamma = 0)";
    return out;
  }
  out.kappa_a = 2 * out.gamma_a * s_ab / k_g;
  out.kappa_b = 2 * out.gamma_b * s_ab / k_g;
  out.feasible = true;
  return out;
}

ChannelCoefficients channel_coefficients(const Rank1Channel& ch) {
  ChannelCoefficients c;
  c.lambda = ch.lambda;
  c.gamma_eff_a = ch.gamma_a + ch.lambda * ch.lambda / (4 * ch.gamma_b) + ch.kappa_a * ch.kappa_a / (4 * ch.gamma_a);
  c.gamma_eff_b = ch.gamma_b + ch.lambda * ch.lambda / (4 * ch.gamma_a) + ch.kappa_b * ch.kappa_b / (4 * ch.gamma_b);
  c.gamma_ab = ch.lambda * ch.kappa_a / (4 * ch.gamma_a) + ch.lambda * ch.kappa_b / (4 * ch.gamma_b);
  return c;
}

namespace {

// Quadratic Hamiltonian form and Kossakowski matrix of one channel.
void channel_forms(const Rank1Channel& ch, const ModeLayout& layout, Mat& G, Mat& K) {
  const int da = layout.dim_a(), db = layout.dim_b(), n = da + db;
  const ChannelCoefficients c = channel_coefficients(ch);
  G = Mat::Zero(n, n);
  K = Mat::Zero(n, n);
  G.topLeftCorner(da, da) = ch.kappa_a * outer(ch.x_a, ch.x_a);
  G.bottomRightCorner(db, db) = ch.kappa_b * outer(ch.x_b, ch.x_b);
  G.topRightCorner(da, db) = ch.lambda * outer(ch.x_a, ch.x_b);
  G.bottomLeftCorner(db, da) = G.topRightCorner(da, db).transpose();
  K.topLeftCorner(da, da) = c.gamma_eff_a * outer(ch.x_a, ch.x_a);
  K.bottomRightCorner(db, db) = c.gamma_eff_b * outer(ch.x_b, ch.x_b);
  K.topRightCorner(da, db) = c.gamma_ab * outer(ch.x_a, ch.x_b);
  K.bottomLeftCorner(db, da) = K.topRightCorner(da, db).transpose();
}

GkslGenerator from_forms(const Mat& G, const Mat& K, const ModeLayout& layout) {
  Mat Om = build_form(layout);
  GkslGenerator g;
  g.hamiltonian_matrix = G;
  g.drift = Om * G;
  g.diffusion = symmetrize(Om * K * Om.transpose());
  return g;
}

Mat kappa_cancellation(const std::vector<Rank1Channel>& channels, const ModeLayout& layout) {
  const int da = layout.dim_a(), db = layout.dim_b();
  Mat C = Mat::Zero(da + db, da + db);
  for (const auto& ch : channels) {
    C.topLeftCorner(da, da) -= ch.kappa_a * outer(ch.x_a, ch.x_a);
    C.bottomRightCorner(db, db) -= ch.kappa_b * outer(ch.x_b, ch.x_b);
  }
  return C;
}

}  // namespace

GkslGenerator channel_generator(const Rank1Channel& ch, const ModeLayout& layout) {
  Mat G, K;
  channel_forms(ch, layout, G, K);
  return from_forms(G, K, layout);
}

EffectiveGenerator effective_generator(const LoccProtocol& protocol) {
  protocol.validate();
  const int n = protocol.layout.dim();
  Mat G = protocol.local_unitary_generator;
  Mat K = Mat::Zero(n, n);
  EffectiveGenerator out;
  for (const auto& ch : protocol.channels) {
    Mat g, k;
    channel_forms(ch, protocol.layout, g, k);
    G += g;
    K += k;
    out.provenance.push_back(channel_coefficients(ch));
  }
  out.generator = from_forms(symmetrize(G), symmetrize(K), protocol.layout);
  return out;
}

GaussianState channel_step(const LoccProtocol& protocol, const Mat& V, const Vec& mean, double dt) {
  if (!(dt > 0)) throw DomainError("channel_step: dt must be positive");
  const int n = protocol.layout.dim();
  if (V.rows() != n || V.cols() != n || mean.size() != n) throw DimensionError("channel_step: state shape");
  GaussianState s{symmetrize(V), mean};
  for (const auto& ch : protocol.channels) {
    GkslGenerator g = channel_generator(ch, protocol.layout);
    PropagatorSolution p = propagate(g, dt);
    s.V = symmetrize(p.Phi * s.V * p.Phi.transpose() + p.accumulated_noise);
    s.mean = p.Phi * s.mean;
  }
  Mat U = expm(build_form(protocol.layout) * protocol.local_unitary_generator * dt);
  s.V = symmetrize(U * s.V * U.transpose());
  s.mean = U * s.mean;
  return s;
}

SynthesisResult synthesize_rank1(const SystemModel& model, Branch branch) {
  model.validate();
  if (!model.is_rank1() || !model.is_scalar_noise())
    throw DomainError("synthesize_rank1: rank-1 coupling with scalar noise required");
  const auto& r = model.rank1();
  const auto& s = model.scalar_noise();
  SynthesisResult out;
  out.rank_a = out.rank_b = 1;
  out.singular_values = {std::abs(r.k_g)};
  CorrelatedSolution sol = solve_correlated(s.s_a, s.s_b, s.s_ab, r.k_g, branch);
  if (!sol.feasible) {
    out.reason = sol.reason;
    return out;
  }
  Rank1Channel ch;
  ch.x_a = r.u_a;
  ch.x_b = r.u_b;
  ch.gamma_a = sol.gamma_a;
  ch.gamma_b = sol.gamma_b;
  ch.lambda = r.k_g;
  ch.kappa_a = sol.kappa_a;
  ch.kappa_b = sol.kappa_b;
  LoccProtocol p;
  p.layout = model.layout;
  p.channels.push_back(ch);
  p.local_unitary_generator = direct_sum(model.h_a, model.h_b) + kappa_cancellation(p.channels, p.layout);
  out.protocol = std::move(p);
  out.feasible = true;
  return out;
}

Mat whitened_coupling(const Mat& q_a, const Mat& q_b, const Mat& q_g, int* rank_a, int* rank_b) {
  return psd_pinv_sqrt(q_a, 1e-12, rank_a) * q_g * psd_pinv_sqrt(q_b, 1e-12, rank_b);
}

SynthesisResult synthesize_general(const SystemModel& model, Branch branch) {
  model.validate();
  if (!std::holds_alternative<MatrixWhite>(model.noise))
    throw DomainError("synthesize_general: matrix white noise required");
  const auto& q = std::get<MatrixWhite>(model.noise);
  const Mat q_g = coupling_matrix(model);
  const int da = model.layout.dim_a(), db = model.layout.dim_b();

  SynthesisResult out;
  Mat X = whitened_coupling(q.q_a, q.q_b, q_g, &out.rank_a, &out.rank_b);
  Mat Ra = psd_sqrt(q.q_a), Rb = psd_sqrt(q.q_b);
  const double qscale = std::max({max_abs(q.q_a), max_abs(q.q_b), max_abs(q_g), 1e-300});
  out.range_residual = max_abs(Ra * X * Rb - q_g);

  Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec sv = svd.singularValues();
  for (Eigen::Index k = 0; k < sv.size(); ++k) out.singular_values.push_back(sv(k));

  const double smax = sv.size() ? sv(0) : 0.0;
  if (out.range_residual > 1e-10 * qscale) {
    out.reason = "coupling leaves the range of the noise blocks (residual " + std::to_string(out.range_residual) + ")";
    return out;
  }
  if (smax > 1.0 + 1e-10) {
    out.reason = "max singular value of whitened coupling " + std::to_string(smax) + " > 1";
    return out;
  }

  const Mat Za = Ra * svd.matrixU();
  const Mat Zb = Rb * svd.matrixV();
  const double za_cut = 1e-12 * std::max(Za.cwiseAbs().maxCoeff(), 1e-300);
  const double zb_cut = 1e-12 * std::max(Zb.cwiseAbs().maxCoeff(), 1e-300);
  auto live = [](const Vec& v, double cut) { return v.norm() > cut; };

  LoccProtocol p;
  p.layout = model.layout;
  const Eigen::Index r = sv.size();
  for (Eigen::Index k = 0; k < r; ++k) {
    const double s = std::min(sv(k), 1.0);
    Vec za = Za.col(k), zb = Zb.col(k);
    if (!live(za, za_cut)) za.setZero();
    if (!live(zb, zb_cut)) zb.setZero();
    if (za.isZero(0) && zb.isZero(0)) continue;
    Rank1Channel ch;
    ch.x_a = za;
    ch.x_b = zb;
    if (s > 0 && !za.isZero(0) && !zb.isZero(0)) {
      const double g = 0.5 * root_factor(1.0 - s * s, branch);
      if (!(g > 0)) {
        out.reason = "minus branch degenerates at s_k = 1";
        return out;
      }
      ch.gamma_a = ch.gamma_b = g;
      ch.lambda = s;
    }
    p.channels.push_back(ch);
  }
  for (Eigen::Index k = r; k < da; ++k) {
    Vec za = Za.col(k);
    if (!live(za, za_cut)) continue;
    Rank1Channel ch;
    ch.x_a = za;
    ch.x_b = Vec::Zero(db);
    p.channels.push_back(ch);
  }
  for (Eigen::Index k = r; k < db; ++k) {
    Vec zb = Zb.col(k);
    if (!live(zb, zb_cut)) continue;
    Rank1Channel ch;
    ch.x_a = Vec::Zero(da);
    ch.x_b = zb;
    p.channels.push_back(ch);
  }
  p.local_unitary_generator = direct_sum(model.h_a, model.h_b);
  out.protocol = std::move(p);
  out.feasible = true;
  return out;
}

SynthesisResult synthesize(const SystemModel& model, Branch branch) {
  model.validate();
  if (model.is_rank1() && model.is_scalar_noise()) return synthesize_rank1(model, branch);
  if (std::holds_alternative<MatrixWhite>(model.noise)) {
    SystemModel g = model;
    g.coupling = GeneralCoupling{coupling_matrix(model)};
    return synthesize_general(g, branch);
  }
  throw DomainError("synthesize: general coupling with scalar noise is not a supported combination");
}

ThresholdVerdict damped_bound(const SystemModel& model, double d_aa, double d_ab, double d_ba, double d_bb,
                              double tol_margin) {
  model.validate();
  if (!model.is_rank1() || !model.is_scalar_noise())
    throw DomainError("damped_bound: rank-1 coupling with scalar noise required");
  const auto& s = model.scalar_noise();
  ThresholdVerdict v;
  v.bound_kind = BoundKind::Damped;
  if (s.s_ab != 0.0) {
    v.feasible = false;
    v.reason = "damped bound assumes uncorrelated noise";
    return v;
  }
  const double la = s.s_a - 2 * std::abs(d_aa), lb = s.s_b - 2 * std::abs(d_bb);
  const double rhs = std::abs(model.rank1().k_g) + std::abs(d_ab) + std::abs(d_ba);
  v.margin = la * lb - rhs * rhs;
  if (!(la > 0) || !(lb > 0)) {
    v.feasible = false;
    v.reason = "S_i - 2|d_ii| must be positive (A: " + std::to_string(la) + ", B: " + std::to_string(lb) + ")";
    return v;
  }
  v.satisfied = v.margin >= -tol_margin;
  return v;
}

OhmicCoefficients ohmic_d_coefficients(const SystemModel& model, double c2, double tol_parallel) {
  model.validate();
  if (!model.is_rank1()) throw DomainError("ohmic_d_coefficients: rank-1 coupling required");
  OhmicCoefficients out;
  out.parallel = true;
  if (c2 == 0.0) return out;
  const auto& r = model.rank1();
  const int da = model.layout.dim_a(), db = model.layout.dim_b();
  const Mat A = build_form(model.layout) * hamiltonian_matrix(model);
  const double ascale = std::max(max_abs(A), 1e-300);

  // D_ab ~ -u_a^T Phi'_ab(0) xi_b with Phi(tau) = exp(-A tau), so the
  // coefficient vector is A_ab^T u_a and must be parallel to u_b.
  auto coeff = [&](const Mat& blk, const Vec& u_row, const Vec& u_col, const char* name, double& d) {
    Vec c = blk.transpose() * u_row;
    const double proj = c.dot(u_col) / u_col.squaredNorm();
    const double dev_abs = (c - proj * u_col).norm();
    const double dev = dev_abs / std::max(c.norm(), 1e-300);
    const bool tiny = c.norm() <= 1e-14 * ascale * u_row.norm();
    const double dv = tiny ? 0.0 : dev;
    out.max_deviation = std::max(out.max_deviation, dv);
    if (dv > tol_parallel) {
      out.parallel = false;
      if (!out.diagnostic.empty()) out.diagnostic += "; ";
      out.diagnostic += std::string(name) + " not parallel (deviation " + std::to_string(dv) + ")";
    }
    d = c2 * proj;
  };
  coeff(A.topLeftCorner(da, da), r.u_a, r.u_a, "D_AA", out.d_aa);
  coeff(A.topRightCorner(da, db), r.u_a, r.u_b, "D_AB", out.d_ab);
  coeff(A.bottomLeftCorner(db, da), r.u_b, r.u_a, "D_BA", out.d_ba);
  coeff(A.bottomRightCorner(db, db), r.u_b, r.u_b, "D_BB", out.d_bb);
  if (!out.parallel) out.d_aa = out.d_ab = out.d_ba = out.d_bb = 0;
  return out;
}

}  // namespace gausep
