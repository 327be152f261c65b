#include "gausep/fock.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace gausep {

namespace {

const cplx I1(0.0, 1.0);

SpCMat to_sparse(const CMat& M) {
  SpCMat S = M.sparseView(cplx(1.0), 1e-300);
  S.makeCompressed();
  return S;
}

CMat kron_dense(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat herm(const CMat& A) { return 0.5 * (A + A.adjoint()); }

}  // namespace

void FockConfig::validate() const {
  if (cutoff < 4) throw DomainError("FockConfig: cutoff must be >= 4");
  if (modes != 1 && modes != 2) throw DomainError("FockConfig: 1 or 2 modes");
  if (dt < 0) throw DomainError("FockConfig: negative dt");
}

CMat annihilation(int cutoff) {
  CMat a = CMat::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

FockSpace::FockSpace(const FockConfig& cfg) : cutoff(cfg.cutoff), modes(cfg.modes) {
  cfg.validate();
  const CMat a = annihilation(cutoff);
  const CMat x = (a + a.adjoint()) / std::sqrt(2.0);
  const CMat p = (a - a.adjoint()) / (I1 * std::sqrt(2.0));
  const CMat id = CMat::Identity(cutoff, cutoff);
  if (modes == 1) {
    xi = {to_sparse(x), to_sparse(p)};
  } else {
    xi = {to_sparse(kron_dense(x, id)), to_sparse(kron_dense(p, id)), to_sparse(kron_dense(id, x)),
          to_sparse(kron_dense(id, p))};
  }
}

int FockSpace::dim() const { return modes == 1 ? cutoff : cutoff * cutoff; }

SpCMat FockSpace::identity() const {
  SpCMat I(dim(), dim());
  I.setIdentity();
  return I;
}

SpCMat FockSpace::linear(const Vec& c) const {
  if (c.size() != static_cast<Eigen::Index>(xi.size())) throw DimensionError("FockSpace::linear: size");
  SpCMat L(dim(), dim());
  for (std::size_t k = 0; k < xi.size(); ++k)
    if (c(k) != 0.0) L += cplx(c(k)) * xi[k];
  L.prune(cplx(0.0), 0.0);
  return L;
}

SpCMat FockSpace::quadratic(const Mat& G) const {
  const auto n = static_cast<Eigen::Index>(xi.size());
  if (G.rows() != n || G.cols() != n) throw DimensionError("FockSpace::quadratic: size");
  SpCMat H(dim(), dim());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (G(i, j) != 0.0) H += cplx(0.5 * G(i, j)) * (xi[i] * xi[j]);
  H.prune(cplx(0.0), 0.0);
  return H;
}

FockGenerator fock_generator(const FockSpace& space, const Mat& hamiltonian, const Mat& kossakowski) {
  FockGenerator g;
  g.H = space.quadratic(symmetrize(hamiltonian));
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(kossakowski));
  const double kscale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index m = 0; m < es.eigenvalues().size(); ++m) {
    const double lam = es.eigenvalues()(m);
    if (std::abs(lam) <= 1e-15 * kscale) continue;
    g.jump.push_back(space.linear(es.eigenvectors().col(m)));
    g.rate.push_back(lam);
  }
  g.max_coefficient = std::max(max_abs(hamiltonian), max_abs(kossakowski));
  return g;
}

FockGenerator fock_generator(const FockSpace& space, const GkslGenerator& gen) {
  const int modes = static_cast<int>(gen.drift.rows()) / 2;
  Mat Om = build_form(modes);
  return fock_generator(space, gen.hamiltonian_matrix, Om.transpose() * gen.diffusion * Om);
}

FockGenerator fock_generator(const FockSpace& space, const SystemModel& model) {
  if (model.layout.modes() != space.modes) throw DimensionError("fock_generator: mode count mismatch");
  return fock_generator(space, hamiltonian_matrix(model), kossakowski_matrix(model));
}

CMat lindblad_rhs(const FockGenerator& gen, const CMat& rho) {
  // rhs = F + F^dag
  CMat F = -I1 * (gen.H * rho);
  for (std::size_t m = 0; m < gen.jump.size(); ++m) {
    const SpCMat& L = gen.jump[m];
    CMat Lr = L * rho;
    F += gen.rate[m] * (0.5 * (Lr * L) - 0.5 * (L * Lr));
  }
  return F + F.adjoint();
}

double top_level_population(const FockSpace& space, const CMat& rho) {
  const int N = space.cutoff;
  if (space.modes == 1) return std::abs(rho(N - 1, N - 1).real());
  double pa = 0, pb = 0;
  for (int j = 0; j < N; ++j) {
    pa += rho((N - 1) * N + j, (N - 1) * N + j).real();
    pb += rho(j * N + N - 1, j * N + N - 1).real();
  }
  return std::max(std::abs(pa), std::abs(pb));
}

LindbladResult lindblad_integrate(const FockSpace& space, const FockGenerator& gen, const CMat& rho0, double t,
                                  double dt, double leakage_threshold) {
  if (t < 0) throw DomainError("lindblad_integrate: negative time");
  if (rho0.rows() != space.dim() || rho0.cols() != space.dim()) throw DimensionError("lindblad_integrate: rho shape");
  const double dt_cap = 1e-3 / std::max(gen.max_coefficient, 1e-300);
  if (!(dt > 0) || dt > dt_cap) dt = dt_cap;
  LindbladResult out;
  out.steps = t > 0 ? static_cast<int>(std::ceil(t / dt - 1e-12)) : 0;
  out.dt = out.steps > 0 ? t / out.steps : 0.0;
  CMat rho = herm(rho0);
  out.max_leakage = top_level_population(space, rho);
  const double h = out.dt;
  for (int s = 0; s < out.steps; ++s) {
    CMat k1 = lindblad_rhs(gen, rho);
    CMat k2 = lindblad_rhs(gen, rho + 0.5 * h * k1);
    CMat k3 = lindblad_rhs(gen, rho + 0.5 * h * k2);
    CMat k4 = lindblad_rhs(gen, rho + h * k3);
    rho = herm(rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    out.max_leakage = std::max(out.max_leakage, top_level_population(space, rho));
  }
  out.leakage_exceeded = out.max_leakage > leakage_threshold;
  out.rho = std::move(rho);
  return out;
}

GaussianState extract_covariance(const FockSpace& space, const CMat& rho) {
  const auto n = static_cast<Eigen::Index>(space.xi.size());
  GaussianState s;
  s.mean = Vec(n);
  s.V = Mat(n, n);
  for (Eigen::Index i = 0; i < n; ++i) s.mean(i) = (space.xi[i] * rho).trace().real();
  for (Eigen::Index i = 0; i < n; ++i) {
    CMat xr = space.xi[i] * rho;
    for (Eigen::Index j = i; j < n; ++j) {
      const double m2 = (space.xi[j] * xr).trace().real();  // tr(xi_j xi_i rho)
      s.V(i, j) = s.V(j, i) = m2 - s.mean(i) * s.mean(j);
    }
  }
  return s;
}

void gauss_hermite(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1) throw DomainError("gauss_hermite: order must be >= 1");
  Mat J = Mat::Zero(order, order);
  for (int k = 1; k < order; ++k) J(k - 1, k) = J(k, k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  const double sqpi = std::sqrt(M_PI);
  for (int k = 0; k < order; ++k) {
    nodes[k] = es.eigenvalues()(k);
    const double v = es.eigenvectors()(0, k);
    weights[k] = sqpi * v * v;
  }
}

namespace {

struct EigenOp {
  CMat W;  // columns: eigenvectors
  Vec a;   // eigenvalues
};

EigenOp diagonalize_single(int cutoff, const Vec& c) {
  const CMat am = annihilation(cutoff);
  const CMat x = (am + am.adjoint()) / std::sqrt(2.0);
  const CMat p = (am - am.adjoint()) / (I1 * std::sqrt(2.0));
  CMat X = c(0) * x + c(1) * p;
  Eigen::SelfAdjointEigenSolver<CMat> es(herm(X));
  return {es.eigenvectors(), es.eigenvalues()};
}

// Schur multiplier M[(i,j),(k,l)] = int dy K_ij(y) conj(K_kl(y)).
CMat kraus_multiplier(const Rank1Channel& ch, const Vec& a, const Vec& b, double dt, int order) {
  std::vector<double> z, w;
  gauss_hermite(order, z, w);
  const int N = static_cast<int>(a.size());
  const double sa = std::sqrt(2 * ch.gamma_a * dt), sb = std::sqrt(2 * ch.gamma_b * dt);
  std::vector<double> ya(order), yb(order);
  for (int m = 0; m < order; ++m) {
    ya[m] = z[m] / sa;
    yb[m] = z[m] / sb;
  }
  // Real Gaussian parts, indexed [i*N+k][m].
  auto gauss_part = [&](const Vec& e, const std::vector<double>& y, double g) {
    std::vector<double> G(static_cast<std::size_t>(N) * N * order);
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < N; ++k)
        for (int m = 0; m < order; ++m)
          G[(static_cast<std::size_t>(i) * N + k) * order + m] =
              w[m] / std::sqrt(M_PI) *
              std::exp(g * dt * (2 * y[m] * (e(i) + e(k)) - e(i) * e(i) - e(k) * e(k)));
    return G;
  };
  const std::vector<double> GA = gauss_part(a, ya, ch.gamma_a);
  const std::vector<double> GB = gauss_part(b, yb, ch.gamma_b);

  auto one_d = [&](const std::vector<double>& G, const std::vector<double>& y, int i, int k, double omega) {
    cplx acc = 0;
    const double* g = &G[(static_cast<std::size_t>(i) * N + k) * order];
    for (int m = 0; m < order; ++m) acc += g[m] * std::exp(-I1 * (omega * y[m]));
    return acc;
  };

  const int D = N * N;
  CMat M(D, D);
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      const double da = a(i) - a(k);
      for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l) {
          const double db = b(j) - b(l);
          const double om_a = dt * (ch.kappa_a * da + ch.lambda * db);
          const double om_b = dt * (ch.lambda * da + ch.kappa_b * db);
          M(i * N + j, k * N + l) = one_d(GA, ya, i, k, om_a) * one_d(GB, yb, j, l, om_b);
        }
    }
  return M;
}

}  // namespace

KrausStepResult kraus_average_step(const FockSpace& space, const Rank1Channel& ch, const CMat& rho, double dt) {
  ch.validate();
  if (space.modes != 2) throw DimensionError("kraus_average_step: needs two modes");
  if (ch.x_a.size() != 2 || ch.x_b.size() != 2) throw DimensionError("kraus_average_step: 1+1 channel vectors");
  if (!(dt > 0)) throw DomainError("kraus_average_step: dt must be positive");
  if (rho.rows() != space.dim()) throw DimensionError("kraus_average_step: rho shape");
  const int N = space.cutoff;
  EigenOp ea = diagonalize_single(N, ch.x_a);
  EigenOp eb = diagonalize_single(N, ch.x_b);
  CMat W = kron_dense(ea.W, eb.W);
  CMat re = W.adjoint() * rho * W;

  KrausStepResult out;
  CMat prev = kraus_multiplier(ch, ea.a, eb.a, dt, 20);
  out.quadrature_order = 20;
  bool converged = false;
  for (int order = 30; order <= 60; order += 10) {
    CMat next = kraus_multiplier(ch, ea.a, eb.a, dt, order);
    const double diff = (next - prev).cwiseAbs().maxCoeff();
    prev = std::move(next);
    out.quadrature_order = order;
    if (diff < 1e-13) {
      converged = true;
      break;
    }
  }
  if (!converged) throw RegimeError("kraus_average_step: quadrature did not converge by order 60");

  CMat out_e = re.cwiseProduct(prev);
  CMat r = herm(W * out_e * W.adjoint());
  const double tr = r.trace().real();
  out.trace_renormalization = std::abs(tr - 1.0);
  out.rho = r / tr;
  return out;
}

KrausStepResult kraus_protocol_step(const FockSpace& space, const LoccProtocol& protocol, const CMat& rho,
                                    double dt) {
  protocol.validate();
  if (protocol.layout.n_a != 1 || protocol.layout.n_b != 1)
    throw DimensionError("kraus_protocol_step: needs a 1+1 protocol");
  KrausStepResult out;
  out.rho = rho;
  for (const Rank1Channel& ch : protocol.channels) {
    KrausStepResult r = kraus_average_step(space, ch, out.rho, dt);
    out.rho = std::move(r.rho);
    out.trace_renormalization = std::max(out.trace_renormalization, r.trace_renormalization);
    out.quadrature_order = std::max(out.quadrature_order, r.quadrature_order);
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(herm(CMat(space.quadratic(protocol.local_unitary_generator))));
  CVec phase(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < phase.size(); ++k) phase(k) = std::exp(-I1 * (es.eigenvalues()(k) * dt));
  const CMat U = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  out.rho = herm(U * out.rho * U.adjoint());
  return out;
}

CMat partial_transpose_dense(const FockSpace& space, const CMat& rho) {
  if (space.modes != 2) throw DimensionError("partial_transpose_dense: needs two modes");
  const int N = space.cutoff;
  CMat out(rho.rows(), rho.cols());
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) out(i * N + j, k * N + l) = rho(i * N + l, k * N + j);
  return out;
}

double log_negativity_dense(const FockSpace& space, const CMat& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(herm(partial_transpose_dense(space, rho)), Eigen::EigenvaluesOnly);
  const double tn = es.eigenvalues().cwiseAbs().sum();
  return std::max(0.0, std::log2(tn / rho.trace().real()));
}

CMat pure_density(const CVec& psi) {
  CVec v = psi / psi.norm();
  return v * v.adjoint();
}

CVec kron(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CVec fock_vacuum(const FockSpace& space) {
  CVec v = CVec::Zero(space.dim());
  v(0) = 1.0;
  return v;
}

CVec coherent_state(int cutoff, cplx alpha) {
  CVec v(cutoff);
  cplx c = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < cutoff; ++n) {
    v(n) = c;
    c *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return v;
}

CVec squeezed_vacuum(int cutoff, double r) {
  CVec v = CVec::Zero(cutoff);
  const double t = -std::tanh(r);
  double c = 1.0 / std::sqrt(std::cosh(r));
  for (int m = 0; 2 * m < cutoff; ++m) {
    v(2 * m) = c;
    // c_{m+1}/c_m = t sqrt((2m+1)(2m+2)) / (2(m+1))
    c *= t * std::sqrt((2.0 * m + 1) * (2.0 * m + 2)) / (2.0 * (m + 1));
  }
  return v;
}

CVec two_mode_squeezed_vacuum(int cutoff, double r) {
  CVec v = CVec::Zero(cutoff * cutoff);
  const double t = std::tanh(r);
  double c = 1.0 / std::cosh(r);
  for (int n = 0; n < cutoff; ++n) {
    v(n * cutoff + n) = c;
    c *= t;
  }
  return v;
}

}  // namespace gausep
