#pragma once

#include "gausep/locc.hpp"

#include <Eigen/SparseCore>
#include <complex>
#include <vector>

namespace gausep {

using cplx = std::complex<double>;
using SpCMat = Eigen::SparseMatrix<cplx>;

struct FockConfig {
  int cutoff = 12;
  int modes = 2;
  double dt = 0.0;  // 0: choose 1e-3 / max coefficient
  double leakage_threshold = 1e-6;

  void validate() const;
};

// Quadratures x = (a + a^dag)/sqrt2, p = (a - a^dag)/(i sqrt2), interleaved.
struct FockSpace {
  int cutoff = 0;
  int modes = 0;
  std::vector<SpCMat> xi;

  explicit FockSpace(const FockConfig& cfg);
  int dim() const;
  SpCMat identity() const;
  // sum_k c_k xi_k
  SpCMat linear(const Vec& c) const;
  // 1/2 xi^T G xi
  SpCMat quadratic(const Mat& G) const;
};

CMat annihilation(int cutoff);

// H plus dissipator written through the Kossakowski matrix:
// sum_ij K_ij (xi_i rho xi_j - 1/2 {xi_j xi_i, rho}).
struct FockGenerator {
  SpCMat H;
  std::vector<SpCMat> jump;    // eigen-jump operators of K
  std::vector<double> rate;    // eigenvalues of K
  double max_coefficient = 0;  // max |G_ij|, |K_ij|
};

FockGenerator fock_generator(const FockSpace& space, const Mat& hamiltonian, const Mat& kossakowski);
FockGenerator fock_generator(const FockSpace& space, const GkslGenerator& gen);
FockGenerator fock_generator(const FockSpace& space, const SystemModel& model);

CMat lindblad_rhs(const FockGenerator& gen, const CMat& rho);

struct LindbladResult {
  CMat rho;
  double max_leakage = 0;
  bool leakage_exceeded = false;
  int steps = 0;
  double dt = 0;
};

LindbladResult lindblad_integrate(const FockSpace& space, const FockGenerator& gen, const CMat& rho0, double t,
                                  double dt = 0.0, double leakage_threshold = 1e-6);

// Largest population of the top Fock level over the modes.
double top_level_population(const FockSpace& space, const CMat& rho);

GaussianState extract_covariance(const FockSpace& space, const CMat& rho);

struct KrausStepResult {
  CMat rho;
  double trace_renormalization = 0;  // |tr - 1| before renormalizing
  int quadrature_order = 0;
};

// Numerically averaged measurement-feedback map of one channel in the
// eigenbasis of the truncated X_A, X_B.  Needs a 1+1 mode space.
KrausStepResult kraus_average_step(const FockSpace& space, const Rank1Channel& ch, const CMat& rho, double dt);

// One Trotter step of a 1+1 protocol: every channel in order, then the
// local unitary exp(-i H_loc dt).
KrausStepResult kraus_protocol_step(const FockSpace& space, const LoccProtocol& protocol, const CMat& rho, double dt);

// Physicists' Gauss-Hermite rule, weight exp(-z^2).
void gauss_hermite(int order, std::vector<double>& nodes, std::vector<double>& weights);

double log_negativity_dense(const FockSpace& space, const CMat& rho);
CMat partial_transpose_dense(const FockSpace& space, const CMat& rho);

CMat pure_density(const CVec& psi);
CVec fock_vacuum(const FockSpace& space);
CVec coherent_state(int cutoff, cplx alpha);
CVec squeezed_vacuum(int cutoff, double r);
CVec two_mode_squeezed_vacuum(int cutoff, double r);
CVec kron(const CVec& a, const CVec& b);

}  // namespace gausep
