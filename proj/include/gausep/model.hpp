#pragma once

#include "gausep/symplectic.hpp"

#include <variant>

namespace gausep {

struct Rank1Coupling {
  double k_g = 0.0;
  Vec u_a;
  Vec u_b;
};

struct GeneralCoupling {
  Mat q_g;  // 2n_A x 2n_B
};

using CouplingSpec = std::variant<Rank1Coupling, GeneralCoupling>;

struct ScalarWhite {
  double s_a = 0.0;
  double s_b = 0.0;
  double s_ab = 0.0;
};

struct MatrixWhite {
  Mat q_a;
  Mat q_b;
};

using NoiseSpectrum = std::variant<ScalarWhite, MatrixWhite>;

// H = 1/2 xi^T G xi with G = [[h_a, Q_G], [Q_G^T, h_b]].
struct SystemModel {
  ModeLayout layout;
  Mat h_a;
  Mat h_b;
  CouplingSpec coupling;
  NoiseSpectrum noise;

  bool is_rank1() const { return std::holds_alternative<Rank1Coupling>(coupling); }
  bool is_scalar_noise() const { return std::holds_alternative<ScalarWhite>(noise); }
  const Rank1Coupling& rank1() const { return std::get<Rank1Coupling>(coupling); }
  const ScalarWhite& scalar_noise() const { return std::get<ScalarWhite>(noise); }
  void validate() const;
};

struct GkslGenerator {
  Mat drift;
  Mat diffusion;
  Mat hamiltonian_matrix;
};

// Coupling block Q_G (2n_A x 2n_B) for either coupling variant.
Mat coupling_matrix(const SystemModel& model);
// Kossakowski matrix K of sum_ij K_ij (xi_i rho xi_j - 1/2 {xi_j xi_i, rho}).
Mat kossakowski_matrix(const SystemModel& model);
Mat hamiltonian_matrix(const SystemModel& model);

GkslGenerator build_rank1_generator(const SystemModel& model);
GkslGenerator build_general_generator(const SystemModel& model);
GkslGenerator build_generator(const SystemModel& model);

// Rank1 + uncorrelated scalar noise as General + MatrixWhite.
SystemModel to_general(const SystemModel& model);

Mat moment_equations(const GkslGenerator& gen, const Mat& V);

// Free oscillators of unit frequency: h = I.
SystemModel make_rank1_model(const ModeLayout& layout, const Mat& h_a, const Mat& h_b, double k_g,
                             const Vec& u_a, const Vec& u_b, double s_a, double s_b,
                             double s_ab = 0.0);
Vec position_vector(int modes, int mode = 0);

}  // namespace gausep
