#pragma once

#include "gausep/separability.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gausep {

// Measure X_A = xi_A . x_a and X_B = xi_B . x_b with strengths gamma,
// feed back lambda*y_B on A and lambda*y_A on B, plus self-feedback kappa.
struct Rank1Channel {
  Vec x_a;
  Vec x_b;
  double gamma_a = 1.0;
  double gamma_b = 1.0;
  double lambda = 0.0;
  double kappa_a = 0.0;
  double kappa_b = 0.0;

  void validate() const;
};

struct LoccProtocol {
  ModeLayout layout;
  std::vector<Rank1Channel> channels;
  // Quadratic form of the local Hamiltonian (h_A (+) h_B plus the
  // kappa cancellation terms); block diagonal.
  Mat local_unitary_generator;
  int trotter_steps = 1;

  void validate() const;
};

struct ChannelCoefficients {
  double gamma_eff_a = 0;  // Gamma_A
  double gamma_eff_b = 0;  // Gamma_B
  double gamma_ab = 0;     // Gamma_AB, coefficient of -[X_A,[X_B,.]]
  double lambda = 0;
};

struct EffectiveGenerator {
  GkslGenerator generator;
  std::vector<ChannelCoefficients> provenance;
};

enum class Branch { Plus, Minus };

struct SymmetricSolution {
  bool feasible = false;
  double gamma_a = 0;
  double gamma_b = 0;
  std::string reason;
};

struct CorrelatedSolution {
  bool feasible = false;
  double gamma_a = 0;
  double gamma_b = 0;
  double kappa_a = 0;
  double kappa_b = 0;
  std::string reason;
};

SymmetricSolution solve_symmetric(double s_a, double s_b, double k_g, Branch branch = Branch::Plus);
CorrelatedSolution solve_correlated(double s_a, double s_b, double s_ab, double k_g,
                                    Branch branch = Branch::Plus);

struct SynthesisResult {
  std::optional<LoccProtocol> protocol;
  bool feasible = false;
  int rank_a = 0;  // numerical rank of Q_A used in whitening
  int rank_b = 0;
  std::vector<double> singular_values;  // of the whitened coupling, descending
  double range_residual = 0;            // |Q_A^1/2 X Q_B^1/2 - Q_G|_max
  std::string reason;
};

// Rank-1 model (scalar noise) to the single-channel scheme.
SynthesisResult synthesize_rank1(const SystemModel& model, Branch branch = Branch::Plus);
SynthesisResult synthesize_general(const SystemModel& model, Branch branch = Branch::Plus);
SynthesisResult synthesize(const SystemModel& model, Branch branch = Branch::Plus);

// Whitened coupling Q_A^{+1/2} Q_G Q_B^{+1/2} (pseudo-inverse roots).
Mat whitened_coupling(const Mat& q_a, const Mat& q_b, const Mat& q_g, int* rank_a = nullptr,
                      int* rank_b = nullptr);

ChannelCoefficients channel_coefficients(const Rank1Channel& ch);
EffectiveGenerator effective_generator(const LoccProtocol& protocol);
// Moment-level generator of one channel alone (no local Hamiltonian).
GkslGenerator channel_generator(const Rank1Channel& ch, const ModeLayout& layout);

struct GaussianState {
  Mat V;
  Vec mean;
};

// One Trotter step: every channel in order, then the local unitary.
GaussianState channel_step(const LoccProtocol& protocol, const Mat& V, const Vec& mean, double dt);

ThresholdVerdict damped_bound(const SystemModel& model, double d_aa, double d_ab, double d_ba, double d_bb,
                              double tol_margin = kTolMargin);

struct OhmicCoefficients {
  bool parallel = false;
  double d_aa = 0, d_ab = 0, d_ba = 0, d_bb = 0;
  double max_deviation = 0;
  std::string diagnostic;
};

OhmicCoefficients ohmic_d_coefficients(const SystemModel& model, double c2, double tol_parallel = kTolParallel);

}  // namespace gausep
