#pragma once

#include "gausep/model.hpp"

#include <functional>
#include <vector>

namespace gausep {

struct PropagatorSolution {
  Mat Phi;
  Mat accumulated_noise;
};

PropagatorSolution propagate(const GkslGenerator& gen, double t);

// V(t) = Phi V0 Phi^T + int Phi F Phi^T.  steps only chunks [0,t].
Mat evolve(const GkslGenerator& gen, const Mat& V0, double t, int steps = 1);
Vec evolve_mean(const GkslGenerator& gen, const Vec& mean0, double t);

// Block-diagonal frame of a pure product initial state, and the rotated
// drift pieces derived from it.
struct LocalFrame {
  Mat S;        // S_A (+) S_B with S V0 S^T = I/2
  Mat S_inv;
  Mat M_prime;  // S M S^-1, block diagonal
  Vec w_a;      // S_A^-T u_A
  Vec w_b;
};

LocalFrame local_frame(const SystemModel& model, const Mat& V0);

struct PerturbativeResult {
  Mat V_tilde;  // rotated frame
  Mat S;        // lab -> Williamson frame
  Mat R;        // e^{M' t}
  double t = 0;

  // S^-1 R V_tilde R^T S^-T
  Mat lab() const;
};

inline constexpr double kPerturbativeGuard = 0.1;

void check_perturbative_regime(const SystemModel& model, double t);

PerturbativeResult perturbative_v(const SystemModel& model, const Mat& V0, double t);

struct ShapeFunctions {
  std::vector<double> s;
  std::vector<double> f_a;
  std::vector<double> f_b;
  double i_a = 0;
  double i_b = 0;
  double i_ab = 0;
  double rho_sq = 0;
  double max_deviation = 0;  // largest normalized cross-component seen
};

struct NotParallelError : DomainError {
  double max_deviation;
  NotParallelError(const std::string& msg, double dev) : DomainError(msg), max_deviation(dev) {}
};

inline constexpr double kTolParallel = 1e-8;

// samples is rounded up to odd for composite Simpson.
ShapeFunctions shape_functions(const SystemModel& model, double t, int samples = 201,
                               double tol_parallel = kTolParallel);
ShapeFunctions shape_functions(const SystemModel& model, const Mat& V0, double t, int samples = 201,
                               double tol_parallel = kTolParallel);
ShapeFunctions shape_functions_from(const std::function<double(double)>& f_a,
                                    const std::function<double(double)>& f_b, double t, int samples = 201);

Mat vacuum(int modes);

}  // namespace gausep
