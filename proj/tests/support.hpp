#pragma once

#include "gausep/dynamics.hpp"

#include <random>

namespace testing {

using gausep::Mat;
using gausep::Vec;

inline Mat random_sym(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = nd(rng);
  return 0.5 * (A + A.transpose());
}

inline Mat random_psd(std::mt19937_64& rng, int n, double scale = 1.0, int rank = -1) {
  std::normal_distribution<double> nd(0.0, scale);
  if (rank < 0) rank = n;
  Mat B(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) B(i, j) = nd(rng);
  return B * B.transpose();
}

inline Vec random_vec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

// exp(Omega H) is symplectic for symmetric H.
inline Mat random_symplectic(std::mt19937_64& rng, int modes, double scale = 0.5) {
  return gausep::expm(gausep::build_form(modes) * random_sym(rng, 2 * modes, scale));
}

inline Mat random_physical(std::mt19937_64& rng, int modes) {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  Vec d(2 * modes);
  for (int k = 0; k < modes; ++k) d(2 * k) = d(2 * k + 1) = u(rng);
  Mat S = random_symplectic(rng, modes);
  return gausep::symmetrize(S * d.asDiagonal() * S.transpose());
}

inline Mat tmsv(double r) {
  const double c = std::cosh(2 * r), s = std::sinh(2 * r);
  Mat V = Mat::Zero(4, 4);
  V(0, 0) = V(1, 1) = V(2, 2) = V(3, 3) = 0.5 * c;
  V(0, 2) = V(2, 0) = 0.5 * s;
  V(1, 3) = V(3, 1) = -0.5 * s;
  return V;
}

inline Mat mat2(double a, double b, double c, double d) {
  Mat M(2, 2);
  M << a, b, c, d;
  return M;
}

inline Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace testing
