#pragma once

#include "gausep/linalg.hpp"

#include <vector>

namespace gausep {

// Interleaved (x1,p1,...,xn,pn) per subsystem, A block first.
struct ModeLayout {
  int n_a = 1;
  int n_b = 0;

  int modes() const { return n_a + n_b; }
  int dim() const { return 2 * (n_a + n_b); }
  int dim_a() const { return 2 * n_a; }
  int dim_b() const { return 2 * n_b; }
  void validate() const;
  bool operator==(const ModeLayout&) const = default;
};

Mat eta();
Mat build_form(int modes);
Mat build_form(const ModeLayout& layout);

double default_tol_psd(const Mat& V);

bool is_physical(const Mat& V, double tol);
bool is_physical(const Mat& V);
// Smallest eigenvalue of V + (i/2) Omega.
double physicality_margin(const Mat& V);

struct WilliamsonDecomposition {
  Mat S;
  std::vector<double> nu;  // descending
};

WilliamsonDecomposition williamson(const Mat& V);

Mat partial_transpose(const Mat& V, const ModeLayout& layout);

// Symplectic eigenvalues, ascending.
std::vector<double> symplectic_spectrum(const Mat& V);

bool is_symplectic(const Mat& S, double tol = 1e-9);
Mat direct_sum(const Mat& A, const Mat& B);

}  // namespace gausep
