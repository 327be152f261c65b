#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace gausep {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Perturbative or truncation regime left.
struct RegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scaling-and-squaring, Pade order 13.
Mat expm(const Mat& A);

// Integral over s in [0,t] of e^{Xs} W e^{Ys}.
Mat sandwich_integral(const Mat& X, const Mat& W, const Mat& Y, double t);

Mat symmetrize(const Mat& A);
double max_abs(const Mat& A);

Mat psd_sqrt(const Mat& A);

// Pseudo-inverse square root on the range of A.  Eigenvalues below
// rel_cut * max|eig| count as zero; *rank receives the kept count.
Mat psd_pinv_sqrt(const Mat& A, double rel_cut = 1e-12, int* rank = nullptr);

double min_eig_sym(const Mat& A);
double min_eig_herm(const CMat& A);

void require_square(const Mat& A, const std::string& what);
void require_finite(const Mat& A, const std::string& what);

}  // namespace gausep
