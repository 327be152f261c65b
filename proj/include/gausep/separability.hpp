#pragma once

#include "gausep/dynamics.hpp"

#include <optional>
#include <string>

namespace gausep {

struct PptTwoMode {
  double nu_tilde_minus = 0;
  bool separable = false;
};

PptTwoMode ppt_two_mode(const Mat& V, double tol = 1e-9);

enum class PptVerdict {
  Separable,     // PPT and one side is a single mode
  Inconclusive,  // PPT with n_A, n_B >= 2
  Npt,           // entangled
};

struct PptMultimode {
  double min_sympl_eig = 0;
  bool npt = false;
  PptVerdict verdict = PptVerdict::Separable;
};

PptMultimode ppt_multimode(const Mat& V, const ModeLayout& layout, double tol = 1e-9);

// Base-2 logarithmic negativity.
double log_negativity(const Mat& V, const ModeLayout& layout);

enum class BoundKind { Rank1, Rank1Correlated, GeneralMatrix, Damped, StringentNS };
const char* to_string(BoundKind k);

inline constexpr double kTolMargin = 1e-10;

struct ThresholdVerdict {
  bool satisfied = false;
  double margin = 0;
  BoundKind bound_kind = BoundKind::Rank1;
  bool necessary_and_sufficient = false;
  bool feasible = true;  // false when the bound is degenerate (damped)
  std::string reason;
};

ThresholdVerdict threshold(const SystemModel& model, double tol_margin = kTolMargin);

ThresholdVerdict stringent_ns_check(const ShapeFunctions& shapes, double s_a, double s_b, double s_ab,
                                    double k_g, double tol_margin = kTolMargin);

struct SeparabilityCertificate {
  Mat sigma_a;
  Mat sigma_b;
  Mat N;
  Mat V;  // first-order state the decomposition refers to
  std::string frame;

  // invariant diagnostics
  double residual = 0;          // max |V - sigma_a (+) sigma_b - N|
  double min_eig_n = 0;
  double phys_margin_a = 0;     // min eig of sigma + i/2 Omega
  double phys_margin_b = 0;
  double gram_min_eig = 0;     // min over samples of the G S G blocks
  double dense_min_eig = 0;     // same, dense eigen-solve of U S U^T
};

struct CertificateFailure {
  Mat block;  // 2x2 block whose PSD test failed
  double min_eig = 0;
  std::string reason;
};

struct CertificateResult {
  std::optional<SeparabilityCertificate> certificate;
  std::optional<CertificateFailure> failure;
  bool ok() const { return certificate.has_value(); }
};

struct CertificateOptions {
  int gram_samples = 33;
  double tol = 1e-9;
};

CertificateResult certificate_first_order(const SystemModel& model, const Mat& V0, double t,
                                          const CertificateOptions& opt = {});
CertificateResult certificate_first_order(const SystemModel& model, double t,
                                          const CertificateOptions& opt = {});

// Rotated, L-conjugated first-order state 1/2 I + N_rot of the restricted
// construction; separable iff the original first-order state is.
Mat conjugated_first_order_state(const SystemModel& model, const Mat& V0, double t);

}  // namespace gausep
