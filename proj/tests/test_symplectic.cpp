#include "support.hpp"

#include "gausep/symplectic.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace gausep;
using namespace testing;

namespace {

// min eig of V + i/2 Omega through a dense complex solve.
double oracle_margin(const Mat& V) {
  const int n = static_cast<int>(V.rows());
  CMat H = V.cast<std::complex<double>>() + std::complex<double>(0, 0.5) * build_form(n / 2).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<CMat> es(H);
  return es.eigenvalues().minCoeff();
}

// |eig(i Omega V)| are the symplectic eigenvalues, each twice.
std::vector<double> oracle_spectrum(const Mat& V) {
  const int n = static_cast<int>(V.rows());
  Eigen::EigenSolver<Mat> es(build_form(n / 2) * V);
  std::vector<double> a;
  for (int i = 0; i < n; ++i) a.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(a.begin(), a.end());
  std::vector<double> out;
  for (int i = 0; i < n; i += 2) out.push_back(0.5 * (a[i] + a[i + 1]));
  return out;
}

}  // namespace

TEST_CASE("symplectic form layout") {
  Mat o1 = build_form(1);
  CHECK(o1(0, 1) == 1.0);
  CHECK(o1(1, 0) == -1.0);
  CHECK(o1(0, 0) == 0.0);
  Mat o2 = build_form(ModeLayout{1, 1});
  CHECK(o2.rows() == 4);
  CHECK(max_abs(o2.topRightCorner(2, 2)) == 0.0);
  CHECK(max_abs(o2.bottomRightCorner(2, 2) - o1) == 0.0);
  Mat o3 = build_form(ModeLayout{2, 1});
  CHECK(max_abs(o3 * o3 + Mat::Identity(6, 6)) == 0.0);
  CHECK(max_abs(o3 + o3.transpose()) == 0.0);
}

TEST_CASE("layout validation") {
  CHECK_THROWS(ModeLayout{0, 1}.validate());
  CHECK_THROWS(ModeLayout{1, -1}.validate());
  CHECK_NOTHROW(ModeLayout{2, 3}.validate());
}

TEST_CASE("physicality") {
  CHECK(is_physical(0.5 * Mat::Identity(4, 4)));
  CHECK_FALSE(is_physical(0.4 * Mat::Identity(2, 2)));
  Mat V = Mat::Zero(2, 2);
  V(0, 0) = 0.5;
  V(1, 1) = 2.0;
  CHECK(is_physical(V));
  CHECK(physicality_margin(V) == doctest::Approx(oracle_margin(V)).epsilon(1e-12));
  CHECK(physicality_margin(V) == doctest::Approx(0.5 * (2.5 - std::sqrt(3.25))).epsilon(1e-12));

  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    const int m = 1 + k % 4;
    Mat W = random_physical(rng, m);
    CHECK(is_physical(W));
    CHECK(physicality_margin(W) == doctest::Approx(oracle_margin(W)).epsilon(1e-9));
  }
}

TEST_CASE("williamson of a thermal state") {
  Mat V = 1.3 * Mat::Identity(2, 2);
  auto w = williamson(V);
  REQUIRE(w.nu.size() == 1);
  CHECK(w.nu[0] == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(is_symplectic(w.S));
  Mat D = w.S * V * w.S.transpose();
  CHECK(max_abs(D - 1.3 * Mat::Identity(2, 2)) < 1e-12);
}

TEST_CASE("williamson invariants on random states") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 60; ++k) {
    const int m = 1 + k % 6;
    Mat V = random_physical(rng, m);
    auto w = williamson(V);
    REQUIRE(static_cast<int>(w.nu.size()) == m);
    for (int i = 1; i < m; ++i) CHECK(w.nu[i - 1] >= w.nu[i]);
    const Mat Om = build_form(m);
    CHECK(max_abs(w.S * Om * w.S.transpose() - Om) < 1e-8);
    Mat D = w.S * V * w.S.transpose();
    Mat want = Mat::Zero(2 * m, 2 * m);
    for (int i = 0; i < m; ++i) want(2 * i, 2 * i) = want(2 * i + 1, 2 * i + 1) = w.nu[i];
    CHECK(max_abs(D - want) < 1e-8 * max_abs(V));
    auto o = oracle_spectrum(V);
    auto s = symplectic_spectrum(V);
    for (int i = 0; i < m; ++i) CHECK(s[i] == doctest::Approx(o[i]).epsilon(1e-8));
  }
}

TEST_CASE("williamson is deterministic on degenerate spectra") {
  Mat V = 0.5 * Mat::Identity(4, 4);
  auto a = williamson(V);
  auto b = williamson(V);
  CHECK(max_abs(a.S - b.S) == 0.0);
  CHECK(is_symplectic(a.S));
}

TEST_CASE("williamson rejects non positive definite input") {
  Mat V = Mat::Identity(2, 2);
  V(1, 1) = -1;
  CHECK_THROWS(williamson(V));
  CHECK_THROWS(williamson(Mat::Identity(3, 3)));
}

TEST_CASE("partial transpose") {
  const ModeLayout l{1, 1};
  Mat V = tmsv(0.5);
  Mat P = partial_transpose(V, l);
  CHECK(max_abs(partial_transpose(P, l) - V) == 0.0);
  CHECK(P(3, 3) == V(3, 3));
  CHECK(P(1, 3) == -V(1, 3));
  CHECK(P(0, 2) == V(0, 2));
  auto s = symplectic_spectrum(P);
  CHECK(s.front() == doctest::Approx(std::exp(-1.0) / 2).epsilon(1e-12));
  CHECK(williamson(P).nu.back() == doctest::Approx(std::exp(-1.0) / 2).epsilon(1e-10));
}

TEST_CASE("vacuum spectrum") {
  for (double v : symplectic_spectrum(0.5 * Mat::Identity(6, 6))) CHECK(std::abs(v - 0.5) < 1e-12);
}

TEST_CASE("direct sum") {
  Mat A = mat2(1, 2, 3, 4);
  Mat B = Mat::Constant(1, 1, 5.0);
  Mat C = direct_sum(A, B);
  CHECK(C.rows() == 3);
  CHECK(C(2, 2) == 5.0);
  CHECK(C(0, 2) == 0.0);
  CHECK(C(1, 0) == 3.0);
}
