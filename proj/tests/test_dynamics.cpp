#include "support.hpp"

#include "gausep/separability.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace gausep;
using namespace testing;

namespace {

SystemModel oscillators(double k, double sa, double sb, double sab = 0, double w = 1.0) {
  Vec u = position_vector(1, 0);
  return make_rank1_model(ModeLayout{1, 1}, w * Mat::Identity(2, 2), w * Mat::Identity(2, 2), k, u, u, sa, sb, sab);
}

SystemModel free_masses(double k, double sa, double sb, double sab = 0) {
  return oscillators(k, sa, sb, sab, 0.0);
}

}  // namespace

TEST_CASE("propagator at t = 0") {
  auto g = build_generator(oscillators(0.2, 0.1, 0.3));
  auto p = propagate(g, 0.0);
  CHECK(max_abs(p.Phi - Mat::Identity(4, 4)) == 0.0);
  CHECK(max_abs(p.accumulated_noise) == 0.0);
}

TEST_CASE("zero drift grows linearly") {
  GkslGenerator g;
  g.drift = Mat::Zero(2, 2);
  g.diffusion = Mat::Zero(2, 2);
  g.diffusion(1, 1) = 0.7;
  g.hamiltonian_matrix = Mat::Zero(2, 2);
  Mat V0 = vacuum(1);
  for (double t : {0.0, 0.5, 3.0}) CHECK(max_abs(evolve(g, V0, t) - (V0 + t * g.diffusion)) < 1e-14);
}

TEST_CASE("noiseless oscillators keep their symplectic spectrum") {
  std::mt19937_64 rng(2);
  Mat V0 = random_physical(rng, 2);
  SystemModel m = oscillators(0, 0, 0);
  m.h_a = random_psd(rng, 2);
  auto g = build_generator(m);
  auto s0 = symplectic_spectrum(V0);
  for (double t : {0.3, 2.0, 7.0}) {
    auto s = symplectic_spectrum(evolve(g, V0, t));
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == doctest::Approx(s0[i]).epsilon(1e-10));
  }
}

TEST_CASE("steps only chunk the interval") {
  auto g = build_generator(oscillators(0.3, 0.2, 0.1, 0.05));
  Mat V0 = vacuum(2);
  for (int steps : {1, 2, 4, 8}) {
    Mat a = evolve(g, V0, 2.0, steps);
    Mat b = evolve(g, V0, 2.0, 2 * steps);
    CHECK(max_abs(a - b) < 1e-12);
  }
}

TEST_CASE("accumulated noise stays positive semidefinite") {
  auto g = build_generator(oscillators(0.5, 0.2, 0.4, 0.1));
  for (int i = 1; i <= 20; ++i) {
    auto p = propagate(g, 0.25 * i);
    CHECK(max_abs(p.accumulated_noise - p.accumulated_noise.transpose()) < 1e-14);
    CHECK(min_eig_sym(p.accumulated_noise) > -1e-12);
  }
}

TEST_CASE("evolution preserves physicality") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 100; ++k) {
    const int na = 1 + k % 2, nb = 1 + (k / 2) % 3;
    SystemModel m;
    m.layout = ModeLayout{na, nb};
    m.h_a = random_sym(rng, 2 * na);
    m.h_b = random_sym(rng, 2 * nb);
    Mat qg = random_sym(rng, 2 * std::max(na, nb)).topLeftCorner(2 * na, 2 * nb);
    m.coupling = GeneralCoupling{qg};
    m.noise = MatrixWhite{random_psd(rng, 2 * na, 0.5), random_psd(rng, 2 * nb, 0.5)};
    Mat V0 = random_physical(rng, na + nb);
    Mat V = evolve(build_generator(m), V0, 2.0 * u(rng));
    CHECK(is_physical(V));
  }
}

TEST_CASE("evolve rejects bad input") {
  auto g = build_generator(oscillators(0, 0, 0));
  CHECK_THROWS_AS(evolve(g, vacuum(2), -1.0), DomainError);
  CHECK_THROWS_AS(evolve(g, vacuum(1), 1.0), DimensionError);
}

TEST_CASE("mean follows the drift") {
  auto g = build_generator(oscillators(0, 0, 0));
  Vec m0 = Vec::Zero(4);
  m0(0) = 1.0;
  Vec m = evolve_mean(g, m0, std::numbers::pi / 2);
  CHECK(std::abs(m(0)) < 1e-12);
  CHECK(std::abs(std::abs(m(1)) - 1.0) < 1e-12);
}

TEST_CASE("perturbative expansion") {
  SUBCASE("t = 0 is the vacuum") {
    auto r = perturbative_v(oscillators(0.3, 0.2, 0.1), vacuum(2), 0.0);
    CHECK(max_abs(r.V_tilde - 0.5 * Mat::Identity(4, 4)) < 1e-15);
  }
  SUBCASE("no coupling adds only thermal noise") {
    auto r = perturbative_v(oscillators(0.0, 0.1, 0.1), vacuum(2), 0.1);
    Mat N = r.V_tilde - 0.5 * Mat::Identity(4, 4);
    CHECK(min_eig_sym(N) > -1e-15);
    CHECK(max_abs(N.topRightCorner(2, 2)) < 1e-15);
    CHECK(N.trace() > 0);
  }
  SUBCASE("second order agreement with exact evolution") {
    SystemModel m = oscillators(0.3, 0.2, 0.25, 0.05);
    auto g = build_generator(m);
    std::vector<double> err;
    for (double t : {0.2, 0.1, 0.05, 0.025}) {
      Mat lab = perturbative_v(m, vacuum(2), t).lab();
      err.push_back(max_abs(lab - evolve(g, vacuum(2), t)));
    }
    for (std::size_t i = 1; i < err.size(); ++i) CHECK(err[i - 1] / err[i] == doctest::Approx(4.0).epsilon(0.2));
  }
  SUBCASE("squeezed product initial state") {
    Mat V0 = vacuum(2);
    V0(0, 0) = 0.5 * std::exp(-0.6);
    V0(1, 1) = 0.5 * std::exp(0.6);
    SystemModel m = oscillators(0.2, 0.1, 0.1);
    auto g = build_generator(m);
    double e1 = max_abs(perturbative_v(m, V0, 0.05).lab() - evolve(g, V0, 0.05));
    double e2 = max_abs(perturbative_v(m, V0, 0.025).lab() - evolve(g, V0, 0.025));
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
  }
  SUBCASE("regime guard") {
    CHECK_THROWS_AS(perturbative_v(oscillators(0.3, 0.01, 0.01), vacuum(2), 1.0), RegimeError);
    CHECK_THROWS_AS(check_perturbative_regime(oscillators(0.01, 0.5, 0.01), 0.5), RegimeError);
    CHECK_NOTHROW(check_perturbative_regime(oscillators(0.1, 0.1, 0.1), 1.0));
  }
  SUBCASE("mixed initial state is rejected") {
    CHECK_THROWS_AS(perturbative_v(oscillators(0.1, 0.1, 0.1), 0.8 * Mat::Identity(4, 4), 0.1), DomainError);
  }
}

TEST_CASE("shape functions") {
  SUBCASE("free masses are constant") {
    auto sf = shape_functions(free_masses(0.1, 0.1, 0.1), 1.0);
    for (double f : sf.f_a) CHECK(f == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sf.rho_sq == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sf.i_a == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("proportional shapes saturate Cauchy-Schwarz") {
    auto sf = shape_functions_from([](double s) { return std::exp(-s); }, [](double s) { return 3 * std::exp(-s); }, 2.0);
    CHECK(sf.rho_sq == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("constant against linear") {
    auto sf = shape_functions_from([](double) { return 1.0; }, [](double s) { return s; }, 1.0);
    CHECK(sf.i_ab == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sf.i_b == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(sf.rho_sq == doctest::Approx(0.75).epsilon(1e-13));
  }
  SUBCASE("position potential leaves the x sector fixed") {
    SystemModel m = free_masses(0.1, 0.1, 0.1);
    m.h_a(0, 0) = 2.0;
    auto sf = shape_functions(m, 1.0);
    CHECK(sf.max_deviation < 1e-12);
    CHECK(sf.rho_sq == doctest::Approx(1.0));
  }
  SUBCASE("rotating oscillators violate the parallel condition") {
    try {
      shape_functions(oscillators(0.1, 0.1, 0.1), 1.0);
      FAIL("expected NotParallelError");
    } catch (const NotParallelError& e) {
      CHECK(e.max_deviation > 0.1);
    }
  }
  SUBCASE("samples rounded to odd") {
    auto sf = shape_functions(free_masses(0.1, 0.1, 0.1), 1.0, 10);
    CHECK(sf.s.size() == 11);
  }
}
