#include "support.hpp"

#include "gausep/model_io.hpp"

#include <doctest.h>

using namespace gausep;
using namespace testing;

namespace {

SystemModel unit_model(double k, double sa, double sb, double sab = 0) {
  Vec u = position_vector(1, 0);
  return make_rank1_model(ModeLayout{1, 1}, Mat::Identity(2, 2), Mat::Identity(2, 2), k, u, u, sa, sb, sab);
}

SystemModel random_general(std::mt19937_64& rng, int na, int nb) {
  SystemModel m;
  m.layout = ModeLayout{na, nb};
  m.h_a = random_sym(rng, 2 * na);
  m.h_b = random_sym(rng, 2 * nb);
  std::normal_distribution<double> nd(0, 1);
  Mat qg(2 * na, 2 * nb);
  for (int i = 0; i < qg.rows(); ++i)
    for (int j = 0; j < qg.cols(); ++j) qg(i, j) = nd(rng);
  m.coupling = GeneralCoupling{qg};
  m.noise = MatrixWhite{random_psd(rng, 2 * na), random_psd(rng, 2 * nb)};
  return m;
}

}  // namespace

TEST_CASE("drift without coupling is block diagonal") {
  auto g = build_generator(unit_model(0.0, 0.1, 0.2));
  CHECK(max_abs(g.drift.topRightCorner(2, 2)) == 0.0);
  CHECK(max_abs(g.drift.bottomLeftCorner(2, 2)) == 0.0);
  CHECK(max_abs(g.drift.topLeftCorner(2, 2) - eta()) < 1e-15);
  CHECK(max_abs(g.diffusion.topRightCorner(2, 2)) == 0.0);
}

TEST_CASE("position coupling drift pattern") {
  const double k = 0.3;
  auto g = build_generator(unit_model(k, 0, 0));
  Mat want = Mat::Zero(2, 2);
  want(1, 0) = -k;
  CHECK(max_abs(g.drift.topRightCorner(2, 2) - want) < 1e-15);
  CHECK(max_abs(g.drift.bottomLeftCorner(2, 2) - want) < 1e-15);
}

TEST_CASE("position noise diffuses momentum") {
  auto g = build_generator(unit_model(0.0, 1.0, 0.0));
  Mat want = Mat::Zero(2, 2);
  want(1, 1) = 1.0;
  CHECK(max_abs(g.diffusion.topLeftCorner(2, 2) - want) < 1e-15);
  CHECK(max_abs(g.diffusion.bottomRightCorner(2, 2)) == 0.0);
}

TEST_CASE("identity noise kernel gives identity diffusion block") {
  SystemModel m = unit_model(0, 0, 0);
  m.noise = MatrixWhite{Mat::Identity(2, 2), Mat::Zero(2, 2)};
  auto g = build_generator(m);
  CHECK(max_abs(g.diffusion.topLeftCorner(2, 2) - Mat::Identity(2, 2)) < 1e-15);
}

TEST_CASE("rank-1 embedding equals the general builder") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const int na = 1 + k % 3, nb = 1 + (k / 3) % 3;
    Vec ua = random_vec(rng, 2 * na), ub = random_vec(rng, 2 * nb);
    SystemModel m = make_rank1_model(ModeLayout{na, nb}, random_sym(rng, 2 * na), random_sym(rng, 2 * nb),
                                     u(rng), ua, ub, u(rng), u(rng));
    auto a = build_rank1_generator(m);
    auto b = build_general_generator(to_general(m));
    CHECK(max_abs(a.drift - b.drift) < 1e-12);
    CHECK(max_abs(a.diffusion - b.diffusion) < 1e-12);
  }
}

TEST_CASE("diffusion is positive semidefinite and the hamiltonian symmetric") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    auto m = random_general(rng, 1 + k % 3, 1 + k % 2);
    auto g = build_generator(m);
    CHECK(min_eig_sym(g.diffusion) > -1e-10 * (1 + max_abs(g.diffusion)));
    CHECK(max_abs(g.hamiltonian_matrix - g.hamiltonian_matrix.transpose()) == 0.0);
  }
}

TEST_CASE("noiseless evolution is symplectic") {
  std::mt19937_64 rng(9);
  auto m = random_general(rng, 2, 1);
  m.noise = MatrixWhite{Mat::Zero(4, 4), Mat::Zero(2, 2)};
  auto g = build_generator(m);
  const Mat Om = build_form(3);
  for (double t : {0.1, 1.0, 3.0}) {
    Mat S = expm(g.drift * t);
    CHECK(max_abs(S * Om * S.transpose() - Om) < 1e-12 * max_abs(S) * max_abs(S));
  }
}

TEST_CASE("moment equations") {
  // zero drift: dV/dt = D
  SystemModel m = unit_model(0, 0.4, 0.7);
  m.h_a = Mat::Zero(2, 2);
  m.h_b = Mat::Zero(2, 2);
  auto g = build_generator(m);
  std::mt19937_64 rng(1);
  Mat V = random_physical(rng, 2);
  CHECK(max_abs(moment_equations(g, V) - g.diffusion) < 1e-14);

  // vacuum is stationary under free rotation
  auto r = build_generator(unit_model(0, 0, 0));
  CHECK(max_abs(moment_equations(r, 0.5 * Mat::Identity(4, 4))) < 1e-15);

  // H = K x_A x_B: d<x_A p_B>/dt = -K <x_A^2>
  SystemModel c = unit_model(0.25, 0, 0);
  c.h_a = Mat::Zero(2, 2);
  c.h_b = Mat::Zero(2, 2);
  Mat dV = moment_equations(build_generator(c), 0.5 * Mat::Identity(4, 4));
  CHECK(dV(0, 3) == doctest::Approx(-0.25 * 0.5));
  CHECK(dV(2, 1) == doctest::Approx(-0.25 * 0.5));
  CHECK(dV(0, 2) == 0.0);
}

TEST_CASE("validation") {
  CHECK_THROWS(unit_model(1, 1, 1, 1.5).validate());
  CHECK_NOTHROW(unit_model(1, 1, 1, 1.0).validate());
  CHECK_THROWS(unit_model(1, -1, 1).validate());
  Vec z = Vec::Zero(2);
  CHECK_THROWS(make_rank1_model(ModeLayout{1, 1}, Mat::Identity(2, 2), Mat::Identity(2, 2), 1, z,
                                position_vector(1), 1, 1)
                   .validate());
  SystemModel m = unit_model(0, 0, 0);
  m.h_a = Mat::Identity(3, 3);
  CHECK_THROWS(m.validate());
  SystemModel q = unit_model(0, 0, 0);
  Mat bad = Mat::Identity(2, 2);
  bad(0, 0) = -1;
  q.noise = MatrixWhite{bad, Mat::Zero(2, 2)};
  CHECK_THROWS(q.validate());
}

TEST_CASE("json round trip is exact") {
  std::mt19937_64 rng(21);
  auto m = random_general(rng, 2, 1);
  auto back = model_from_json(json::parse(model_to_json(m).dump()));
  CHECK(back.layout == m.layout);
  CHECK(max_abs(back.h_a - m.h_a) == 0.0);
  CHECK(max_abs(coupling_matrix(back) - coupling_matrix(m)) == 0.0);
  CHECK(max_abs(kossakowski_matrix(back) - kossakowski_matrix(m)) == 0.0);

  auto r = unit_model(0.123456789012345678, 0.3, 0.7, 0.1);
  auto rb = model_from_json(json::parse(model_to_json(r).dump()));
  REQUIRE(rb.is_rank1());
  CHECK(rb.rank1().k_g == r.rank1().k_g);
  CHECK(rb.scalar_noise().s_ab == 0.1);
}

TEST_CASE("json rejects malformed models") {
  CHECK_THROWS(model_from_json(json::parse(R"({"layout":{"n_a":1,"n_b":1}})")));
  CHECK_THROWS(model_from_json(json::parse(
      R"({"layout":{"n_a":1,"n_b":1},"h_a":[[1,0],[0,1]],"h_b":[[1,0],[0,1]],
          "coupling":{"kind":"bogus"},"noise":{"kind":"scalar_white","s_a":0,"s_b":0}})")));
}
