#include "support.hpp"

#include "gausep/gravity.hpp"
#include "gausep/separability.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace gausep;
using namespace gausep::gravity;
using namespace testing;

TEST_CASE("gamma-T bound at laboratory density") {
  const double b = gamma_t_bound(1e4);
  CHECK(b > 1e-18);
  CHECK(b < 1e-17);
  CHECK(b == doctest::Approx(kHbar * kG * 1e4 / kBoltzmann).epsilon(1e-15));
  // equivalent two-mass scenario sits exactly on the bound
  TwoMass s{1e4, 1.0, 1.0, b};
  auto v = two_mass_threshold(s);
  CHECK(std::abs(v.margin) < 1e-12 * v.lhs);
}

TEST_CASE("torsion-balance order of magnitude") {
  const double T = gamma_t_bound(1e4) / 1e-10;
  CHECK(T > 1e-8);
  CHECK(T < 1e-6);
}

TEST_CASE("two-mass verdicts") {
  TwoMass cold{1e-3, 1e-3, 1e-6, 0.0};
  CHECK(two_mass_threshold(cold).entanglement_possible);
  TwoMass hot{1e-3, 1e-3, 1e-6, 300.0};
  auto v = two_mass_threshold(hot);
  CHECK_FALSE(v.entanglement_possible);
  CHECK(v.margin > 0);
  CHECK_THROWS_AS(two_mass_threshold(TwoMass{-1, 1, 1, 1}), DomainError);
  CHECK_THROWS_AS(two_mass_threshold(TwoMass{1, 1, 1, -1}), DomainError);
}

TEST_CASE("mediator verdicts") {
  Mediator sym{1e-3, 1e-3, 1e-3, 1e-6, 1e-6, 1e-3, false};
  TwoMass tm{1e-3, 1e-3, 1e-6, 1e-3};
  auto a = mediator_threshold(sym), b = two_mass_threshold(tm);
  CHECK(a.lhs == doctest::Approx(1e-3 * b.lhs).epsilon(1e-14));
  CHECK(a.rhs == doctest::Approx(1e-3 * b.rhs).epsilon(1e-14));
  CHECK(a.entanglement_possible == b.entanglement_possible);

  Mediator quiet = sym;
  quiet.gamma_c = 0;
  quiet.T = 10;
  CHECK(mediator_threshold(quiet).entanglement_possible);
}

TEST_CASE("sphere mediator") {
  SphereMediator s{1e-3, 2e4, 1e-2, 1e-6, 1e-6, 1e-6};
  auto a = mediator_threshold(s);
  auto b = mediator_threshold(s.as_mediator());
  CHECK(a.lhs == doctest::Approx(b.lhs / std::sqrt(s.m_a * s.m_c)).epsilon(1e-12));
  CHECK(a.entanglement_possible == b.entanglement_possible);
  CHECK(s.radius() == doctest::Approx(std::cbrt(3 * 1e-2 / (4 * std::numbers::pi * 2e4))));
  double prev = INFINITY;
  for (double mc : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
    s.m_c = mc;
    const double lhs = mediator_threshold(s).lhs;
    CHECK(lhs <= prev);
    prev = lhs;
  }
}

TEST_CASE("scaled models") {
  auto tm = to_model(TwoMass{1e-3, 1e-3, 1e-6, 1e-3}, 1.0);
  REQUIRE(tm.model.is_rank1());
  CHECK(tm.model.rank1().u_a(0) == 1.0);
  CHECK(tm.model.rank1().u_a(1) == 0.0);
  CHECK(tm.units.x_zpf.size() == 2);
  CHECK(tm.units.x_zpf[0] == doctest::Approx(std::sqrt(kHbar / 1e-3)));

  auto far = to_model(TwoMass{1e-3, 1e6, 1e-6, 1e-3}, 1.0);
  CHECK(far.model.rank1().k_g < 1e-25);

  Mediator md{1e-3, 2e-3, 1e-3, 1e-6, 2e-6, 1e-3, false};
  auto mm = to_model(md, 2.0);
  CHECK(mm.model.layout == ModeLayout{1, 2});
  Mat qg = coupling_matrix(mm.model);
  CHECK(qg(0, 0) > 0);
  CHECK(qg(0, 2) == 0.0);
  md.include_ab_coupling = true;
  Mat qg2 = coupling_matrix(to_model(md, 2.0).model);
  CHECK(qg2(0, 2) > 0);
  CHECK(qg2(0, 2) < qg2(0, 0));
  CHECK_THROWS(to_model(md, 0.0));
}

TEST_CASE("natural-unit verdicts agree with SI verdicts") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> lg(-1, 1);
  for (int i = 0; i < 100; ++i) {
    TwoMass s{std::pow(10, -3 + lg(rng)), std::pow(10, -3 + lg(rng)), std::pow(10, -6 + 2 * lg(rng)),
              std::pow(10, -4 + 2 * lg(rng))};
    const double omega = std::pow(10, lg(rng));
    auto si = two_mass_threshold(s);
    auto nat = threshold(to_model(s, omega).model);
    if (std::abs(si.margin) < 1e-6 * si.lhs) continue;
    CHECK(nat.satisfied == !si.entanglement_possible);

    Mediator md{s.m, 2 * s.m, s.d, s.gamma, 0.5 * s.gamma, s.T, false};
    auto msi = mediator_threshold(md);
    auto mnat = threshold(to_model(md, omega).model);
    if (std::abs(msi.margin) < 1e-6 * msi.lhs) continue;
    CHECK(mnat.satisfied == !msi.entanglement_possible);
  }
}

TEST_CASE("scenario json") {
  PhysicalScenario s = SphereMediator{1e-3, 2e4, 1e-2, 1e-6, 2e-6, 1e-6};
  auto back = scenario_from_json(json::parse(scenario_to_json(s).dump()));
  REQUIRE(std::holds_alternative<SphereMediator>(back));
  CHECK(std::get<SphereMediator>(back).rho_c == 2e4);
  CHECK_THROWS(scenario_from_json(json::parse(R"({"kind":"two_mass","mass_kg":1})")));
  CHECK_THROWS(scenario_from_json(json::parse(R"({"kind":"planet"})")));
}
