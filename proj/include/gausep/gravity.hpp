#pragma once

#include "gausep/model_io.hpp"

#include <variant>

namespace gausep::gravity {

// CODATA 2018.
inline constexpr double kG = 6.67430e-11;             // m^3 kg^-1 s^-2
inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K

struct TwoMass {
  double m = 0;      // kg
  double d = 0;      // m
  double gamma = 0;  // 1/s
  double T = 0;      // K
};

// B is a copy of A placed symmetrically on the far side of C.
struct Mediator {
  double m_a = 0;
  double m_c = 0;
  double d_ac = 0;
  double gamma_a = 0;
  double gamma_c = 0;
  double T = 0;
  bool include_ab_coupling = false;  // A-B at distance 2 d_ac
};

struct SphereMediator {
  double m_a = 0;
  double rho_c = 0;  // kg/m^3
  double m_c = 0;
  double gamma_a = 0;
  double gamma_c = 0;
  double T = 0;

  double radius() const;
  Mediator as_mediator() const;
};

using PhysicalScenario = std::variant<TwoMass, Mediator, SphereMediator>;

void validate(const PhysicalScenario& s);

// Natural units: time 1/omega, energy hbar omega, x in units of
// sqrt(hbar/(m omega)) per mode.
struct UnitRecord {
  double omega = 0;
  std::vector<double> masses;   // per mode, model order
  std::vector<double> x_zpf;    // sqrt(hbar/(m omega))
  double time_scale() const { return 1.0 / omega; }
  double energy_scale() const { return kHbar * omega; }
};

struct ScaledModel {
  SystemModel model;
  UnitRecord units;
};

ScaledModel to_model(const PhysicalScenario& s, double omega);

double coupling_constant(double m1, double m2, double d);    // 2 G m1 m2 / d^3
double thermal_spectrum(double m, double gamma, double T);   // 2 gamma m k_B T

struct GravityVerdict {
  double lhs = 0;  // J/s
  double rhs = 0;
  bool entanglement_possible = false;
  double margin = 0;  // rhs - lhs; separability guaranteed when >= 0
};

GravityVerdict two_mass_threshold(const TwoMass& s);
GravityVerdict mediator_threshold(const Mediator& s);
GravityVerdict mediator_threshold(const SphereMediator& s);
GravityVerdict threshold(const PhysicalScenario& s);

// Largest gamma*T (K/s) compatible with entanglement for density m/d^3.
double gamma_t_bound(double density);

// Field names carry units: mass_kg, distance_m, gamma_per_s, ...
PhysicalScenario scenario_from_json(const json& j);
json scenario_to_json(const PhysicalScenario& s);

}  // namespace gausep::gravity
