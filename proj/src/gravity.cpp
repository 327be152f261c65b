#include "gausep/gravity.hpp"

#include <cmath>
#include <numbers>

namespace gausep::gravity {

namespace {

void positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) throw DomainError(std::string("scenario: ") + what + " must be positive");
}

void nonnegative(double v, const char* what) {
  if (!(v >= 0) || !std::isfinite(v)) throw DomainError(std::string("scenario: ") + what + " must be >= 0");
}

double field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw DomainError(std::string("scenario: missing number '") + key + "'");
  return j.at(key).get<double>();
}

Mat x_projector() {
  Mat P = Mat::Zero(2, 2);
  P(0, 0) = 1;
  return P;
}

}  // namespace

double SphereMediator::radius() const { return std::cbrt(3.0 * m_c / (4.0 * std::numbers::pi * rho_c)); }

Mediator SphereMediator::as_mediator() const {
  return Mediator{m_a, m_c, radius(), gamma_a, gamma_c, T, false};
}

void validate(const PhysicalScenario& s) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TwoMass>) {
          positive(v.m, "mass");
          positive(v.d, "distance");
          nonnegative(v.gamma, "gamma");
          nonnegative(v.T, "temperature");
        } else if constexpr (std::is_same_v<T, Mediator>) {
          positive(v.m_a, "mass_a");
          positive(v.m_c, "mass_c");
          positive(v.d_ac, "distance_ac");
          nonnegative(v.gamma_a, "gamma_a");
          nonnegative(v.gamma_c, "gamma_c");
          nonnegative(v.T, "temperature");
        } else {
          positive(v.m_a, "mass_a");
          positive(v.m_c, "mass_c");
          positive(v.rho_c, "density_c");
          nonnegative(v.gamma_a, "gamma_a");
          nonnegative(v.gamma_c, "gamma_c");
          nonnegative(v.T, "temperature");
        }
      },
      s);
}

double coupling_constant(double m1, double m2, double d) { return 2.0 * kG * m1 * m2 / (d * d * d); }

double thermal_spectrum(double m, double gamma, double T) { return 2.0 * gamma * m * kBoltzmann * T; }

GravityVerdict two_mass_threshold(const TwoMass& s) {
  validate(s);
  GravityVerdict v;
  v.lhs = kHbar * kG * s.m / (s.d * s.d * s.d);
  v.rhs = s.gamma * kBoltzmann * s.T;
  v.entanglement_possible = v.lhs > v.rhs;
  v.margin = v.rhs - v.lhs;
  return v;
}

GravityVerdict mediator_threshold(const Mediator& s) {
  validate(s);
  GravityVerdict v;
  v.lhs = kHbar * kG * s.m_a * s.m_c / (s.d_ac * s.d_ac * s.d_ac);
  v.rhs = std::sqrt(s.m_a * s.m_c) * std::sqrt(s.gamma_a * s.gamma_c) * kBoltzmann * s.T;
  v.entanglement_possible = v.lhs >= v.rhs;
  v.margin = v.rhs - v.lhs;
  return v;
}

GravityVerdict mediator_threshold(const SphereMediator& s) {
  validate(s);
  GravityVerdict v;
  v.lhs = 4.0 * std::numbers::pi * kHbar * kG * s.rho_c / 3.0 * std::sqrt(s.m_a / s.m_c);
  v.rhs = std::sqrt(s.gamma_a * s.gamma_c) * kBoltzmann * s.T;
  v.entanglement_possible = v.lhs >= v.rhs;
  v.margin = v.rhs - v.lhs;
  return v;
}

GravityVerdict threshold(const PhysicalScenario& s) {
  return std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TwoMass>)
          return two_mass_threshold(v);
        else
          return mediator_threshold(v);
      },
      s);
}

double gamma_t_bound(double density) { return kHbar * kG * density / kBoltzmann; }

ScaledModel to_model(const PhysicalScenario& s, double omega) {
  validate(s);
  if (!(omega > 0)) throw DomainError("to_model: omega must be positive");
  ScaledModel out;
  out.units.omega = omega;
  const double w2 = omega * omega;
  auto kscaled = [&](double m1, double m2, double d) { return coupling_constant(m1, m2, d) / (w2 * std::sqrt(m1 * m2)); };
  auto sscaled = [&](double m, double gamma, double T) { return thermal_spectrum(m, gamma, T) / (kHbar * m * w2); };
  auto record = [&](double m) {
    out.units.masses.push_back(m);
    out.units.x_zpf.push_back(std::sqrt(kHbar / (m * omega)));
  };

  if (const auto* tm = std::get_if<TwoMass>(&s)) {
    record(tm->m);
    record(tm->m);
    const double S = sscaled(tm->m, tm->gamma, tm->T);
    Vec u = position_vector(1, 0);
    out.model = make_rank1_model(ModeLayout{1, 1}, Mat::Identity(2, 2), Mat::Identity(2, 2),
                                 kscaled(tm->m, tm->m, tm->d), u, u, S, S);
    return out;
  }

  const Mediator med = std::holds_alternative<Mediator>(s) ? std::get<Mediator>(s) : std::get<SphereMediator>(s).as_mediator();
  // A | (C, B)
  record(med.m_a);
  record(med.m_c);
  record(med.m_a);
  const double k_ac = kscaled(med.m_a, med.m_c, med.d_ac);
  const double k_ab = med.include_ab_coupling ? kscaled(med.m_a, med.m_a, 2.0 * med.d_ac) : 0.0;

  SystemModel m;
  m.layout = ModeLayout{1, 2};
  m.h_a = Mat::Identity(2, 2);
  m.h_b = Mat::Identity(4, 4);
  m.h_b(0, 2) = m.h_b(2, 0) = k_ac;  // C-B, internal to the B side
  Mat qg = Mat::Zero(2, 4);
  qg(0, 0) = k_ac;
  qg(0, 2) = k_ab;
  m.coupling = GeneralCoupling{qg};
  const Mat P = x_projector();
  MatrixWhite q;
  q.q_a = sscaled(med.m_a, med.gamma_a, med.T) * P;
  q.q_b = direct_sum(sscaled(med.m_c, med.gamma_c, med.T) * P, sscaled(med.m_a, med.gamma_a, med.T) * P);
  m.noise = q;
  out.model = std::move(m);
  return out;
}

PhysicalScenario scenario_from_json(const json& j) {
  const std::string kind = j.value("kind", "");
  PhysicalScenario s;
  if (kind == "two_mass") {
    s = TwoMass{field(j, "mass_kg"), field(j, "distance_m"), field(j, "gamma_per_s"), field(j, "temperature_K")};
  } else if (kind == "mediator") {
    s = Mediator{field(j, "mass_a_kg"),     field(j, "mass_c_kg"),     field(j, "distance_ac_m"),
                 field(j, "gamma_a_per_s"), field(j, "gamma_c_per_s"), field(j, "temperature_K"),
                 j.value("include_ab_coupling", false)};
  } else if (kind == "sphere_mediator") {
    s = SphereMediator{field(j, "mass_a_kg"),     field(j, "density_c_kg_per_m3"), field(j, "mass_c_kg"),
                       field(j, "gamma_a_per_s"), field(j, "gamma_c_per_s"),       field(j, "temperature_K")};
  } else {
    throw DomainError("scenario: unknown kind '" + kind + "'");
  }
  validate(s);
  return s;
}

json scenario_to_json(const PhysicalScenario& s) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TwoMass>)
          return {{"kind", "two_mass"}, {"mass_kg", v.m}, {"distance_m", v.d}, {"gamma_per_s", v.gamma}, {"temperature_K", v.T}};
        else if constexpr (std::is_same_v<T, Mediator>)
          return {{"kind", "mediator"},          {"mass_a_kg", v.m_a},         {"mass_c_kg", v.m_c},
                  {"distance_ac_m", v.d_ac},     {"gamma_a_per_s", v.gamma_a}, {"gamma_c_per_s", v.gamma_c},
                  {"temperature_K", v.T},        {"include_ab_coupling", v.include_ab_coupling}};
        else
          return {{"kind", "sphere_mediator"},     {"mass_a_kg", v.m_a},           {"density_c_kg_per_m3", v.rho_c},
                  {"mass_c_kg", v.m_c},            {"gamma_a_per_s", v.gamma_a},   {"gamma_c_per_s", v.gamma_c},
                  {"temperature_K", v.T}};
      },
      s);
}

}  // namespace gausep::gravity
