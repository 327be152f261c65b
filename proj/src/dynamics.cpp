#include "gausep/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace gausep {

Mat vacuum(int modes) { return 0.5 * Mat::Identity(2 * modes, 2 * modes); }

PropagatorSolution propagate(const GkslGenerator& gen, double t) {
  require_square(gen.drift, "propagate");
  PropagatorSolution out;
  out.Phi = expm(gen.drift * t);
  out.accumulated_noise = symmetrize(sandwich_integral(gen.drift, gen.diffusion, gen.drift.transpose(), t));
  return out;
}

Mat evolve(const GkslGenerator& gen, const Mat& V0, double t, int steps) {
  if (t < 0) throw DomainError("evolve: negative time");
  if (steps < 1) throw DomainError("evolve: steps must be >= 1");
  if (V0.rows() != gen.drift.rows() || V0.cols() != gen.drift.cols())
    throw DimensionError("evolve: shape mismatch");
  require_finite(V0, "evolve");
  require_finite(gen.drift, "evolve");
  require_finite(gen.diffusion, "evolve");
  const double h = t / steps;
  PropagatorSolution p = propagate(gen, h);
  Mat V = symmetrize(V0);
  for (int k = 0; k < steps; ++k) V = symmetrize(p.Phi * V * p.Phi.transpose() + p.accumulated_noise);
  require_finite(V, "evolve");
  return V;
}

Vec evolve_mean(const GkslGenerator& gen, const Vec& mean0, double t) {
  return expm(gen.drift * t) * mean0;
}

LocalFrame local_frame(const SystemModel& model, const Mat& V0) {
  model.validate();
  if (!model.is_rank1()) throw DomainError("local_frame: rank-1 coupling required");
  const int da = model.layout.dim_a(), db = model.layout.dim_b();
  if (V0.rows() != da + db || V0.cols() != da + db) throw DimensionError("local_frame: V0 shape");
  const double scale = std::max(1.0, max_abs(V0));
  if (db > 0 && max_abs(V0.topRightCorner(da, db)) > 1e-10 * scale)
    throw DomainError("local_frame: initial state is not block diagonal");

  auto block = [&](const Mat& Vi) {
    WilliamsonDecomposition w = williamson(Vi);
    for (double nu : w.nu)
      if (std::abs(nu - 0.5) > 1e-8 * scale) throw DomainError("local_frame: initial state is not pure");
    return w.S;
  };
  Mat Sa = block(V0.topLeftCorner(da, da));
  Mat Sb = db > 0 ? block(V0.bottomRightCorner(db, db)) : Mat(0, 0);

  LocalFrame f;
  f.S = direct_sum(Sa, Sb);
  f.S_inv = f.S.inverse();
  Mat M = build_form(model.layout) * direct_sum(model.h_a, model.h_b);
  f.M_prime = f.S * M * f.S_inv;
  f.M_prime.topRightCorner(da, db).setZero();
  f.M_prime.bottomLeftCorner(db, da).setZero();
  const auto& r = model.rank1();
  f.w_a = Sa.transpose().partialPivLu().solve(r.u_a);
  f.w_b = db > 0 ? Vec(Sb.transpose().partialPivLu().solve(r.u_b)) : Vec(0);
  return f;
}

Mat PerturbativeResult::lab() const {
  Mat Si = S.inverse();
  return symmetrize(Si * R * V_tilde * R.transpose() * Si.transpose());
}

void check_perturbative_regime(const SystemModel& model, double t) {
  if (t < 0) throw DomainError("negative time");
  if (!model.is_rank1() || !model.is_scalar_noise())
    throw DomainError("perturbative expansion needs rank-1 coupling and scalar white noise");
  const auto& r = model.rank1();
  const auto& s = model.scalar_noise();
  const double kt = std::abs(r.k_g) * t, sat = s.s_a * t, sbt = s.s_b * t;
  if (kt > kPerturbativeGuard || sat > kPerturbativeGuard || sbt > kPerturbativeGuard)
    throw RegimeError("out of perturbative regime: K_g t=" + std::to_string(kt) + ", S_A t=" +
                      std::to_string(sat) + ", S_B t=" + std::to_string(sbt) + " (guard 0.1)");
}

PerturbativeResult perturbative_v(const SystemModel& model, const Mat& V0, double t) {
  check_perturbative_regime(model, t);
  LocalFrame f = local_frame(model, V0);
  GkslGenerator gen = build_rank1_generator(model);
  const int n = model.layout.dim();
  const int da = model.layout.dim_a(), db = model.layout.dim_b();

  Mat Cp = Mat::Zero(n, n);
  Mat e = build_form(model.layout);
  Cp.topRightCorner(da, db) = e.topLeftCorner(da, da) * f.w_a * f.w_b.transpose();
  Cp.bottomLeftCorner(db, da) = e.bottomRightCorner(db, db) * f.w_b * f.w_a.transpose();
  Mat Ft = f.S * gen.diffusion * f.S.transpose();
  const Mat& Mp = f.M_prime;
  const double K = model.rank1().k_g;

  Mat Ig = sandwich_integral(-Mp, Cp, Mp, t);
  Mat Ith = sandwich_integral(-Mp, Ft, Mat(-Mp.transpose()), t);

  PerturbativeResult out;
  out.V_tilde = symmetrize(0.5 * Mat::Identity(n, n) + 0.5 * K * (Ig + Ig.transpose()) + Ith);
  out.S = f.S;
  out.R = expm(Mp * t);
  out.t = t;
  return out;
}

namespace {

double simpson(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  if (n < 3) return n == 2 ? 0.5 * h * (y[0] + y[1]) : 0.0;
  double acc = y.front() + y.back();
  for (std::size_t i = 1; i + 1 < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * y[i];
  return acc * h / 3.0;
}

ShapeFunctions finish(ShapeFunctions sf, double t) {
  const std::size_t n = sf.s.size();
  const double h = n > 1 ? t / static_cast<double>(n - 1) : 0.0;
  std::vector<double> aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    aa[i] = sf.f_a[i] * sf.f_a[i];
    bb[i] = sf.f_b[i] * sf.f_b[i];
    ab[i] = sf.f_a[i] * sf.f_b[i];
  }
  sf.i_a = simpson(aa, h);
  sf.i_b = simpson(bb, h);
  sf.i_ab = simpson(ab, h);
  const double den = sf.i_a * sf.i_b;
  sf.rho_sq = den > 0 ? std::clamp(sf.i_ab * sf.i_ab / den, 0.0, 1.0) : 0.0;
  return sf;
}

int odd_samples(int samples) {
  samples = std::max(samples, 3);
  return samples % 2 ? samples : samples + 1;
}

}  // namespace

ShapeFunctions shape_functions(const SystemModel& model, double t, int samples, double tol_parallel) {
  return shape_functions(model, vacuum(model.layout.modes()), t, samples, tol_parallel);
}

ShapeFunctions shape_functions(const SystemModel& model, const Mat& V0, double t, int samples,
                               double tol_parallel) {
  if (t <= 0) throw DomainError("shape_functions: t must be positive");
  LocalFrame f = local_frame(model, V0);
  const int da = model.layout.dim_a(), db = model.layout.dim_b();
  if (db == 0) throw DimensionError("shape_functions: n_b must be >= 1");
  Mat MaT = f.M_prime.topLeftCorner(da, da).transpose();
  Mat MbT = f.M_prime.bottomRightCorner(db, db).transpose();
  samples = odd_samples(samples);
  const double h = t / (samples - 1);
  Mat Ea = expm(MaT * h), Eb = expm(MbT * h);
  Vec va = f.w_a, vb = f.w_b;
  ShapeFunctions sf;
  const double na = f.w_a.squaredNorm(), nb = f.w_b.squaredNorm();
  for (int i = 0; i < samples; ++i) {
    if (i > 0) {
      // exact in exact arithmetic; re-anchor every 64 steps to limit drift
      if (i % 64 == 0) {
        va = expm(MaT * (i * h)) * f.w_a;
        vb = expm(MbT * (i * h)) * f.w_b;
      } else {
        va = Ea * va;
        vb = Eb * vb;
      }
    }
    double fa = va.dot(f.w_a) / na, fb = vb.dot(f.w_b) / nb;
    double da_dev = (va - fa * f.w_a).norm() / std::max(va.norm(), 1e-300);
    double db_dev = (vb - fb * f.w_b).norm() / std::max(vb.norm(), 1e-300);
    sf.max_deviation = std::max({sf.max_deviation, da_dev, db_dev});
    sf.s.push_back(i * h);
    sf.f_a.push_back(fa);
    sf.f_b.push_back(fb);
  }
  if (sf.max_deviation > tol_parallel)
    throw NotParallelError("shape_functions: rotated coupling vectors leave their sector (max deviation " +
                               std::to_string(sf.max_deviation) + ")",
                           sf.max_deviation);
  return finish(std::move(sf), t);
}

ShapeFunctions shape_functions_from(const std::function<double(double)>& f_a,
                                    const std::function<double(double)>& f_b, double t, int samples) {
  samples = odd_samples(samples);
  const double h = t / (samples - 1);
  ShapeFunctions sf;
  for (int i = 0; i < samples; ++i) {
    sf.s.push_back(i * h);
    sf.f_a.push_back(f_a(i * h));
    sf.f_b.push_back(f_b(i * h));
  }
  return finish(std::move(sf), t);
}

}  // namespace gausep
