#include "cli/commands.hpp"

#include "cli/csv.hpp"
#include "gausep/fock.hpp"
#include "gausep/locc.hpp"
#include "gausep/locc_io.hpp"
#include "gausep/log.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <mutex>
#include <sstream>

namespace gausep::cli {

namespace {

using Row = std::vector<std::string>;

std::string b(bool v) { return v ? "1" : "0"; }

double pick_t(const Options& o, const RunConfig& c) { return o.t.value_or(c.t.value_or(1.0)); }

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

// Writes to --out when given, else to the fallback stream.
struct Sink {
  std::ofstream file;
  std::ostream* os;
  Sink(const std::string& path, std::ostream& fallback) : os(&fallback) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);
      if (!file) throw ConfigError("cannot open output '" + path + "'");
      os = &file;
    }
  }
};

Row verdict_row(const ThresholdVerdict& v) {
  return {to_string(v.bound_kind), b(v.satisfied), format_double(v.margin), b(v.necessary_and_sufficient),
          b(v.feasible), v.reason};
}

}  // namespace

GkslGenerator target_generator(const SystemModel& model) {
  if (model.is_rank1() && model.is_scalar_noise()) return build_rank1_generator(model);
  if (std::holds_alternative<MatrixWhite>(model.noise)) {
    SystemModel g = model;
    g.coupling = GeneralCoupling{coupling_matrix(model)};
    return build_general_generator(g);
  }
  return build_generator(model);
}

int cmd_threshold(const Options& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig c = load_config(o.config);
    const double tol = o.tol.value_or(kTolMargin);
    Sink sink(o.out, out);
    CsvWriter w(*sink.os);
    w.row({"bound_kind", "satisfied", "margin", "necessary_and_sufficient", "feasible", "reason"});

    ThresholdVerdict main = threshold(c.model, tol);
    w.row(verdict_row(main));

    if (c.model.is_rank1() && c.model.is_scalar_noise() && c.model.layout.n_b > 0) {
      const auto& s = c.model.scalar_noise();
      try {
        ShapeFunctions sh = shape_functions(c.model, c.V0, pick_t(o, c));
        w.row(verdict_row(stringent_ns_check(sh, s.s_a, s.s_b, s.s_ab, c.model.rank1().k_g, tol)));
      } catch (const std::exception& e) {
        ThresholdVerdict v;
        v.bound_kind = BoundKind::StringentNS;
        v.feasible = false;
        v.reason = e.what();
        w.row(verdict_row(v));
      }
    }

    if (c.damping) {
      ThresholdVerdict v;
      if (c.damping->ohmic_c2) {
        OhmicCoefficients d = ohmic_d_coefficients(c.model, *c.damping->ohmic_c2);
        if (d.parallel) {
          v = damped_bound(c.model, d.d_aa, d.d_ab, d.d_ba, d.d_bb, tol);
        } else {
          v.bound_kind = BoundKind::Damped;
          v.feasible = false;
          v.reason = d.diagnostic;
        }
      } else {
        v = damped_bound(c.model, c.damping->d_aa, c.damping->d_ab, c.damping->d_ba, c.damping->d_bb, tol);
      }
      w.row(verdict_row(v));
    }

    if (c.scenario) {
      gravity::GravityVerdict g = gravity::threshold(*c.scenario);
      w.row({"gravity_si", b(!g.entanglement_possible), format_double(g.margin), "0", "1",
             "lhs=" + format_double(g.lhs) + " rhs=" + format_double(g.rhs)});
    }
    logger()->info("threshold: {} margin {}", to_string(main.bound_kind), main.margin);
    return main.satisfied ? kExitOk : kExitViolated;
  });
}

int cmd_evolve(const Options& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig c = load_config(o.config);
    if (c.model.layout.n_b < 1) throw ConfigError("evolve: model needs n_b >= 1");
    const double t = pick_t(o, c);
    const int steps = o.steps.value_or(c.steps.value_or(10));
    if (t < 0) throw ConfigError("evolve: t must be >= 0");
    if (steps < 1) throw ConfigError("evolve: steps must be >= 1");
    GkslGenerator gen = build_generator(c.model);
    PropagatorSolution p = propagate(gen, t / steps);
    const double tol = o.tol.value_or(1e-9);

    Sink sink(o.out, out);
    CsvWriter w(*sink.os);
    w.row({"t", "min_sympl_eig_pt", "log_negativity", "physical"});
    Mat V = c.V0;
    for (int k = 0; k <= steps; ++k) {
      if (k > 0) V = symmetrize(p.Phi * V * p.Phi.transpose() + p.accumulated_noise);
      PptMultimode ppt = ppt_multimode(V, c.model.layout, tol);
      w.row({format_double(t * k / steps), format_double(ppt.min_sympl_eig),
             format_double(log_negativity(V, c.model.layout)), b(is_physical(V))});
    }
    return kExitOk;
  });
}

namespace {

double max_err(const Mat& a, const Mat& b) { return max_abs(a - b); }

Mat trotter_evolve(const LoccProtocol& p, const Mat& V0, double t, int n) {
  GaussianState s{V0, Vec::Zero(V0.rows())};
  for (int k = 0; k < n; ++k) s = channel_step(p, s.V, s.mean, t / n);
  return s.V;
}

}  // namespace

int cmd_locc_verify(const Options& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig c = load_config(o.config);
    const double tol = o.tol.value_or(kTolMargin);
    Sink sink(o.out, out);
    CsvWriter w(*sink.os);
    w.row({"key", "value"});

    SynthesisResult syn = synthesize(c.model);
    if (!syn.feasible) {
      ThresholdVerdict v = threshold(c.model, tol);
      w.row({"feasible", "0"});
      w.row({"bound_kind", to_string(v.bound_kind)});
      w.row({"margin", format_double(v.margin)});
      w.row({"reason", syn.reason});
      err << "infeasible: " << syn.reason << " (" << to_string(v.bound_kind) << " margin " << format_double(v.margin)
          << ")\n";
      return kExitInfeasible;
    }
    const LoccProtocol& p = *syn.protocol;
    EffectiveGenerator eff = effective_generator(p);
    GkslGenerator target = target_generator(c.model);
    const double r_drift = max_err(eff.generator.drift, target.drift);
    const double r_diff = max_err(eff.generator.diffusion, target.diffusion);
    w.row({"feasible", "1"});
    w.row({"channels", std::to_string(p.channels.size())});
    w.row({"generator_residual_drift", format_double(r_drift)});
    w.row({"generator_residual_diffusion", format_double(r_diff)});
    w.row({"generator_residual", format_double(std::max(r_drift, r_diff))});

    const double t = pick_t(o, c);
    const double dt = o.dt.value_or(1e-2);
    if (!(dt > 0) || !(t > 0)) throw ConfigError("locc-verify: t and dt must be positive");
    const int n = std::max(1, static_cast<int>(std::lround(t / dt)));
    const Mat V_exact = evolve(target, c.V0, t);
    const double e1 = max_err(trotter_evolve(p, c.V0, t, n), V_exact);
    const double e2 = max_err(trotter_evolve(p, c.V0, t, 2 * n), V_exact);
    const double floor = 1e-13 * std::max(1.0, max_abs(V_exact));
    w.row({"trotter_error_dt", format_double(e1)});
    w.row({"trotter_error_dt_half", format_double(e2)});
    w.row({"trotter_order", e1 <= floor ? "exact" : format_double(std::log2(e1 / std::max(e2, 1e-300)))});

    if (o.oracle) {
      if (c.model.layout.n_a != 1 || c.model.layout.n_b != 1)
        throw ConfigError("--oracle needs a 1+1 mode model");
      FockConfig fc;
      FockSpace space(fc);
      const CMat rho0 = pure_density(fock_vacuum(space));
      const CMat rho_probe = pure_density(kron(coherent_state(fc.cutoff, cplx(0.3, 0.1)), squeezed_vacuum(fc.cutoff, 0.2)));
      const double h = 1e-3;
      for (std::size_t k = 0; k < p.channels.size(); ++k) {
        const Rank1Channel& ch = p.channels[k];
        FockGenerator fg = fock_generator(space, channel_generator(ch, p.layout));
        double res[2];
        for (int j = 0; j < 2; ++j) {
          const double hj = h / (1 << j);
          KrausStepResult kr = kraus_average_step(space, ch, rho_probe, hj);
          LindbladResult lr = lindblad_integrate(space, fg, rho_probe, hj, hj / 20);
          res[j] = (kr.rho - lr.rho).cwiseAbs().maxCoeff();
        }
        const std::string pre = "oracle_channel" + std::to_string(k) + "_";
        w.row({pre + "residual_dt", format_double(res[0])});
        w.row({pre + "residual_dt_half", format_double(res[1])});
      }
      FockGenerator eg = fock_generator(space, eff.generator);
      double step[2];
      for (int j = 0; j < 2; ++j) {
        const double hj = h / (1 << j);
        KrausStepResult kr = kraus_protocol_step(space, p, rho_probe, hj);
        LindbladResult lr = lindblad_integrate(space, eg, rho_probe, hj, hj / 20);
        step[j] = (kr.rho - lr.rho).cwiseAbs().maxCoeff();
      }
      w.row({"oracle_step_residual_dt", format_double(step[0])});
      w.row({"oracle_step_residual_dt_half", format_double(step[1])});
      w.row({"oracle_step_ratio", format_double(step[0] / std::max(step[1], 1e-300))});
      const double ts = std::min(t, 0.05);
      FockGenerator tg = fock_generator(space, target);
      LindbladResult lr = lindblad_integrate(space, tg, rho0, ts);
      GaussianState gs = extract_covariance(space, lr.rho);
      w.row({"oracle_semigroup_residual", format_double(max_err(gs.V, evolve(target, vacuum(2), ts)))});
      w.row({"oracle_leakage", format_double(lr.max_leakage)});
    }
    return kExitOk;
  });
}

namespace {

struct SweepPoint {
  std::vector<double> coords;
};

Row evaluate_point(const RunConfig& c, const SweepSpec& spec, const SweepPoint& pt, double t, double tol) {
  std::vector<std::pair<std::vector<std::string>, double>> sets;
  for (std::size_t a = 0; a < spec.axes.size(); ++a) sets.emplace_back(spec.axes[a].paths, pt.coords[a]);
  SystemModel m = model_with(c.model_json, sets);
  Row row;
  for (double x : pt.coords) row.push_back(format_double(x));
  std::optional<Mat> V;
  auto evolved = [&]() -> const Mat& {
    if (!V) V = evolve(target_generator(m), c.V0, t);
    return *V;
  };
  for (const auto& o : spec.outputs) {
    if (o == "margin" || o == "satisfied") {
      ThresholdVerdict v = threshold(m, tol);
      row.push_back(o == "margin" ? format_double(v.margin) : b(v.satisfied));
    } else if (o == "nu_tilde_minus") {
      row.push_back(format_double(ppt_multimode(evolved(), m.layout).min_sympl_eig));
    } else if (o == "log_negativity") {
      row.push_back(format_double(log_negativity(evolved(), m.layout)));
    } else if (o == "feasibility") {
      bool f = false;
      try {
        f = synthesize(m).feasible;
      } catch (const std::exception&) {
        f = false;
      }
      row.push_back(b(f));
    }
  }
  return row;
}

std::vector<SweepPoint> grid(const SweepSpec& spec) {
  std::vector<std::vector<double>> vals;
  for (const auto& a : spec.axes) vals.push_back(a.values());
  std::vector<SweepPoint> pts{{{}}};
  for (const auto& v : vals) {
    std::vector<SweepPoint> next;
    for (const auto& p : pts)
      for (double x : v) {
        SweepPoint q = p;
        q.coords.push_back(x);
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  return pts;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig c = load_config(o.config);
    if (!c.sweep) throw ConfigError("sweep: config has no 'sweep' section");
    const SweepSpec& spec = *c.sweep;
    const double t = pick_t(o, c);
    const double tol = o.tol.value_or(kTolMargin);
    const int jobs = std::max(1, o.jobs);
    const std::vector<SweepPoint> pts = grid(spec);

    Row header;
    for (const auto& a : spec.axes) header.push_back(a.name());
    for (const auto& s : spec.outputs) header.push_back(s);
    const std::string header_line = csv_row(header);

    // Checkpoint: "<fingerprint>\n<rows done>\n" next to the output file.
    std::size_t done = 0;
    std::string ckpt, fingerprint;
    std::ofstream file;
    std::ostream* os = &out;
    if (!o.out.empty()) {
      ckpt = o.out + ".ckpt";
      fingerprint = std::to_string(std::hash<std::string>{}(read_file(o.config) + "|" + format_double(t) + "|" +
                                                             format_double(tol)));
      std::ifstream ck(ckpt);
      std::string fp;
      std::size_t rows = 0;
      if (ck && (ck >> fp >> rows) && fp == fingerprint && std::filesystem::exists(o.out)) {
        // keep header plus the checkpointed rows, drop any partial tail
        std::string body = read_file(o.out);
        std::size_t pos = 0, lines = 0;
        while (lines < rows + 1) {
          std::size_t nl = body.find("\r\n", pos);
          if (nl == std::string::npos) break;
          pos = nl + 2;
          ++lines;
        }
        if (lines == rows + 1 && body.compare(0, header_line.size(), header_line) == 0) {
          std::filesystem::resize_file(o.out, pos);
          done = rows;
          logger()->info("sweep: resuming after {} rows", done);
        }
      }
      file.open(o.out, done > 0 ? std::ios::binary | std::ios::app : std::ios::binary | std::ios::trunc);
      if (!file) throw ConfigError("cannot open output '" + o.out + "'");
      os = &file;
    }
    if (done == 0) *os << header_line;

    auto write_ckpt = [&](std::size_t rows) {
      if (ckpt.empty()) return;
      std::ofstream ck(ckpt, std::ios::trunc);
      ck << fingerprint << "\n" << rows << "\n";
    };
    write_ckpt(done);

    const std::size_t chunk = static_cast<std::size_t>(jobs) * 4;
    for (std::size_t start = done; start < pts.size(); start += chunk) {
      const std::size_t end = std::min(pts.size(), start + chunk);
      std::vector<Row> rows(end - start);
      std::vector<std::future<void>> fut;
      std::size_t next = start;
      std::mutex mu;
      for (int j = 0; j < jobs; ++j)
        fut.push_back(std::async(std::launch::async, [&] {
          for (;;) {
            std::size_t i;
            {
              std::lock_guard<std::mutex> lk(mu);
              if (next >= end) return;
              i = next++;
            }
            rows[i - start] = evaluate_point(c, spec, pts[i], t, tol);
          }
        }));
      for (auto& f : fut) f.get();
      for (const auto& r : rows) *os << csv_row(r);
      os->flush();
      write_ckpt(end);
    }
    return kExitOk;
  });
}

}  // namespace gausep::cli
