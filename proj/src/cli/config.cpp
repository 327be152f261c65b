#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gausep::cli {

namespace {

std::string pointer_of(const std::string& dotted) {
  std::string p = "/";
  for (char c : dotted) p += c == '.' ? '/' : c;
  return p;
}

SweepSpec sweep_from_json(const json& j) {
  SweepSpec s;
  if (!j.contains("axes") || !j.at("axes").is_array() || j.at("axes").empty())
    throw ConfigError("sweep: 'axes' must be a non-empty array");
  for (const auto& a : j.at("axes")) {
    SweepAxis ax;
    if (a.contains("paths"))
      ax.paths = a.at("paths").get<std::vector<std::string>>();
    else if (a.contains("path"))
      ax.paths = {a.at("path").get<std::string>()};
    else
      throw ConfigError("sweep axis: missing 'path'");
    ax.min = a.at("min").get<double>();
    ax.max = a.at("max").get<double>();
    ax.points = a.at("points").get<int>();
    const std::string scale = a.value("scale", "lin");
    if (scale != "lin" && scale != "log") throw ConfigError("sweep axis: scale must be lin or log");
    ax.log_scale = scale == "log";
    if (ax.points < 2) throw ConfigError("sweep axis: points must be >= 2");
    if (!(ax.min < ax.max)) throw ConfigError("sweep axis: min must be < max");
    if (ax.log_scale && !(ax.min > 0)) throw ConfigError("sweep axis: log scale needs min > 0");
    s.axes.push_back(std::move(ax));
  }
  s.outputs = j.value("outputs", std::vector<std::string>{"margin", "nu_tilde_minus", "log_negativity", "feasibility"});
  for (const auto& o : s.outputs)
    if (o != "margin" && o != "satisfied" && o != "nu_tilde_minus" && o != "log_negativity" && o != "feasibility")
      throw ConfigError("sweep: unknown output '" + o + "'");
  return s;
}

}  // namespace

std::string SweepAxis::name() const {
  std::string n;
  for (const auto& p : paths) n += (n.empty() ? "" : "+") + p;
  return n;
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    v[i] = log_scale ? min * std::pow(max / min, f) : min + (max - min) * f;
  }
  v.front() = min;
  v.back() = max;
  return v;
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << origin << ":" << line << ":" << col << ": parse error: " << e.what();
    throw ConfigError(os.str());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  json j = parse_json_text(ss.str(), path);
  try {
    return config_from_json(j);
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (j.contains("layout")) {
    c.model_json = j;
  } else if (j.contains("model")) {
    c.model_json = j.at("model");
  } else if (j.contains("scenario")) {
    c.scenario = gravity::scenario_from_json(j.at("scenario"));
    if (!j.contains("omega_rad_per_s")) throw ConfigError("scenario config needs 'omega_rad_per_s'");
    auto scaled = gravity::to_model(*c.scenario, j.at("omega_rad_per_s").get<double>());
    c.units = scaled.units;
    c.model_json = model_to_json(scaled.model);
  } else {
    throw ConfigError("config needs 'model', 'scenario' or a bare model object");
  }
  c.model = model_from_json(c.model_json);
  c.model.validate();

  c.V0 = vacuum(c.model.layout.modes());
  if (j.contains("initial_state")) {
    const json& s = j.at("initial_state");
    if (s.is_string()) {
      if (s.get<std::string>() != "vacuum") throw ConfigError("initial_state: only \"vacuum\" or {\"V0\": ...}");
    } else {
      c.V0 = matrix_from_json(s.at("V0"), "initial_state.V0");
      if (c.V0.rows() != c.model.layout.dim() || c.V0.cols() != c.model.layout.dim())
        throw ConfigError("initial_state.V0 has the wrong shape");
      if (!is_physical(c.V0)) throw ConfigError("initial_state.V0 is not a physical covariance matrix");
    }
  }
  if (j.contains("t")) c.t = j.at("t").get<double>();
  if (j.contains("steps")) c.steps = j.at("steps").get<int>();
  if (j.contains("damping")) {
    const json& d = j.at("damping");
    Damping dm;
    if (d.contains("ohmic_c2")) dm.ohmic_c2 = d.at("ohmic_c2").get<double>();
    dm.d_aa = d.value("d_aa", 0.0);
    dm.d_ab = d.value("d_ab", 0.0);
    dm.d_ba = d.value("d_ba", 0.0);
    dm.d_bb = d.value("d_bb", 0.0);
    c.damping = dm;
  }
  if (j.contains("sweep")) c.sweep = sweep_from_json(j.at("sweep"));
  return c;
}

SystemModel model_with(const json& model_json, const std::vector<std::pair<std::vector<std::string>, double>>& sets) {
  json m = model_json;
  for (const auto& [paths, value] : sets)
    for (const auto& p : paths) {
      json::json_pointer ptr(pointer_of(p));
      if (!m.contains(ptr)) throw ConfigError("sweep path '" + p + "' not found in model");
      m[ptr] = value;
    }
  return model_from_json(m);
}

SystemModel model_with(const json& model_json, const std::vector<std::string>& paths, double value) {
  return model_with(model_json, {{paths, value}});
}

}  // namespace gausep::cli
