#include "swashsim/config.hpp"

#include <cctype>
#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "swashsim/errors.hpp"
#include "swashsim/trajectories.hpp"

namespace swash {

namespace {

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line{0};
};

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& message) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + message);
}

double parse_double(const Entry& e, const std::string& origin) {
  const std::string v = trim(e.value);
  char* end = nullptr;
  const double parsed = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) {
    fail(origin, e.line, "field '" + e.key + "' expects a number, got '" +
                             e.value + "'");
  }
  return parsed;
}

bool parse_bool(const Entry& e, const std::string& origin) {
  const std::string v = trim(e.value);
  if (v == "true") return true;
  if (v == "false") return false;
  fail(origin, e.line,
       "field '" + e.key + "' expects true or false, got '" + e.value + "'");
}

std::vector<double> parse_double_list(const Entry& e,
                                      const std::string& origin) {
  std::vector<double> out;
  std::istringstream stream(e.value);
  std::string token;
  while (stream >> token) {
    char* end = nullptr;
    const double parsed = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
      fail(origin, e.line, "field '" + e.key + "' has a non-numeric entry '" +
                               token + "'");
    }
    out.push_back(parsed);
  }
  return out;
}

std::vector<std::pair<double, double>> parse_pair_list(
    const Entry& e, const std::string& origin) {
  std::vector<std::pair<double, double>> out;
  std::istringstream stream(e.value);
  std::string token;
  while (stream >> token) {
    const std::size_t colon = token.find(':');
    if (colon == std::string::npos) {
      fail(origin, e.line, "field '" + e.key +
                               "' expects beta:length pairs, got '" + token +
                               "'");
    }
    const std::string a = token.substr(0, colon);
    const std::string b = token.substr(colon + 1);
    char* end = nullptr;
    const double beta = std::strtod(a.c_str(), &end);
    const bool a_ok = !a.empty() && end == a.c_str() + a.size();
    const double length = std::strtod(b.c_str(), &end);
    const bool b_ok = !b.empty() && end == b.c_str() + b.size();
    if (!a_ok || !b_ok) {
      fail(origin, e.line, "field '" + e.key +
                               "' expects beta:length pairs, got '" + token +
                               "'");
    }
    out.emplace_back(beta, length);
  }
  return out;
}

PlantModel parse_model(const Entry& e, const std::string& origin) {
  const std::string v = trim(e.value);
  if (v == "full2d") return PlantModel::full2d;
  if (v == "simplified2d") return PlantModel::simplified2d;
  if (v == "full3d") return PlantModel::full3d;
  fail(origin, e.line,
       "field 'model' expects full2d, simplified2d, or full3d, got '" +
           e.value + "'");
}

bool is_builtin_scenario(const std::string& scenario) {
  return scenario == "linear" || scenario == "complex" || scenario == "hover";
}

std::vector<Entry> tokenize(const std::string& text,
                            const std::string& origin) {
  std::vector<Entry> entries;
  std::istringstream stream(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(stream, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s.front() == '#' || s.front() == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) {
        fail(origin, line, "malformed section header '" + s + "'");
      }
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) {
      fail(origin, line, "expected 'key = value', got '" + s + "'");
    }
    if (section.empty()) {
      fail(origin, line, "key outside of any [section]");
    }
    Entry e;
    e.section = section;
    e.key = trim(s.substr(0, eq));
    e.value = trim(s.substr(eq + 1));
    e.line = line;
    if (e.key.empty()) {
      fail(origin, line, "empty key before '='");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void apply_vehicle(RunConfig& cfg, const Entry& e, const std::string& origin) {
  if (e.key == "M") cfg.vehicle.M = parse_double(e, origin);
  else if (e.key == "m") cfg.vehicle.m = parse_double(e, origin);
  else if (e.key == "m_b") cfg.vehicle.m_b = parse_double(e, origin);
  else if (e.key == "L") cfg.vehicle.L = parse_double(e, origin);
  else if (e.key == "g") cfg.vehicle.g = parse_double(e, origin);
  else if (e.key == "gamma1") cfg.vehicle.gamma1 = parse_double(e, origin);
  else if (e.key == "gamma2") cfg.vehicle.gamma2 = parse_double(e, origin);
  else fail(origin, e.line, "unknown key '" + e.key + "' in [vehicle]");
}

void apply_gains(RunConfig& cfg, const Entry& e, const std::string& origin) {
  GainSet& g = cfg.gains;
  if (e.key == "k1") g.k1 = parse_double(e, origin);
  else if (e.key == "k2") g.k2 = parse_double(e, origin);
  else if (e.key == "k3") g.k3 = parse_double(e, origin);
  else if (e.key == "k4") g.k4 = parse_double(e, origin);
  else if (e.key == "k5") g.k5 = parse_double(e, origin);
  else if (e.key == "k6") g.k6 = parse_double(e, origin);
  else if (e.key == "k7") g.k7 = parse_double(e, origin);
  else if (e.key == "k8") g.k8 = parse_double(e, origin);
  else if (e.key == "k9") g.k9 = parse_double(e, origin);
  else if (e.key == "k10") g.k10 = parse_double(e, origin);
  else if (e.key == "epsilon1") g.epsilon1 = parse_double(e, origin);
  else if (e.key == "theta1") g.theta1 = parse_double(e, origin);
  else if (e.key == "theta2") g.theta2 = parse_double(e, origin);
  else fail(origin, e.line, "unknown key '" + e.key + "' in [gains]");
}

void apply_run(RunConfig& cfg, const Entry& e, const std::string& origin) {
  if (e.key == "scenario") cfg.scenario = trim(e.value);
  else if (e.key == "model") cfg.model = parse_model(e, origin);
  else if (e.key == "Ts") cfg.Ts = parse_double(e, origin);
  else if (e.key == "Tf") cfg.Tf = parse_double(e, origin);
  else if (e.key == "log_period") cfg.log_period = parse_double(e, origin);
  else if (e.key == "ideal_servo") cfg.ideal_servo = parse_bool(e, origin);
  else if (e.key == "diagonal_inertia")
    cfg.diagonal_inertia = parse_bool(e, origin);
  else if (e.key == "theta_mode") cfg.theta_mode = parse_bool(e, origin);
  else fail(origin, e.line, "unknown key '" + e.key + "' in [run]");
}

void apply_output(RunConfig& cfg, const Entry& e, const std::string& origin) {
  if (e.key == "trace") cfg.trace_name = trim(e.value);
  else if (e.key == "summary") cfg.summary_name = trim(e.value);
  else if (e.key == "surface") cfg.surface_name = trim(e.value);
  else fail(origin, e.line, "unknown key '" + e.key + "' in [output]");
}

void apply_sizing(RunConfig& cfg, const Entry& e, const std::string& origin) {
  if (e.key == "betas") cfg.sizing_betas = parse_double_list(e, origin);
  else if (e.key == "lengths")
    cfg.sizing_lengths = parse_double_list(e, origin);
  else if (e.key == "stroke_fraction")
    cfg.stroke_fraction = parse_double(e, origin);
  else if (e.key == "period") cfg.sizing_period = parse_double(e, origin);
  else if (e.key == "traces") cfg.sizing_traces = parse_pair_list(e, origin);
  else fail(origin, e.line, "unknown key '" + e.key + "' in [sizing]");
}

void validate_semantics(const RunConfig& cfg, const std::string& origin) {
  try {
    cfg.vehicle.validate();
  } catch (const Error& err) {
    throw ConfigError(origin + ": [vehicle] invalid: " + err.what());
  }
  try {
    cfg.gains.validate();
  } catch (const Error& err) {
    throw ConfigError(origin + ": [gains] invalid: " + err.what());
  }
  if (!(cfg.Ts > 0.0) || cfg.Ts > 0.01) {
    throw ConfigError(origin +
                      ": field 'Ts' must lie in (0, 0.01] seconds, got " +
                      std::to_string(cfg.Ts));
  }
  if (!(cfg.Tf > cfg.Ts)) {
    throw ConfigError(origin + ": field 'Tf' must exceed Ts");
  }
  if (!(cfg.log_period > 0.0)) {
    throw ConfigError(origin + ": field 'log_period' must be positive");
  }
  if (!is_builtin_scenario(cfg.scenario) &&
      cfg.scenario.rfind("csv:", 0) != 0) {
    throw ConfigError(origin +
                      ": field 'scenario' expects linear, complex, hover, or "
                      "csv:<path>, got '" +
                      cfg.scenario + "'");
  }
  if (cfg.scenario.rfind("csv:", 0) == 0 && cfg.scenario.size() == 4) {
    throw ConfigError(origin + ": field 'scenario' csv form needs a path");
  }
  if (cfg.trace_name.empty() || cfg.summary_name.empty() ||
      cfg.surface_name.empty()) {
    throw ConfigError(origin + ": output file names must not be empty");
  }
  if (!(cfg.stroke_fraction > 0.0 && cfg.stroke_fraction <= 1.0)) {
    throw ConfigError(origin +
                      ": field 'stroke_fraction' must lie in (0, 1]");
  }
  if (!(cfg.sizing_period > 0.0)) {
    throw ConfigError(origin + ": field 'period' must be positive");
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != 0) out += ' ';
    out += format_double(values[i]);
  }
  return out;
}

std::string format_pairs(const std::vector<std::pair<double, double>>& pairs) {
  std::string out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i != 0) out += ' ';
    out += format_double(pairs[i].first);
    out += ':';
    out += format_double(pairs[i].second);
  }
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text,
                            const std::string& origin) {
  const std::vector<Entry> entries = tokenize(text, origin);

  // The preset resolves before any per-gain override regardless of where it
  // sits in the file, so override keys always win.
  RunConfig cfg;
  for (const Entry& e : entries) {
    if (e.section == "gains" && e.key == "preset") {
      const std::string name = trim(e.value);
      try {
        cfg.gains = gains_by_name(name);
      } catch (const Error&) {
        fail(origin, e.line,
             "field 'preset' expects linear or complex, got '" + e.value +
                 "'");
      }
      cfg.gain_preset = name;
    }
  }

  for (const Entry& e : entries) {
    if (e.section == "vehicle") apply_vehicle(cfg, e, origin);
    else if (e.section == "gains") {
      if (e.key == "preset") continue;  // handled above
      apply_gains(cfg, e, origin);
    } else if (e.section == "run") apply_run(cfg, e, origin);
    else if (e.section == "output") apply_output(cfg, e, origin);
    else if (e.section == "sizing") apply_sizing(cfg, e, origin);
    else fail(origin, e.line, "unknown section [" + e.section + "]");
  }

  if (!cfg.theta_mode) {
    cfg.gains.theta1 = 0.0;
    cfg.gains.theta2 = 0.0;
  }

  validate_semantics(cfg, origin);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (f == nullptr) {
    throw ConfigError("cannot read config file: " + path);
  }
  std::string text;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0) {
    text.append(buf, got);
  }
  std::fclose(f);
  return parse_config_text(text, path);
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  out += "[vehicle]\n";
  out += "M = " + format_double(cfg.vehicle.M) + "\n";
  out += "m = " + format_double(cfg.vehicle.m) + "\n";
  out += "m_b = " + format_double(cfg.vehicle.m_b) + "\n";
  out += "L = " + format_double(cfg.vehicle.L) + "\n";
  out += "g = " + format_double(cfg.vehicle.g) + "\n";
  out += "gamma1 = " + format_double(cfg.vehicle.gamma1) + "\n";
  out += "gamma2 = " + format_double(cfg.vehicle.gamma2) + "\n";
  out += "\n[gains]\n";
  out += "preset = " + cfg.gain_preset + "\n";
  out += "k1 = " + format_double(cfg.gains.k1) + "\n";
  out += "k2 = " + format_double(cfg.gains.k2) + "\n";
  out += "k3 = " + format_double(cfg.gains.k3) + "\n";
  out += "k4 = " + format_double(cfg.gains.k4) + "\n";
  out += "k5 = " + format_double(cfg.gains.k5) + "\n";
  out += "k6 = " + format_double(cfg.gains.k6) + "\n";
  out += "k7 = " + format_double(cfg.gains.k7) + "\n";
  out += "k8 = " + format_double(cfg.gains.k8) + "\n";
  out += "k9 = " + format_double(cfg.gains.k9) + "\n";
  out += "k10 = " + format_double(cfg.gains.k10) + "\n";
  out += "epsilon1 = " + format_double(cfg.gains.epsilon1) + "\n";
  out += "theta1 = " + format_double(cfg.gains.theta1) + "\n";
  out += "theta2 = " + format_double(cfg.gains.theta2) + "\n";
  out += "\n[run]\n";
  out += "scenario = " + cfg.scenario + "\n";
  switch (cfg.model) {
    case PlantModel::full2d: out += "model = full2d\n"; break;
    case PlantModel::simplified2d: out += "model = simplified2d\n"; break;
    case PlantModel::full3d: out += "model = full3d\n"; break;
  }
  out += "Ts = " + format_double(cfg.Ts) + "\n";
  out += "Tf = " + format_double(cfg.Tf) + "\n";
  out += "log_period = " + format_double(cfg.log_period) + "\n";
  out += std::string("ideal_servo = ") +
         (cfg.ideal_servo ? "true" : "false") + "\n";
  out += std::string("diagonal_inertia = ") +
         (cfg.diagonal_inertia ? "true" : "false") + "\n";
  out += std::string("theta_mode = ") + (cfg.theta_mode ? "true" : "false") +
         "\n";
  out += "\n[output]\n";
  out += "trace = " + cfg.trace_name + "\n";
  out += "summary = " + cfg.summary_name + "\n";
  out += "surface = " + cfg.surface_name + "\n";
  out += "\n[sizing]\n";
  out += "betas = " + format_list(cfg.sizing_betas) + "\n";
  out += "lengths = " + format_list(cfg.sizing_lengths) + "\n";
  out += "stroke_fraction = " + format_double(cfg.stroke_fraction) + "\n";
  out += "period = " + format_double(cfg.sizing_period) + "\n";
  out += "traces = " + format_pairs(cfg.sizing_traces) + "\n";
  return out;
}

ReferenceFn make_reference(const RunConfig& cfg) {
  if (cfg.scenario == "linear") {
    return [](double t) { return linear_reference(t); };
  }
  if (cfg.scenario == "complex") {
    return [](double t) { return complex_reference(t); };
  }
  if (cfg.scenario == "hover") {
    return [](double) { return ReferenceSample{}; };
  }
  if (cfg.scenario.rfind("csv:", 0) == 0) {
    const std::string path = cfg.scenario.substr(4);
    auto table =
        std::make_shared<SampledReference>(SampledReference::from_csv(path));
    return [table](double t) { return (*table)(t); };
  }
  throw ConfigError("unknown scenario '" + cfg.scenario + "'");
}

SimConfig make_sim_config(const RunConfig& cfg) {
  SimConfig sim;
  sim.params = cfg.vehicle;
  sim.model = cfg.model;
  sim.Ts = cfg.Ts;
  sim.Tf = cfg.Tf;
  sim.log_period = cfg.log_period;
  sim.ideal_servo = cfg.ideal_servo;
  sim.diagonal_inertia = cfg.diagonal_inertia;
  sim.planar_3d =
      cfg.model == PlantModel::full3d && is_builtin_scenario(cfg.scenario);
  return sim;
}

}  // namespace swash
