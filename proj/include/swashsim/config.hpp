#pragma once

#include <string>
#include <utility>
#include <vector>

#include "swashsim/backstepping_control.hpp"
#include "swashsim/sim_engine.hpp"
#include "swashsim/vehicle_model.hpp"

namespace swash {

/// A complete run description as read from a configuration file: vehicle
/// constants, resolved controller gains, the scenario and plant selection,
/// stepping, feature flags, output file names, and the design-sweep grids.
///
/// Gains resolve at parse time: the preset named under [gains] supplies the
/// base values, explicit k/epsilon keys override individual entries, and the
/// theta compensation magnitudes are kept only when theta_mode is on (they
/// are forced to zero otherwise, so equal configs compare equal).
struct RunConfig {
  DesignParams vehicle{};
  std::string gain_preset{"linear"};
  GainSet gains{};
  std::string scenario{"linear"};  // linear | complex | hover | csv:<path>
  PlantModel model{PlantModel::full2d};
  double Ts{1e-4};
  double Tf{10.0};
  double log_period{0.01};
  bool ideal_servo{true};
  bool diagonal_inertia{true};
  bool theta_mode{false};
  std::string trace_name{"trace.csv"};
  std::string summary_name{"summary.json"};
  std::string surface_name{"sizing_surface.csv"};
  std::vector<double> sizing_betas{0.05, 0.09, 0.13, 0.17, 0.21};
  std::vector<double> sizing_lengths{0.1, 0.2, 0.3, 0.35, 0.4};
  double stroke_fraction{1.0};
  double sizing_period{4.0};
  std::vector<std::pair<double, double>> sizing_traces{};

  bool operator==(const RunConfig&) const = default;
};

/// Parse configuration text in the sectioned key-value format.  `origin`
/// names the source in diagnostics (a file path or "<string>").  Throws
/// ConfigError naming the line and field for unknown sections or keys,
/// malformed values, and out-of-range settings.
RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<string>");

/// Read and parse a configuration file.  Throws ConfigError when the file
/// cannot be read, plus everything parse_config_text throws.
RunConfig load_config(const std::string& path);

/// Render a config as canonical text: every key explicit, fixed section and
/// key order, full-precision numbers.  parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& cfg);

/// Reference trajectory for the configured scenario.  A csv:<path> scenario
/// loads the sampled table eagerly (throws MalformedTable on problems).
ReferenceFn make_reference(const RunConfig& cfg);

/// Closed-loop settings for the configured run.  Planar built-in scenarios
/// on the spatial plant enable the planar-replication controller mode so
/// their scores stay comparable with the planar models.
SimConfig make_sim_config(const RunConfig& cfg);

}  // namespace swash
