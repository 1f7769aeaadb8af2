#pragma once

#include <functional>
#include <string>
#include <vector>

#include "swashsim/backstepping_control.hpp"
#include "swashsim/core_math.hpp"
#include "swashsim/errors.hpp"
#include "swashsim/trajectories.hpp"
#include "swashsim/vehicle_model.hpp"

namespace swash {

/// Classical 4th-order Runge-Kutta step for any state type supporting
/// vector-space arithmetic (double, Eigen vectors).  `f` maps state to its
/// time derivative; model errors thrown by `f` propagate.
template <typename State, typename F>
State rk4_step(F&& f, const State& x, double dt) {
  if (!(dt > 0.0)) {
    throw OutOfRange("integration step must be positive");
  }
  const State k1 = f(x);
  const State k2 = f(State(x + (0.5 * dt) * k1));
  const State k3 = f(State(x + (0.5 * dt) * k2));
  const State k4 = f(State(x + dt * k3));
  return State(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

enum class PlantModel { full2d, simplified2d, full3d };

/// Closed-loop simulation settings.  The plant for trajectory replication is
/// the full planar model with the servo idealized (commands applied
/// instantly); servo-sensitivity studies switch ideal_servo off.
struct SimConfig {
  DesignParams params{};
  PlantModel model{PlantModel::full2d};
  double Ts{1e-4};          // controller and integration step, s
  double Tf{10.0};          // final time, s
  double log_period{0.01};  // log decimation stride, s
  bool ideal_servo{true};
  bool diagonal_inertia{true};
  /// Run the spatial controller in its planar-replication mode (heading
  /// frozen, x-axis mass pair idle).  Only meaningful for full3d.
  bool planar_3d{false};
  State2D initial_2d{};
  VehicleState initial_3d{};
  double servo_natural_frequency{200.0};  // rad/s
  double servo_damping{1.0};

  /// Throws OutOfRange unless 0 < Ts <= 0.01 and Tf > Ts.
  void validate() const;
};

/// One logged sample.  The serialized columns are the scalar fields; the
/// error struct stays in memory to back the Lyapunov bookkeeping checks.
struct SimRecord {
  double t{0.0};
  double y{0.0}, z{0.0}, phi{0.0};
  double x{0.0}, theta{0.0}, psi{0.0};
  double T1{0.0}, ell_x{0.0}, ell_y{0.0}, M_psi{0.0};
  double y_ref{0.0}, z_ref{0.0}, x_ref{0.0};
  double e_star{0.0};
  double V_alt{0.0}, V_lat{0.0}, V_pitch{0.0};
  TrackingErrors errors;
};

struct SimLog {
  std::vector<SimRecord> records;
  int tracked_axes{2};  // 2 for planar runs, 3 for spatial runs
  double travel_limit{0.2};
  bool diverged{false};
  std::string divergence_reason;
};

using ReferenceFn = std::function<ReferenceSample(double)>;

/// Run the closed loop and return the log with the divergence flag set if
/// the state left the valid domain (norm above 1e6, non-finite values, or a
/// model error).  Records collected before the failure are preserved.
SimLog try_run_closed_loop(const SimConfig& cfg, const GainSet& gains,
                           const ReferenceFn& reference);

/// As try_run_closed_loop, but raises Diverged instead of returning a
/// flagged log.
SimLog run_closed_loop(const SimConfig& cfg, const GainSet& gains,
                       const ReferenceFn& reference);

enum class Axis { x, y, z };

/// Root-mean-square tracking error of one axis over the log.
/// Throws EmptyLog on a log without records.
double rmse(const SimLog& log, Axis axis);

struct RmseResult {
  double y{0.0};
  double z{0.0};
  double x{0.0};
  double overall{0.0};
};

/// Per-axis RMSE plus the overall value: the root of the mean of the
/// squared per-axis RMSEs over the tracked axes (y,z planar; x,y,z spatial).
RmseResult rmse_all(const SimLog& log);

struct LyapunovSample {
  double t{0.0};
  double V_alt{0.0};
  double V_lat{0.0};
  double V_pitch{0.0};
};

/// Per-subsystem Lyapunov function values along the log.
std::vector<LyapunovSample> lyapunov_trace(const SimLog& log);

struct Interval {
  double t_begin{0.0};
  double t_end{0.0};
};

/// Contiguous spans where the y-axis mass offset sits at the travel limit
/// (|ell_y| >= L - tol across consecutive samples).
std::vector<Interval> saturation_intervals(const SimLog& log,
                                           double tol = 1e-9);

/// Serialize the log with the fixed column header; numbers printed with 17
/// significant digits so identical runs produce byte-identical files.
void write_trace_csv(const SimLog& log, const std::string& path);

/// Summary document: per-axis and overall RMSE, saturation intervals,
/// divergence flag.
void write_summary_json(const SimLog& log, const std::string& path);

}  // namespace swash
