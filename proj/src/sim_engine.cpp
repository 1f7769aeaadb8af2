#include "swashsim/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "swashsim/actuation.hpp"

namespace swash {

namespace {

constexpr double kDivergenceNorm = 1e6;

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec12 = Eigen::Matrix<double, 12, 1>;

Vec6 pack_2d(const State2D& s) {
  Vec6 x;
  x << s.y, s.z, s.y_dot, s.z_dot, s.phi, s.phi_dot;
  return x;
}

State2D unpack_2d(const Vec6& x) {
  State2D s;
  s.y = x(0);
  s.z = x(1);
  s.y_dot = x(2);
  s.z_dot = x(3);
  s.phi = x(4);
  s.phi_dot = x(5);
  return s;
}

Vec6 pack_deriv_2d(const Derivative2D& d) {
  Vec6 x;
  x << d.y_dot, d.z_dot, d.y_ddot, d.z_ddot, d.phi_dot, d.phi_ddot;
  return x;
}

Vec12 pack_3d(const VehicleState& s) {
  Vec12 x;
  x << s.pos, s.vel, s.angles.phi, s.angles.theta, s.angles.psi, s.omega;
  return x;
}

VehicleState unpack_3d(const Vec12& x, const VehicleState& ell_source) {
  VehicleState s = ell_source;  // keep the frozen mass-offset inputs
  s.pos = x.segment<3>(0);
  s.vel = x.segment<3>(3);
  s.angles = EulerAngles{x(6), x(7), x(8)};
  s.omega = x.segment<3>(9);
  return s;
}

double lyapunov_value(double e_a, double e_b) {
  return 0.5 * (e_a * e_a + e_b * e_b);
}

void fill_lyapunov(SimRecord& rec) {
  rec.V_alt = lyapunov_value(rec.errors.e3, rec.errors.e4);
  rec.V_lat = lyapunov_value(rec.errors.e1, rec.errors.e2);
  rec.V_pitch = lyapunov_value(rec.errors.e5 - rec.errors.e_star,
                               rec.errors.e6 - rec.errors.e_star_dot);
}

struct ServoAxis {
  ServoState state;
  bool ideal{true};

  void configure(const SimConfig& cfg) {
    ideal = cfg.ideal_servo;
    state.natural_frequency = cfg.servo_natural_frequency;
    state.damping = cfg.servo_damping;
    state.travel_limit = cfg.params.L;
  }

  /// Returns the (ell, ell_dot, ell_ddot) triple applied over [t, t+Ts).
  void advance(double command, double dt, double& ell, double& ell_dot,
               double& ell_ddot) {
    if (ideal) {
      ell = command;
      ell_dot = 0.0;
      ell_ddot = 0.0;
      return;
    }
    state = servo_step(state, command, dt);
    ell = state.ell;
    ell_dot = state.ell_dot;
    ell_ddot = state.ell_ddot;
  }
};

SimLog run_2d(const SimConfig& cfg, const GainSet& gains,
              const ReferenceFn& reference) {
  SimLog log;
  log.tracked_axes = 2;
  log.travel_limit = cfg.params.L;

  const double I_c = constant_inertia(cfg.params);
  State2D s = cfg.initial_2d;
  ControllerState ctrl(cfg.Ts);
  ServoAxis servo_y;
  servo_y.configure(cfg);

  const long n_steps = std::lround(cfg.Tf / cfg.Ts);
  const long stride =
      std::max<long>(1, std::lround(cfg.log_period / cfg.Ts));

  for (long k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * cfg.Ts;
    const ReferenceSample ref = reference(t);

    Control2DResult c;
    try {
      c = control_step_2d(gains, cfg.params, I_c, s, ref, ctrl);
    } catch (const Error& e) {
      log.diverged = true;
      log.divergence_reason = e.what();
      break;
    }
    ctrl = c.ctrl;

    double ell = 0.0, ell_dot = 0.0, ell_ddot = 0.0;
    // The servo output over this step is what the plant (and the log) see.
    const double servo_pos_before = servo_y.state.ell;
    if (k < n_steps) {
      servo_y.advance(c.ell_y_cmd, cfg.Ts, ell, ell_dot, ell_ddot);
    }

    if (k % stride == 0 || k == n_steps) {
      SimRecord rec;
      rec.t = t;
      rec.y = s.y;
      rec.z = s.z;
      rec.phi = s.phi;
      rec.T1 = c.T1;
      rec.ell_y = cfg.ideal_servo ? c.ell_y_cmd : servo_pos_before;
      rec.y_ref = ref.pos.y();
      rec.z_ref = ref.pos.z();
      rec.x_ref = ref.pos.x();
      rec.e_star = c.errors.e_star;
      rec.errors = c.errors;
      fill_lyapunov(rec);
      log.records.push_back(rec);
    }
    if (k == n_steps) break;

    const Input2D u{c.T1, ell, ell_dot, ell_ddot};
    const auto f = [&](const Vec6& x) {
      const State2D xs = unpack_2d(x);
      const Derivative2D d =
          cfg.model == PlantModel::simplified2d
              ? derivatives_2d_simplified(cfg.params, I_c, xs, u)
              : derivatives_2d_full(cfg.params, xs, u);
      return pack_deriv_2d(d);
    };
    Vec6 x = pack_2d(s);
    try {
      x = rk4_step(f, x, cfg.Ts);
    } catch (const Error& e) {
      log.diverged = true;
      log.divergence_reason = e.what();
      break;
    }
    if (!x.allFinite() || x.norm() > kDivergenceNorm) {
      log.diverged = true;
      log.divergence_reason = "state norm exceeded the valid domain";
      break;
    }
    s = unpack_2d(x);
  }
  return log;
}

SimLog run_3d(const SimConfig& cfg, const GainSet& gains,
              const ReferenceFn& reference) {
  SimLog log;
  // Planar-replication runs score the same two axes as the planar model so
  // their overall RMSE is directly comparable.
  log.tracked_axes = cfg.planar_3d ? 2 : 3;
  log.travel_limit = cfg.params.L;

  VehicleState s = cfg.initial_3d;
  ControllerState ctrl(cfg.Ts);
  Controller3DOptions copts;
  copts.planar = cfg.planar_3d;
  ServoAxis servo_x, servo_y;
  servo_x.configure(cfg);
  servo_y.configure(cfg);
  servo_x.state.ell = cfg.initial_3d.ell_x;
  servo_y.state.ell = cfg.initial_3d.ell_y;
  ModelOptions mopts;
  mopts.diagonal_inertia = cfg.diagonal_inertia;

  const long n_steps = std::lround(cfg.Tf / cfg.Ts);
  const long stride =
      std::max<long>(1, std::lround(cfg.log_period / cfg.Ts));

  for (long k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * cfg.Ts;
    const ReferenceSample ref = reference(t);

    Control3DResult c;
    try {
      c = control_step_3d(gains, cfg.params, s, ref, ctrl, copts);
    } catch (const Error& e) {
      log.diverged = true;
      log.divergence_reason = e.what();
      break;
    }
    ctrl = c.ctrl;

    const double servo_x_before = servo_x.state.ell;
    const double servo_y_before = servo_y.state.ell;
    VehicleState plant = s;  // gains the frozen mass-offset inputs below
    if (k < n_steps) {
      servo_x.advance(c.u.ell_x_cmd, cfg.Ts, plant.ell_x, plant.ell_x_dot,
                      plant.ell_x_ddot);
      servo_y.advance(c.u.ell_y_cmd, cfg.Ts, plant.ell_y, plant.ell_y_dot,
                      plant.ell_y_ddot);
    }

    if (k % stride == 0 || k == n_steps) {
      SimRecord rec;
      rec.t = t;
      rec.x = s.pos.x();
      rec.y = s.pos.y();
      rec.z = s.pos.z();
      rec.phi = s.angles.phi;
      rec.theta = s.angles.theta;
      rec.psi = s.angles.psi;
      rec.T1 = c.u.T1;
      rec.M_psi = c.u.M_psi;
      rec.ell_x = cfg.ideal_servo ? c.u.ell_x_cmd : servo_x_before;
      rec.ell_y = cfg.ideal_servo ? c.u.ell_y_cmd : servo_y_before;
      rec.x_ref = ref.pos.x();
      rec.y_ref = ref.pos.y();
      rec.z_ref = ref.pos.z();
      rec.e_star = c.errors.e_star;
      rec.errors = c.errors;
      fill_lyapunov(rec);
      log.records.push_back(rec);
    }
    if (k == n_steps) break;

    const ControlInputs u = c.u;
    const auto f = [&](const Vec12& x) {
      const VehicleState xs = unpack_3d(x, plant);
      const StateDerivative d = derivatives_3d(cfg.params, xs, u, mopts);
      Vec12 dx;
      dx << d.vel, d.accel, d.euler_rates, d.omega_dot;
      return dx;
    };
    Vec12 x = pack_3d(s);
    try {
      x = rk4_step(f, x, cfg.Ts);
    } catch (const Error& e) {
      log.diverged = true;
      log.divergence_reason = e.what();
      break;
    }
    if (!x.allFinite() || x.norm() > kDivergenceNorm) {
      log.diverged = true;
      log.divergence_reason = "state norm exceeded the valid domain";
      break;
    }
    s = unpack_3d(x, plant);
  }
  return log;
}

}  // namespace

void SimConfig::validate() const {
  params.validate();
  if (!(Ts > 0.0) || Ts > 0.01) {
    throw OutOfRange("Ts must satisfy 0 < Ts <= 0.01 s");
  }
  if (!(Tf > Ts)) {
    throw OutOfRange("Tf must exceed Ts");
  }
  if (!(log_period > 0.0)) {
    throw OutOfRange("log_period must be positive");
  }
  if (!(servo_natural_frequency > 0.0) || !(servo_damping > 0.0)) {
    throw OutOfRange("servo settings must be positive");
  }
}

SimLog try_run_closed_loop(const SimConfig& cfg, const GainSet& gains,
                           const ReferenceFn& reference) {
  cfg.validate();
  gains.validate();
  if (!reference) {
    throw OutOfRange("reference function must be callable");
  }
  if (cfg.model == PlantModel::full3d) {
    return run_3d(cfg, gains, reference);
  }
  return run_2d(cfg, gains, reference);
}

SimLog run_closed_loop(const SimConfig& cfg, const GainSet& gains,
                       const ReferenceFn& reference) {
  SimLog log = try_run_closed_loop(cfg, gains, reference);
  if (log.diverged) {
    throw Diverged("simulation diverged: " + log.divergence_reason);
  }
  return log;
}

double rmse(const SimLog& log, Axis axis) {
  if (log.records.empty()) {
    throw EmptyLog("cannot compute RMSE of an empty log");
  }
  double sum = 0.0;
  for (const SimRecord& r : log.records) {
    double e = 0.0;
    switch (axis) {
      case Axis::x:
        e = r.x_ref - r.x;
        break;
      case Axis::y:
        e = r.y_ref - r.y;
        break;
      case Axis::z:
        e = r.z_ref - r.z;
        break;
    }
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(log.records.size()));
}

RmseResult rmse_all(const SimLog& log) {
  RmseResult out;
  out.y = rmse(log, Axis::y);
  out.z = rmse(log, Axis::z);
  out.x = rmse(log, Axis::x);
  if (log.tracked_axes >= 3) {
    out.overall =
        std::sqrt((out.x * out.x + out.y * out.y + out.z * out.z) / 3.0);
  } else {
    out.overall = std::sqrt((out.y * out.y + out.z * out.z) / 2.0);
  }
  return out;
}

std::vector<LyapunovSample> lyapunov_trace(const SimLog& log) {
  std::vector<LyapunovSample> out;
  out.reserve(log.records.size());
  for (const SimRecord& r : log.records) {
    out.push_back(LyapunovSample{r.t, r.V_alt, r.V_lat, r.V_pitch});
  }
  return out;
}

std::vector<Interval> saturation_intervals(const SimLog& log, double tol) {
  std::vector<Interval> out;
  const double limit = log.travel_limit - tol;
  bool open = false;
  for (const SimRecord& r : log.records) {
    const bool saturated = std::abs(r.ell_y) >= limit;
    if (saturated && !open) {
      out.push_back(Interval{r.t, r.t});
      open = true;
    } else if (saturated && open) {
      out.back().t_end = r.t;
    } else {
      open = false;
    }
  }
  return out;
}

void write_trace_csv(const SimLog& log, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) {
    throw OutOfRange("cannot open trace file for writing: " + path);
  }
  std::fputs(
      "t,y,z,phi,x,theta,psi,T1,ell_x,ell_y,M_psi,y_ref,z_ref,x_ref,"
      "e_star,V_alt,V_lat,V_pitch\n",
      f);
  for (const SimRecord& r : log.records) {
    const double cols[] = {r.t,     r.y,     r.z,     r.phi,   r.x,
                           r.theta, r.psi,   r.T1,    r.ell_x, r.ell_y,
                           r.M_psi, r.y_ref, r.z_ref, r.x_ref, r.e_star,
                           r.V_alt, r.V_lat, r.V_pitch};
    char buf[64];
    for (std::size_t i = 0; i < sizeof(cols) / sizeof(cols[0]); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", cols[i]);
      if (i != 0) std::fputc(',', f);
      std::fputs(buf, f);
    }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

void write_summary_json(const SimLog& log, const std::string& path) {
  nlohmann::json doc;
  if (log.records.empty()) {
    doc["rmse"] = nullptr;
  } else {
    const RmseResult r = rmse_all(log);
    doc["rmse"] = {{"y", r.y}, {"z", r.z}, {"x", r.x}, {"overall", r.overall}};
  }
  nlohmann::json intervals = nlohmann::json::array();
  for (const Interval& iv : saturation_intervals(log)) {
    intervals.push_back({iv.t_begin, iv.t_end});
  }
  doc["saturation_intervals"] = intervals;
  doc["diverged"] = log.diverged;
  doc["divergence_reason"] = log.divergence_reason;
  doc["samples"] = log.records.size();
  doc["tracked_axes"] = log.tracked_axes;

  std::ofstream out(path);
  if (!out) {
    throw OutOfRange("cannot open summary file for writing: " + path);
  }
  out << doc.dump(2) << "\n";
}

}  // namespace swash
