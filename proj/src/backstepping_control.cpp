#include "swashsim/backstepping_control.hpp"

#include <algorithm>
#include <cmath>

#include "swashsim/actuation.hpp"

namespace swash {

namespace {

constexpr double kCosGuard = 1e-3;        // singular-attitude threshold
constexpr double kHeadingHold = 1e-3;     // m, heading-command freeze radius
const double kMaxTiltCmd = 80.0 * M_PI / 180.0;

double wrap_angle(double x) { return std::atan2(std::sin(x), std::cos(x)); }

void check_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw OutOfRange(std::string(name) + " must be positive");
  }
}

/// Velocity-level backstepping bracket shared by every loop:
/// e_pos + acc_ref + k_pos * e_vel - k_pos^2 * e_pos + k_vel * e_vel.
double backstepping_bracket(double e_pos, double e_vel, double acc_ref,
                            double k_pos, double k_vel) {
  return e_pos + acc_ref + k_pos * e_vel - k_pos * k_pos * e_pos +
         k_vel * e_vel;
}

}  // namespace

void GainSet::validate() const {
  check_positive(k1, "k1");
  check_positive(k2, "k2");
  check_positive(k3, "k3");
  check_positive(k4, "k4");
  check_positive(k5, "k5");
  check_positive(k6, "k6");
  check_positive(k7, "k7");
  check_positive(k8, "k8");
  check_positive(k9, "k9");
  check_positive(k10, "k10");
  check_positive(epsilon1, "epsilon1");
  if (theta1 < 0.0 || theta2 < 0.0) {
    throw OutOfRange("reaction bounds theta1/theta2 must be non-negative");
  }
}

GainSet linear_gains() { return GainSet{}; }

GainSet complex_gains() {
  GainSet g;
  g.k1 = 5.0;
  g.k2 = 0.5;
  g.k3 = 1.0;
  g.k4 = 2.0;
  g.k5 = 1.6;
  g.k6 = 8.0;
  g.k7 = 1.6;
  g.k8 = 8.0;
  g.k9 = 5.0;
  g.k10 = 0.5;
  g.epsilon1 = 0.2;
  return g;
}

GainSet gains_by_name(const std::string& name) {
  if (name == "linear") return linear_gains();
  if (name == "complex") return complex_gains();
  throw OutOfRange("unknown gain preset: " + name);
}

void AngleDifferentiator::update(double angle, double dt, bool wrap) {
  if (!(dt > 0.0)) {
    throw OutOfRange("differentiator update period must be positive");
  }
  if (!primed) {
    // Record the first command without differencing against the zero
    // history: a synthetic step at mission start would scale with 1/dt and
    // make the loop's behaviour depend on the controller period.
    prev_angle = angle;
    primed = true;
    return;
  }
  const double alpha = dt / (10.0 * dt + dt);
  double diff = angle - prev_angle;
  if (wrap) diff = wrap_angle(diff);
  const double raw_rate = diff / dt;
  const double old_rate = rate;
  rate += alpha * (raw_rate - rate);
  const double raw_accel = (rate - old_rate) / dt;
  accel += alpha * (raw_accel - accel);
  prev_angle = angle;
}

void ControllerState::reset() {
  const double keep = dt;
  *this = ControllerState(keep);
}

double thrust_law_2d(const GainSet& gains, const DesignParams& p,
                     double theta2, const State2D& s,
                     const ReferenceSample& ref) {
  const double e3 = ref.pos.z() - s.z;
  const double e4 = ref.vel.z() + gains.k3 * e3 - s.z_dot;
  const double cphi = std::cos(s.phi);
  if (std::abs(cphi) < kCosGuard) {
    throw NearSingularAttitude("thrust law undefined near 90 deg tilt");
  }
  const double bracket =
      p.g - p.beta() * theta2 / p.M +
      backstepping_bracket(e3, e4, ref.acc.z(), gains.k3, gains.k4);
  const double T1 = (p.M / cphi) * bracket;
  return std::clamp(T1, 0.0, 4.0 * p.M * p.g);
}

double virtual_uy_2d(const GainSet& gains, const DesignParams& p,
                     double theta1, double T1, const State2D& s,
                     const ReferenceSample& ref) {
  if (T1 <= 0.0) {
    throw ZeroThrust("lateral virtual input undefined at zero thrust");
  }
  const double e1 = ref.pos.y() - s.y;
  const double e2 = ref.vel.y() + gains.k5 * e1 - s.y_dot;
  const double u =
      (p.M / T1) *
      (-p.beta() * theta1 / p.M +
       backstepping_bracket(e1, e2, ref.acc.y(), gains.k5, gains.k6));
  return std::clamp(u, -1.0, 1.0);
}

double desired_pitch_2d(double u_y) {
  return std::asin(std::clamp(u_y, -1.0, 1.0));
}

EllLawResult ell_law_2d(const GainSet& gains, const DesignParams& p,
                        double I_c, double T1, const State2D& s,
                        double x5_star, const ControllerState& ctrl) {
  if (T1 <= 0.0) {
    throw ZeroThrust("mass-position law undefined at zero thrust");
  }
  const double cphi = std::cos(s.phi);
  if (std::abs(cphi) < kCosGuard) {
    throw NearSingularAttitude("mass-position law undefined near 90 deg tilt");
  }
  EllLawResult out;
  out.ctrl = ctrl;
  out.ctrl.tilt_y_cmd.update(x5_star, ctrl.dt);
  out.e5 = x5_star - s.phi;
  out.e6 = out.ctrl.tilt_y_cmd.rate + gains.k1 * out.e5 - s.phi_dot;
  const double eb5 = out.e5 - ctrl.e_star;
  const double eb6 = out.e6 - ctrl.e_star_dot;
  const double b = p.beta();
  out.raw = (I_c / (b * T1 * cphi)) *
            (eb5 + gains.k1 * eb6 - gains.k1 * gains.k1 * eb5 +
             gains.k2 * eb6);
  out.saturated = saturate_ell(out.raw, p.L);
  const double es_dot = -(b * gains.epsilon1 / I_c) * ctrl.e_star +
                        b * (out.raw - out.saturated) / I_c;
  out.ctrl.e_star = ctrl.e_star + ctrl.dt * es_dot;
  out.ctrl.e_star_dot = es_dot;
  return out;
}

double lyapunov_vdot_check(const GainSet& gains, Subsystem subsystem,
                           const TrackingErrors& e) {
  switch (subsystem) {
    case Subsystem::altitude:
      return -gains.k3 * e.e3 * e.e3 - gains.k4 * e.e4 * e.e4;
    case Subsystem::lateral:
      return -gains.k5 * e.e1 * e.e1 - gains.k6 * e.e2 * e.e2;
    case Subsystem::pitch: {
      const double eb5 = e.e5 - e.e_star;
      const double eb6 = e.e6 - e.e_star_dot;
      return -gains.k1 * eb5 * eb5 - gains.k2 * eb6 * eb6;
    }
  }
  throw OutOfRange("unknown Lyapunov subsystem");
}

Vec3 decoupling_inputs_3d(const EulerAngles& angles, const Vec3& v) {
  const double sphi = std::sin(angles.phi);
  const double cphi = std::cos(angles.phi);
  const double sth = std::sin(angles.theta);
  const double cth = std::cos(angles.theta);
  const double spsi = std::sin(angles.psi);
  const double cpsi = std::cos(angles.psi);
  Mat3 A;
  A << cphi * spsi - cpsi * sphi * sth, cpsi * cth,
      sphi * spsi + cphi * cpsi * sth,
      cphi * cpsi + sphi * spsi * sth, cth * spsi,
      -cpsi * sphi + cphi * spsi * sth,
      cth * sphi, sth, cphi * cth;
  return A * v;
}

Control2DResult control_step_2d(const GainSet& gains, const DesignParams& p,
                                double I_c, const State2D& s,
                                const ReferenceSample& ref,
                                const ControllerState& ctrl) {
  Control2DResult out;
  out.T1 = thrust_law_2d(gains, p, gains.theta2, s, ref);
  const double u_y = virtual_uy_2d(gains, p, gains.theta1, out.T1, s, ref);
  out.x5_star =
      std::clamp(desired_pitch_2d(u_y), -kMaxTiltCmd, kMaxTiltCmd);
  const EllLawResult law =
      ell_law_2d(gains, p, I_c, out.T1, s, out.x5_star, ctrl);
  out.ell_y_raw = law.raw;
  out.ell_y_cmd = law.saturated;
  out.ctrl = law.ctrl;

  out.errors.e1 = ref.pos.y() - s.y;
  out.errors.e2 = ref.vel.y() + gains.k5 * out.errors.e1 - s.y_dot;
  out.errors.e3 = ref.pos.z() - s.z;
  out.errors.e4 = ref.vel.z() + gains.k3 * out.errors.e3 - s.z_dot;
  out.errors.e5 = law.e5;
  out.errors.e6 = law.e6;
  // Report the compensator values the law actually used this update.
  out.errors.e_star = ctrl.e_star;
  out.errors.e_star_dot = ctrl.e_star_dot;
  return out;
}

Control3DResult control_step_3d(const GainSet& gains, const DesignParams& p,
                                const VehicleState& s,
                                const ReferenceSample& ref,
                                const ControllerState& ctrl,
                                const Controller3DOptions& opts) {
  Control3DResult out;
  out.ctrl = ctrl;
  const Vec3 rates = euler_rates_from_body_omega(s.angles, s.omega);
  const double b = p.beta();
  const double I_c = constant_inertia(p);   // y-axis mass pair
  const double I_cy = constant_inertia(p);  // x-axis mass pair (symmetric)
  const double I_cz = 2.0 * constant_inertia(p);  // both pairs about z

  // Altitude loop -> thrust.
  out.errors.e3 = ref.pos.z() - s.pos.z();
  out.errors.e4 = ref.vel.z() + gains.k3 * out.errors.e3 - s.vel.z();
  const double cc = std::cos(s.angles.phi) * std::cos(s.angles.theta);
  if (std::abs(cc) < kCosGuard) {
    throw NearSingularAttitude("thrust law undefined near 90 deg tilt");
  }
  const double bracket_z =
      p.g - b * gains.theta2 / p.M +
      backstepping_bracket(out.errors.e3, out.errors.e4, ref.acc.z(),
                           gains.k3, gains.k4);
  const double T1 = std::clamp((p.M / cc) * bracket_z, 0.0, 4.0 * p.M * p.g);
  if (T1 <= 0.0) {
    throw ZeroThrust("lateral virtual input undefined at zero thrust");
  }

  // Lateral loops -> virtual tilt inputs.
  out.errors.e1 = ref.pos.y() - s.pos.y();
  out.errors.e2 = ref.vel.y() + gains.k5 * out.errors.e1 - s.vel.y();
  const double u_y = std::clamp(
      (p.M / T1) * (-b * gains.theta1 / p.M +
                    backstepping_bracket(out.errors.e1, out.errors.e2,
                                         ref.acc.y(), gains.k5, gains.k6)),
      -1.0, 1.0);
  out.errors.e7 = ref.pos.x() - s.pos.x();
  out.errors.e8 = ref.vel.x() + gains.k7 * out.errors.e7 - s.vel.x();
  const double u_x = std::clamp(
      (p.M / T1) * backstepping_bracket(out.errors.e7, out.errors.e8,
                                        ref.acc.x(), gains.k7, gains.k8),
      -1.0, 1.0);

  // Heading command: face the horizontal target, holding the previous
  // command inside a small radius where the bearing is ill-conditioned.
  if (opts.planar) {
    out.psi_star = 0.0;
  } else {
    const double dx = ref.pos.x() - s.pos.x();
    const double dy = ref.pos.y() - s.pos.y();
    if (std::hypot(dx, dy) < kHeadingHold) {
      out.psi_star = ctrl.psi_star_primed ? ctrl.psi_star_prev : 0.0;
    } else {
      out.psi_star = std::atan2(dy, dx);
    }
  }
  out.ctrl.psi_star_prev = out.psi_star;
  out.ctrl.psi_star_primed = true;

  // Commanded attitude from the virtual inputs, heading-resolved.
  const double sps = std::sin(out.psi_star);
  const double cps = std::cos(out.psi_star);
  out.phi_star = std::clamp(
      std::asin(std::clamp(sps * u_x - cps * u_y, -1.0, 1.0)), -kMaxTiltCmd,
      kMaxTiltCmd);
  const double theta_arg =
      (cps * u_x + sps * u_y) / std::max(std::cos(out.phi_star), kCosGuard);
  out.theta_star =
      std::clamp(std::asin(std::clamp(theta_arg, -1.0, 1.0)), -kMaxTiltCmd,
                 kMaxTiltCmd);

  // Tilt-toward-y loop, expressed in the planar controller frame (the sign
  // convention in which a positive tilt accelerates the vehicle toward +y)
  // so it reduces exactly to the planar law on planar scenarios.
  const double m_phi = -s.angles.phi;
  const double m_phi_dot = -rates.x();
  const double m_star = -out.phi_star;
  const double cphi = std::cos(m_phi);
  if (std::abs(cphi) < kCosGuard) {
    throw NearSingularAttitude("mass-position law undefined near 90 deg tilt");
  }
  out.ctrl.tilt_y_cmd.update(m_star, ctrl.dt);
  out.errors.e5 = m_star - m_phi;
  out.errors.e6 =
      out.ctrl.tilt_y_cmd.rate + gains.k1 * out.errors.e5 - m_phi_dot;
  const double eb5 = out.errors.e5 - ctrl.e_star;
  const double eb6 = out.errors.e6 - ctrl.e_star_dot;
  const double v_tilt_y =
      (I_c / cphi) * (eb5 + gains.k1 * eb6 - gains.k1 * gains.k1 * eb5 +
                      gains.k2 * eb6);

  // Tilt-toward-x loop (disabled when replicating planar scenarios).
  double v_tilt_x = 0.0;
  if (!opts.planar) {
    const double cth = std::cos(s.angles.theta);
    if (std::abs(cth) < kCosGuard) {
      throw NearSingularAttitude(
          "mass-position law undefined near 90 deg tilt");
    }
    out.ctrl.tilt_x_cmd.update(out.theta_star, ctrl.dt);
    out.errors.e9 = out.theta_star - s.angles.theta;
    out.errors.e10 =
        out.ctrl.tilt_x_cmd.rate + gains.k9 * out.errors.e9 - rates.y();
    const double eb9 = out.errors.e9 - ctrl.e_star_x;
    const double eb10 = out.errors.e10 - ctrl.e_star_x_dot;
    v_tilt_x =
        (I_cy / cth) * (eb9 + gains.k9 * eb10 - gains.k9 * gains.k9 * eb9 +
                        gains.k10 * eb10);
  }

  // Heading loop.
  out.ctrl.heading_cmd.update(out.psi_star, ctrl.dt, /*wrap=*/true);
  const double e_psi = wrap_angle(out.psi_star - s.angles.psi);
  const double e_psi_d =
      out.ctrl.heading_cmd.rate + gains.k1 * e_psi - rates.z();
  const double v_psi =
      I_cz * (e_psi + gains.k1 * e_psi_d - gains.k1 * gains.k1 * e_psi +
              gains.k2 * e_psi_d);

  // Mix the per-axis demands into the physical input slots and convert the
  // first two to mass offsets.
  const Vec3 slots =
      decoupling_inputs_3d(s.angles, Vec3(v_tilt_x, v_tilt_y, v_psi));
  const double bT1 = b * T1;
  out.ell_y_raw = slots(0) / bT1;
  out.ell_x_raw = slots(1) / bT1;
  out.u.T1 = T1;
  out.u.M_psi = slots(2);
  out.u.ell_y_cmd = saturate_ell(out.ell_y_raw, p.L);
  out.u.ell_x_cmd = saturate_ell(out.ell_x_raw, p.L);

  // Anti-windup compensators, one per mass pair.
  const double es_dot = -(b * gains.epsilon1 / I_c) * ctrl.e_star +
                        b * (out.ell_y_raw - out.u.ell_y_cmd) / I_c;
  out.ctrl.e_star = ctrl.e_star + ctrl.dt * es_dot;
  out.ctrl.e_star_dot = es_dot;
  if (!opts.planar) {
    const double esx_dot = -(b * gains.epsilon1 / I_cy) * ctrl.e_star_x +
                           b * (out.ell_x_raw - out.u.ell_x_cmd) / I_cy;
    out.ctrl.e_star_x = ctrl.e_star_x + ctrl.dt * esx_dot;
    out.ctrl.e_star_x_dot = esx_dot;
  }

  out.errors.e_star = ctrl.e_star;
  out.errors.e_star_dot = ctrl.e_star_dot;
  return out;
}

}  // namespace swash
