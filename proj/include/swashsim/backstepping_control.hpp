#pragma once

#include <string>

#include "swashsim/core_math.hpp"
#include "swashsim/errors.hpp"
#include "swashsim/trajectories.hpp"
#include "swashsim/vehicle_model.hpp"

namespace swash {

/// Controller gains.  k1/k2 close the tilt loop driven by the y-axis mass
/// pair, k3/k4 the altitude loop, k5/k6 the lateral (y) loop, k7/k8 the
/// lateral (x) loop, k9/k10 the tilt loop driven by the x-axis mass pair.
/// epsilon1 sets the anti-windup compensator decay; theta1/theta2 are
/// magnitude bounds on the mass-motion reaction terms fed forward as a
/// robustness margin (zero by default).
struct GainSet {
  double k1{0.2};
  double k2{3.0};
  double k3{0.2};
  double k4{2.0};
  double k5{0.2};
  double k6{2.0};
  double k7{0.2};
  double k8{2.0};
  double k9{0.2};
  double k10{3.0};
  double epsilon1{0.1};
  double theta1{0.0};
  double theta2{0.0};

  /// Throws OutOfRange unless every gain and epsilon1 is positive and the
  /// theta bounds are non-negative.
  void validate() const;

  bool operator==(const GainSet&) const = default;
};

/// Gain preset used for the constant-velocity climb scenario.
GainSet linear_gains();

/// Gain preset used for the two-frequency aggressive maneuver.
GainSet complex_gains();

/// Look up a preset by name ("linear" or "complex").  Throws OutOfRange for
/// unknown names.
GainSet gains_by_name(const std::string& name);

/// Backstepping tracking errors.  Odd indices are position-level errors,
/// even indices the corresponding velocity-level errors augmented with the
/// stabilizing feedback term.  e1/e2: y, e3/e4: z, e5/e6: tilt toward y,
/// e7/e8: x, e9/e10: tilt toward x.  e_star/e_star_dot carry the anti-windup
/// compensator for the y-axis mass pair.
struct TrackingErrors {
  double e1{0.0}, e2{0.0};
  double e3{0.0}, e4{0.0};
  double e5{0.0}, e6{0.0};
  double e7{0.0}, e8{0.0};
  double e9{0.0}, e10{0.0};
  double e_star{0.0};
  double e_star_dot{0.0};
};

/// First-order-filtered numerical differentiator for a commanded angle.
/// The raw backward difference is smoothed with time constant 10x the update
/// period; the second derivative repeats the scheme on the filtered rate.
/// The first update only primes the history and reports zero derivatives:
/// treating the mission-start command as a step from rest would inject a
/// kick proportional to 1/dt, and the closed loop must stay insensitive to
/// the controller period.
struct AngleDifferentiator {
  double prev_angle{0.0};
  double rate{0.0};
  double accel{0.0};
  bool primed{false};

  /// Advance by one update of period dt with the new commanded angle.
  /// `wrap` treats the angle as periodic in 2*pi (for heading commands).
  void update(double angle, double dt, bool wrap = false);
};

/// Mutable controller memory: anti-windup compensator states for both mass
/// pairs plus the filtered differentiators for the commanded angles.
struct ControllerState {
  double dt{1e-4};  // controller update period, s

  double e_star{0.0};      // y-axis mass pair compensator
  double e_star_dot{0.0};  // its rate, held from the previous update
  double e_star_x{0.0};    // x-axis mass pair compensator
  double e_star_x_dot{0.0};

  AngleDifferentiator tilt_y_cmd;   // commanded tilt toward y (planar frame)
  AngleDifferentiator tilt_x_cmd;   // commanded tilt toward x
  AngleDifferentiator heading_cmd;  // commanded heading

  double psi_star_prev{0.0};
  bool psi_star_primed{false};

  ControllerState() = default;
  explicit ControllerState(double update_period) : dt(update_period) {}

  /// Zero every dynamic field, keeping the update period.
  void reset();
};

/// Thrust law for the planar controller.  Throws NearSingularAttitude when
/// |cos(phi)| < 1e-3.  The result is clamped to [0, 4 M g].
double thrust_law_2d(const GainSet& gains, const DesignParams& p,
                     double theta2, const State2D& s,
                     const ReferenceSample& ref);

/// Virtual lateral input u_y in [-1, 1].  Throws ZeroThrust when T1 <= 0.
double virtual_uy_2d(const GainSet& gains, const DesignParams& p,
                     double theta1, double T1, const State2D& s,
                     const ReferenceSample& ref);

/// Commanded tilt angle from the virtual lateral input (argument clamped to
/// [-1, 1] before the arcsine).
double desired_pitch_2d(double u_y);

/// Result of the mass-position law for the y-axis pair.
struct EllLawResult {
  double raw{0.0};        // demanded offset before travel saturation, m
  double saturated{0.0};  // command actually issued, m
  double e5{0.0};         // tilt tracking error used by the law
  double e6{0.0};         // augmented tilt-rate error
  ControllerState ctrl;   // updated controller memory
};

/// Mass-position law for the y-axis pair, including the filtered
/// differentiation of the commanded tilt and the anti-windup compensator
/// update.  `x5_star` is the commanded tilt angle (already clamped by the
/// caller).  Throws NearSingularAttitude when |cos(phi)| < 1e-3 and
/// ZeroThrust when T1 <= 0.
EllLawResult ell_law_2d(const GainSet& gains, const DesignParams& p,
                        double I_c, double T1, const State2D& s,
                        double x5_star, const ControllerState& ctrl);

/// Subsystem selector for the closed-form Lyapunov derivative.
enum class Subsystem { altitude, lateral, pitch };

/// Closed-form Lyapunov derivative of the selected error subsystem at the
/// given error values: altitude -> -k3 e3^2 - k4 e4^2, lateral ->
/// -k5 e1^2 - k6 e2^2, pitch -> -k1 eb5^2 - k2 eb6^2 with eb = e - e_star
/// compensation applied.
double lyapunov_vdot_check(const GainSet& gains, Subsystem subsystem,
                           const TrackingErrors& e);

/// Attitude-dependent mixing matrix mapping the per-axis rotational demands
/// v = (v_tilt_x, v_tilt_y, v_heading) to the physical input slots
/// (beta T1 ell_y, beta T1 ell_x, M_psi).
Vec3 decoupling_inputs_3d(const EulerAngles& angles, const Vec3& v);

/// One full planar controller update: thrust law, lateral virtual input,
/// commanded tilt (clamped to +/- 80 deg), and the mass-position law.
struct Control2DResult {
  double T1{0.0};
  double ell_y_raw{0.0};
  double ell_y_cmd{0.0};
  double x5_star{0.0};
  TrackingErrors errors;
  ControllerState ctrl;
};

Control2DResult control_step_2d(const GainSet& gains, const DesignParams& p,
                                double I_c, const State2D& s,
                                const ReferenceSample& ref,
                                const ControllerState& ctrl);

/// Options for the spatial controller.
struct Controller3DOptions {
  /// Replicate a planar scenario: hold the heading command at zero and
  /// disable the x-axis mass pair loop so the outputs reduce exactly to the
  /// planar controller.
  bool planar{false};
};

/// One full spatial controller update.
struct Control3DResult {
  ControlInputs u;          // saturated commands issued to the plant
  double ell_y_raw{0.0};    // demanded offsets before travel saturation
  double ell_x_raw{0.0};
  double phi_star{0.0};     // commanded attitude after clamping
  double theta_star{0.0};
  double psi_star{0.0};
  TrackingErrors errors;
  ControllerState ctrl;
};

Control3DResult control_step_3d(const GainSet& gains, const DesignParams& p,
                                const VehicleState& s,
                                const ReferenceSample& ref,
                                const ControllerState& ctrl,
                                const Controller3DOptions& opts = {});

}  // namespace swash
