#pragma once

#include "swashsim/errors.hpp"
#include "swashsim/vehicle_model.hpp"

namespace swash {

/// Speeds of the two coaxial rotors.
struct RotorSpeeds {
  double omega1{0.0};  // rad/s
  double omega2{0.0};  // rad/s
};

/// Second-order servo tracking a commanded swash displacement.  Produces the
/// consistent (ell, ell_dot, ell_ddot) triple the plant consumes; the travel
/// limit models the mechanical hard stop.
struct ServoState {
  double ell{0.0};                  // m
  double ell_dot{0.0};              // m/s
  double ell_ddot{0.0};             // m/s^2
  double natural_frequency{200.0};  // rad/s
  double damping{1.0};              // dimensionless
  double travel_limit{0.2};         // m, |ell| clamped here
};

/// Invert T1 = gamma1 (w1^2 + w2^2), M_psi = gamma2 (w1^2 - w2^2) for the
/// rotor speeds.  Throws InfeasibleAllocation when the yaw demand exceeds the
/// thrust budget (either squared speed would be negative).
RotorSpeeds allocate_rotors(const DesignParams& p, double T1, double M_psi);

/// Advance the servo one step of dt toward `command` (pre-saturated by the
/// caller): ell_ddot = wn^2 (cmd - ell) - 2 zeta wn ell_dot, integrated with
/// one RK4 step.  At the hard stop the position is clamped and the velocity
/// and acceleration are zeroed (the stop absorbs the motion).
ServoState servo_step(const ServoState& servo, double command, double dt);

/// Piecewise clamp of a commanded displacement to [-L, L].
double saturate_ell(double ell_cmd, double L);

}  // namespace swash
