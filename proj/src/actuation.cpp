#include "swashsim/actuation.hpp"

#include <cmath>

namespace swash {

RotorSpeeds allocate_rotors(const DesignParams& p, double T1, double M_psi) {
  const double w1_sq = 0.5 * (T1 / p.gamma1 + M_psi / p.gamma2);
  const double w2_sq = 0.5 * (T1 / p.gamma1 - M_psi / p.gamma2);
  if (w1_sq < 0.0 || w2_sq < 0.0) {
    throw InfeasibleAllocation(
        "allocate_rotors: yaw demand exceeds thrust budget");
  }
  return {std::sqrt(w1_sq), std::sqrt(w2_sq)};
}

namespace {

struct ServoRate {
  double d_ell;
  double d_ell_dot;
};

ServoRate servo_rate(const ServoState& s, double ell, double ell_dot,
                     double command) {
  const double wn = s.natural_frequency;
  return {ell_dot,
          wn * wn * (command - ell) - 2.0 * s.damping * wn * ell_dot};
}

}  // namespace

ServoState servo_step(const ServoState& servo, double command, double dt) {
  if (!(dt > 0.0)) throw OutOfRange("servo_step: dt must be positive");

  const auto k1 = servo_rate(servo, servo.ell, servo.ell_dot, command);
  const auto k2 = servo_rate(servo, servo.ell + 0.5 * dt * k1.d_ell,
                             servo.ell_dot + 0.5 * dt * k1.d_ell_dot, command);
  const auto k3 = servo_rate(servo, servo.ell + 0.5 * dt * k2.d_ell,
                             servo.ell_dot + 0.5 * dt * k2.d_ell_dot, command);
  const auto k4 = servo_rate(servo, servo.ell + dt * k3.d_ell,
                             servo.ell_dot + dt * k3.d_ell_dot, command);

  ServoState next = servo;
  next.ell = servo.ell + dt / 6.0 *
                             (k1.d_ell + 2.0 * k2.d_ell + 2.0 * k3.d_ell +
                              k4.d_ell);
  next.ell_dot = servo.ell_dot + dt / 6.0 *
                                     (k1.d_ell_dot + 2.0 * k2.d_ell_dot +
                                      2.0 * k3.d_ell_dot + k4.d_ell_dot);

  const double lim = servo.travel_limit;
  if (next.ell >= lim) {
    next.ell = lim;
    next.ell_dot = 0.0;
    next.ell_ddot = 0.0;
  } else if (next.ell <= -lim) {
    next.ell = -lim;
    next.ell_dot = 0.0;
    next.ell_ddot = 0.0;
  } else {
    next.ell_ddot = servo_rate(servo, next.ell, next.ell_dot, command)
                        .d_ell_dot;
  }
  return next;
}

double saturate_ell(double ell_cmd, double L) {
  if (ell_cmd > L) return L;
  if (ell_cmd < -L) return -L;
  return ell_cmd;
}

}  // namespace swash
