#include "swashsim/vehicle_model.hpp"

#include <cmath>
#include <string>

namespace swash {

namespace {

constexpr double kSingularDetFraction = 1e-9;

double sq(double x) { return x * x; }

void check_ell(const DesignParams& p, double ell_x, double ell_y,
               const char* who) {
  if (std::abs(ell_x) > p.L || std::abs(ell_y) > p.L) {
    throw OutOfRange(std::string(who) +
                     ": swash displacement beyond travel limit L");
  }
}

/// d(I_xx)/d(ell_y) = coeff * ell_y; identical coefficient for the other
/// diagonal sensitivities.
double diag_sensitivity_coeff(const DesignParams& p) {
  const double b = p.beta();
  return p.m - 8.0 * b * p.m + 16.0 * b * b * p.m + 8.0 * b * b * p.m_b;
}

}  // namespace

void DesignParams::validate() const {
  if (!(M > 0.0) || !(m > 0.0) || !(m_b > 0.0)) {
    throw OutOfRange("DesignParams: masses must be strictly positive");
  }
  if (std::abs(M - (m_b + 4.0 * m)) > 1e-12) {
    throw OutOfRange(
        "DesignParams: total mass must equal body mass plus four swash "
        "masses");
  }
  const double b = beta();
  if (!(b > 0.0 && b < 0.25)) {
    throw OutOfRange("DesignParams: mass ratio m/M must lie in (0, 0.25)");
  }
  if (!(L > 0.0)) throw OutOfRange("DesignParams: L must be positive");
  if (!(g > 0.0)) throw OutOfRange("DesignParams: g must be positive");
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0)) {
    throw OutOfRange("DesignParams: rotor coefficients must be positive");
  }
}

Vec3 r_delta_body(const DesignParams& p, double ell_x, double ell_y) {
  check_ell(p, ell_x, ell_y, "r_delta_body");
  const double b = p.beta();
  return Vec3(-b * ell_x, -b * ell_y, 0.0);
}

Mat3 inertia(const DesignParams& p, double ell_x, double ell_y,
             const EulerAngles& angles) {
  check_ell(p, ell_x, ell_y, "inertia");
  const double b = p.beta();
  const double a = 0.5 - 2.0 * b;
  const double hl = p.L / 2.0;

  const double Ixx = p.m_b * sq(-2.0 * b * ell_y) +
                     p.m * sq(a * ell_y + hl) + p.m * sq(a * ell_y - hl);
  const double Iyy = p.m_b * sq(-2.0 * b * ell_x) +
                     p.m * sq(a * ell_x + hl) + p.m * sq(a * ell_x - hl);
  const double Izz = p.m_b * sq(-2.0 * b * ell_y) +
                     p.m_b * sq(-2.0 * b * ell_x) + p.m * sq(a * ell_x + hl) +
                     p.m * sq(a * ell_x - hl) + p.m * sq(a * ell_y + hl) +
                     p.m * sq(a * ell_y - hl);

  const double cphi = std::cos(angles.phi);
  const double cth = std::cos(angles.theta);
  const double Ixy =
      -p.m_b * (-2.0 * b * ell_y * cphi) * (-2.0 * b * ell_x * cth) -
      p.m * ((a * ell_x + hl) * cth) * ((a * ell_y + hl) * cphi) -
      p.m * ((a * ell_x - hl) * cth) * ((a * ell_y - hl) * cphi);

  Mat3 I;
  I << Ixx, Ixy, 0.0,  //
      Ixy, Iyy, 0.0,   //
      0.0, 0.0, Izz;
  return I;
}

Mat3 inertia_dot(const DesignParams& p, const VehicleState& s) {
  const double b = p.beta();
  const double a = 0.5 - 2.0 * b;
  const double hl = p.L / 2.0;
  const double coeff = diag_sensitivity_coeff(p);

  const Vec3 rates = euler_rates_from_body_omega(s.angles, s.omega);
  const double phi_dot = rates.x();
  const double theta_dot = rates.y();

  const double dIxx = coeff * s.ell_y * s.ell_y_dot;
  const double dIyy = coeff * s.ell_x * s.ell_x_dot;
  const double dIzz = coeff * (s.ell_x * s.ell_x_dot + s.ell_y * s.ell_y_dot);

  // I_xy = -c_phi c_theta * G(ell_x, ell_y) with
  // G = 4 b^2 m_b lx ly + m [(a lx + hl)(a ly + hl) + (a lx - hl)(a ly - hl)].
  const double cphi = std::cos(s.angles.phi);
  const double sphi = std::sin(s.angles.phi);
  const double cth = std::cos(s.angles.theta);
  const double sth = std::sin(s.angles.theta);
  const double G =
      4.0 * b * b * p.m_b * s.ell_x * s.ell_y +
      p.m * ((a * s.ell_x + hl) * (a * s.ell_y + hl) +
             (a * s.ell_x - hl) * (a * s.ell_y - hl));
  const double dG = (4.0 * b * b * p.m_b + 2.0 * p.m * a * a) *
                    (s.ell_x_dot * s.ell_y + s.ell_x * s.ell_y_dot);
  const double dcos = -sphi * phi_dot * cth - cphi * sth * theta_dot;
  const double dIxy = -(dcos * G + cphi * cth * dG);

  Mat3 D;
  D << dIxx, dIxy, 0.0,  //
      dIxy, dIyy, 0.0,   //
      0.0, 0.0, dIzz;
  return D;
}

Vec3 moment_about_cm(const DesignParams& p, const EulerAngles& angles,
                     double ell_x, double ell_y, double T1, double M_psi) {
  const Mat3 R = rotation_body_to_inertial(angles);
  const Vec3 lever = R * r_delta_body(p, ell_x, ell_y);
  return cross(lever, Vec3(0.0, 0.0, T1)) + R * Vec3(0.0, 0.0, M_psi);
}

StateDerivative derivatives_3d(const DesignParams& p, const VehicleState& s,
                               const ControlInputs& u,
                               const ModelOptions& opts) {
  Mat3 I = inertia(p, s.ell_x, s.ell_y, s.angles);
  Mat3 I_dot = inertia_dot(p, s);
  if (opts.diagonal_inertia) {
    const Mat3 Id = I.diagonal().asDiagonal();
    const Mat3 Dd = I_dot.diagonal().asDiagonal();
    I = Id;
    I_dot = Dd;
  }

  const double scale = I.diagonal().maxCoeff();
  if (I.determinant() <= kSingularDetFraction * scale * scale * scale) {
    throw SingularInertia("derivatives_3d: inertia tensor not invertible");
  }

  const Vec3 M_C =
      moment_about_cm(p, s.angles, s.ell_x, s.ell_y, u.T1, u.M_psi);
  const Vec3 omega_dot = I.partialPivLu().solve(M_C - I_dot * s.omega);

  const double b = p.beta();
  const Vec3 r_b = r_delta_body(p, s.ell_x, s.ell_y);
  const Vec3 rd_b = -b * Vec3(s.ell_x_dot, s.ell_y_dot, 0.0);
  const Vec3 rdd_b = -b * Vec3(s.ell_x_ddot, s.ell_y_ddot, 0.0);
  const Vec3 bracket = rdd_b + 2.0 * cross(s.omega, rd_b) +
                       cross(omega_dot, r_b) +
                       cross(s.omega, cross(s.omega, r_b));

  const Mat3 R = rotation_body_to_inertial(s.angles);
  StateDerivative d;
  d.vel = s.vel;
  d.accel = R * bracket + Vec3(0.0, 0.0, -p.g) +
            R * Vec3(0.0, 0.0, u.T1) / p.M;
  d.euler_rates = euler_rates_from_body_omega(s.angles, s.omega);
  d.omega_dot = omega_dot;
  return d;
}

Derivative2D derivatives_2d_full(const DesignParams& p, const State2D& s,
                                 const Input2D& u) {
  check_ell(p, 0.0, u.ell_y, "derivatives_2d_full");
  const double b = p.beta();
  const double a = 0.5 - 2.0 * b;
  const double hl = p.L / 2.0;

  const double Ixx = p.m_b * sq(-2.0 * b * u.ell_y) +
                     p.m * sq(a * u.ell_y + hl) + p.m * sq(a * u.ell_y - hl);
  const double Ixx_dot = diag_sensitivity_coeff(p) * u.ell_y * u.ell_y_dot;
  if (Ixx <= kSingularDetFraction) {
    throw SingularInertia("derivatives_2d_full: tilt-axis inertia vanished");
  }

  const double cphi = std::cos(s.phi);
  const double sphi = std::sin(s.phi);
  // Tilt equation first: phi_ddot feeds the mass-shift reaction terms.
  const double phi_ddot =
      (b * u.T1 * cphi * u.ell_y - Ixx_dot * s.phi_dot) / Ixx;
  const auto [f1, f2] = swash_reaction_2d(s.phi, s.phi_dot, phi_ddot, u.ell_y,
                                          u.ell_y_dot, u.ell_y_ddot);

  Derivative2D d;
  d.y_dot = s.y_dot;
  d.z_dot = s.z_dot;
  d.phi_dot = s.phi_dot;
  d.y_ddot = b * f1 + u.T1 * sphi / p.M;
  d.z_ddot = b * f2 - p.g + u.T1 * cphi / p.M;
  d.phi_ddot = phi_ddot;
  return d;
}

Derivative2D derivatives_2d_simplified(const DesignParams& p, double I_c,
                                       const State2D& s, const Input2D& u) {
  if (!(I_c > 0.0)) {
    throw OutOfRange("derivatives_2d_simplified: I_c must be positive");
  }
  const double b = p.beta();
  const double cphi = std::cos(s.phi);
  const double sphi = std::sin(s.phi);

  const double phi_ddot = b * u.T1 * cphi * u.ell_y / I_c;
  const auto [f1, f2] = swash_reaction_2d(s.phi, s.phi_dot, phi_ddot, u.ell_y,
                                          u.ell_y_dot, u.ell_y_ddot);

  Derivative2D d;
  d.y_dot = s.y_dot;
  d.z_dot = s.z_dot;
  d.phi_dot = s.phi_dot;
  d.y_ddot = (b * f1 + u.T1 * sphi) / p.M;
  d.z_ddot = (b * f2 - p.M * p.g + u.T1 * cphi) / p.M;
  d.phi_ddot = phi_ddot;
  return d;
}

std::pair<double, double> swash_reaction_2d(double phi, double phi_dot,
                                            double phi_ddot, double ell_y,
                                            double ell_y_dot,
                                            double ell_y_ddot) {
  const double cphi = std::cos(phi);
  const double sphi = std::sin(phi);
  const double f1 = 2.0 * phi_dot * ell_y_dot * sphi - ell_y_ddot * cphi +
                    ell_y * phi_ddot * sphi + ell_y * phi_dot * phi_dot * cphi;
  const double f2 = ell_y_ddot * sphi - ell_y * phi_dot * phi_dot * sphi +
                    2.0 * phi_dot * ell_y_dot * cphi + ell_y * phi_ddot * cphi;
  return {f1, f2};
}

std::pair<double, double> theta_bounds(const DesignParams& /*p*/,
                                       const MotionLimits& lim) {
  if (lim.ell_max < 0.0 || lim.ell_dot_max < 0.0 || lim.ell_ddot_max < 0.0 ||
      lim.phi_dot_max < 0.0 || lim.phi_ddot_max < 0.0) {
    throw OutOfRange("theta_bounds: limits must be non-negative");
  }
  const double w2 = sq(lim.phi_dot_max);
  const double first = std::sqrt(sq(lim.ell_ddot_max) +
                                 4.0 * w2 * sq(lim.ell_dot_max));
  const double second = std::sqrt(sq(lim.ell_max) * sq(w2) +
                                  sq(lim.ell_max) * sq(lim.phi_ddot_max));
  const double theta = first + second;
  return {theta, theta};
}

double constant_inertia(const DesignParams& p) {
  const double hl = p.L / 2.0;
  // Tilt-axis inertia at the mean displacement of the symmetric stroke
  // (ell_mean = 0): only the two masses on the orthogonal arm contribute.
  return p.m * (hl * hl) + p.m * (hl * hl);
}

}  // namespace swash
