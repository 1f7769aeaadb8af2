#pragma once

#include <utility>

#include "swashsim/core_math.hpp"
#include "swashsim/errors.hpp"

namespace swash {

/// Vehicle design constants.  The four movable masses are paired, giving the
/// two degrees of freedom ell_x and ell_y; beta = m/M is the single-mass to
/// total-mass ratio that scales every center-of-mass-shift effect.
struct DesignParams {
  double M{1.1};        // total mass, kg
  double m{0.1};        // one swash mass, kg
  double m_b{0.7};      // central body mass, kg
  double L{0.2};        // arm length = max swash displacement, m
  double g{9.81};       // gravity, m/s^2
  double gamma1{1e-5};  // rotor thrust coefficient, N s^2
  double gamma2{1e-5};  // rotor yaw-moment coefficient, N m s^2

  double beta() const { return m / M; }

  /// Throws OutOfRange unless M = m_b + 4m (1e-12), beta in (0, 0.25),
  /// and L, g, gamma1, gamma2 are strictly positive.
  void validate() const;

  bool operator==(const DesignParams&) const = default;
};

/// Full rigid-body state.  Position is the geometric center in the inertial
/// frame; omega is the body angular velocity.  The swash displacements carry
/// their own first and second derivatives because they enter the dynamics
/// directly (they are produced by the actuation servo, never by numerically
/// differentiating commands).
struct VehicleState {
  Vec3 pos{Vec3::Zero()};
  Vec3 vel{Vec3::Zero()};
  EulerAngles angles{};
  Vec3 omega{Vec3::Zero()};
  double ell_x{0.0};
  double ell_y{0.0};
  double ell_x_dot{0.0};
  double ell_y_dot{0.0};
  double ell_x_ddot{0.0};
  double ell_y_ddot{0.0};
};

/// The four abstract control inputs: collective thrust, the two commanded
/// swash displacements, and the differential-rotor yaw moment.
struct ControlInputs {
  double T1{0.0};
  double ell_x_cmd{0.0};
  double ell_y_cmd{0.0};
  double M_psi{0.0};
};

struct StateDerivative {
  Vec3 vel{Vec3::Zero()};          // d(pos)/dt
  Vec3 accel{Vec3::Zero()};        // d(vel)/dt
  Vec3 euler_rates{Vec3::Zero()};  // d(phi, theta, psi)/dt
  Vec3 omega_dot{Vec3::Zero()};    // d(omega)/dt
};

struct InertiaSnapshot {
  Mat3 I{Mat3::Zero()};
  Mat3 I_dot{Mat3::Zero()};
};

/// Planar state: y lateral, z vertical, phi the tilt angle of the planar
/// convention (positive tilt pushes the thrust vector toward +y).
struct State2D {
  double y{0.0};
  double z{0.0};
  double y_dot{0.0};
  double z_dot{0.0};
  double phi{0.0};
  double phi_dot{0.0};
};

/// Planar inputs: thrust plus the y-axis swash displacement with both
/// derivatives (servo-produced, same rationale as VehicleState).
struct Input2D {
  double T1{0.0};
  double ell_y{0.0};
  double ell_y_dot{0.0};
  double ell_y_ddot{0.0};
};

struct Derivative2D {
  double y_dot{0.0};
  double z_dot{0.0};
  double y_ddot{0.0};
  double z_ddot{0.0};
  double phi_dot{0.0};
  double phi_ddot{0.0};
};

struct ModelOptions {
  /// Zero the inertia products inside the rotational dynamics (the reported
  /// inertia tensor itself is never altered).  The attitude-dependent product
  /// I_xy couples the roll and pitch axes at the same order as the diagonal
  /// terms — at hover it even makes the tensor exactly singular — so the
  /// decoupled closed loop and the planar-motion reduction require this ON.
  bool diagonal_inertia{true};
};

/// Offset from the center of mass to the geometric center, body frame:
/// -beta * (ell_x, ell_y, 0).  Throws OutOfRange when |ell| > L.
Vec3 r_delta_body(const DesignParams& p, double ell_x, double ell_y);

/// Inertia tensor about the center of mass.  Products I_xy = I_yx carry the
/// attitude cosine factors of the source model; I_xz = I_yz = 0.
/// Throws OutOfRange when |ell| > L.
Mat3 inertia(const DesignParams& p, double ell_x, double ell_y,
             const EulerAngles& angles);

/// Analytic time derivative of inertia() along the state's motion
/// (chain rule over ell_x, ell_y, phi, theta and their rates).
Mat3 inertia_dot(const DesignParams& p, const VehicleState& s);

/// Moment about the center of mass: the displaced-mass lever arm crossed with
/// the thrust force, plus the rotor yaw moment, both expressed in the
/// inertial frame:  (R r_delta) x (0,0,T1) + R (0,0,M_psi).
Vec3 moment_about_cm(const DesignParams& p, const EulerAngles& angles,
                     double ell_x, double ell_y, double T1, double M_psi);

/// Full 3D rigid-body derivatives.  Solves the rotational equation first
/// (omega_dot = I^{-1}(M_C - I_dot omega)), then evaluates the translational
/// acceleration including all center-of-mass-shift terms (relative, Coriolis,
/// Euler, centripetal), gravity, and thrust.
/// Throws SingularInertia when det(I) <= 1e-9 * max(diag(I))^3.
StateDerivative derivatives_3d(const DesignParams& p, const VehicleState& s,
                               const ControlInputs& u,
                               const ModelOptions& opts = {});

/// Planar model with the full time-varying inertia: the tilt equation is
/// solved first (phi_ddot appears in the mass-shift terms), then the
/// translational accelerations.
Derivative2D derivatives_2d_full(const DesignParams& p, const State2D& s,
                                 const Input2D& u);

/// Planar model with a constant inertia I_c and the mass-shift terms kept:
/// M y_ddot = beta f1 + T1 sin(phi), M z_ddot = beta f2 - M g + T1 cos(phi),
/// I_c phi_ddot = beta T1 cos(phi) ell_y, where (f1, f2) = swash_reaction_2d.
Derivative2D derivatives_2d_simplified(const DesignParams& p, double I_c,
                                       const State2D& s, const Input2D& u);

/// In-plane specific-force contribution of the moving masses before the
/// mass-ratio weighting: .first acts along the horizontal axis, .second along
/// the vertical axis, both m/s^2.
std::pair<double, double> swash_reaction_2d(double phi, double phi_dot,
                                            double phi_ddot, double ell_y,
                                            double ell_y_dot,
                                            double ell_y_ddot);

/// Worst-case motion magnitudes used to bound the swash-reaction terms.
struct MotionLimits {
  double ell_max{0.0};
  double ell_dot_max{0.0};
  double ell_ddot_max{0.0};
  double phi_dot_max{0.0};
  double phi_ddot_max{0.0};
};

/// (Theta1, Theta2): bounds with |f1| <= Theta1 and |f2| <= Theta2 whenever
/// the arguments stay within the limits.  Both components equal
/// sqrt(l_dd^2 + 4 w^2 l_d^2) + sqrt(l^2 w^4 + l^2 a^2) evaluated at the
/// limits (w = phi_dot_max, a = phi_ddot_max).
std::pair<double, double> theta_bounds(const DesignParams& p,
                                       const MotionLimits& lim);

/// Constant inertia used by the simplified planar model: the tilt-axis
/// inertia evaluated at the mean swash displacement (zero for the symmetric
/// stroke), i.e. 2 m (L/2)^2.
double constant_inertia(const DesignParams& p);

}  // namespace swash
