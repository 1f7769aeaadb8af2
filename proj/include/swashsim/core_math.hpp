#pragma once

#include <Eigen/Dense>

#include "swashsim/errors.hpp"

namespace swash {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Attitude as ZYX (yaw-pitch-roll) Euler angles, radians everywhere.
/// phi rotates about body x and is the tilt angle of the planar model,
/// theta about body y, psi about body z.
struct EulerAngles {
  double phi{0.0};
  double theta{0.0};
  double psi{0.0};
};

/// Rotation taking body-frame vectors to the inertial frame,
/// R = Rz(psi) * Ry(theta) * Rx(phi).  Orthonormal with det = +1.
Mat3 rotation_body_to_inertial(const EulerAngles& angles);

/// Standard cross product a x b.
Vec3 cross(const Vec3& a, const Vec3& b);

/// (phi_dot, theta_dot, psi_dot) from the body angular velocity.
/// Throws GimbalLock when |theta| >= pi/2 - 1e-6, where the transform
/// loses rank; clamping silently would corrupt the rotational dynamics.
Vec3 euler_rates_from_body_omega(const EulerAngles& angles, const Vec3& omega);

/// Body angular velocity from Euler-angle rates (exact inverse of
/// euler_rates_from_body_omega away from the singularity; total function).
Vec3 body_omega_from_euler_rates(const EulerAngles& angles,
                                 const Vec3& euler_rates);

}  // namespace swash
