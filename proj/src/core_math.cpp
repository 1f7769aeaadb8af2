#include "swashsim/core_math.hpp"

#include <cmath>

namespace swash {

namespace {
constexpr double kGimbalGuard = 1e-6;  // distance from |theta| = pi/2
}

Mat3 rotation_body_to_inertial(const EulerAngles& a) {
  const double cphi = std::cos(a.phi), sphi = std::sin(a.phi);
  const double cth = std::cos(a.theta), sth = std::sin(a.theta);
  const double cpsi = std::cos(a.psi), spsi = std::sin(a.psi);
  Mat3 R;
  R << cth * cpsi, sphi * sth * cpsi - cphi * spsi,
      cphi * sth * cpsi + sphi * spsi,  //
      cth * spsi, sphi * sth * spsi + cphi * cpsi,
      cphi * sth * spsi - sphi * cpsi,  //
      -sth, sphi * cth, cphi * cth;
  return R;
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return Vec3(a.y() * b.z() - a.z() * b.y(),  //
              a.z() * b.x() - a.x() * b.z(),  //
              a.x() * b.y() - a.y() * b.x());
}

Vec3 euler_rates_from_body_omega(const EulerAngles& a, const Vec3& omega) {
  if (std::abs(a.theta) >= M_PI / 2.0 - kGimbalGuard) {
    throw GimbalLock("euler_rates_from_body_omega: |theta| too close to pi/2");
  }
  const double cphi = std::cos(a.phi), sphi = std::sin(a.phi);
  const double cth = std::cos(a.theta), tth = std::tan(a.theta);
  return Vec3(
      omega.x() + sphi * tth * omega.y() + cphi * tth * omega.z(),
      cphi * omega.y() - sphi * omega.z(),
      (sphi / cth) * omega.y() + (cphi / cth) * omega.z());
}

Vec3 body_omega_from_euler_rates(const EulerAngles& a, const Vec3& rates) {
  const double cphi = std::cos(a.phi), sphi = std::sin(a.phi);
  const double cth = std::cos(a.theta), sth = std::sin(a.theta);
  const double phid = rates.x(), thd = rates.y(), psid = rates.z();
  return Vec3(phid - sth * psid,             //
              cphi * thd + sphi * cth * psid,  //
              -sphi * thd + cphi * cth * psid);
}

}  // namespace swash
