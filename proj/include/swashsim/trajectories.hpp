#pragma once

#include <string>
#include <utility>
#include <vector>

#include "swashsim/core_math.hpp"
#include "swashsim/errors.hpp"

namespace swash {

/// A point on a reference trajectory with analytically consistent first and
/// second derivatives.  Planar scenarios use the y and z components only.
struct ReferenceSample {
  Vec3 pos{Vec3::Zero()};
  Vec3 vel{Vec3::Zero()};
  Vec3 acc{Vec3::Zero()};
};

/// Constant-velocity diagonal climb: pos = (0, 0.857 t, 0.857 t).
ReferenceSample linear_reference(double t);

/// Two-frequency aggressive maneuver: y = 4 sin(0.5 t), z = 5 sin(t), x = 0.
ReferenceSample complex_reference(double t);

/// Natural cubic spline through user-supplied (t, position) samples, with
/// analytic spline derivatives.  Queries outside the table hold the endpoint
/// position with zero velocity and acceleration.
class SampledReference {
 public:
  /// Throws MalformedTable unless the table has >= 4 rows with strictly
  /// increasing, finite times.
  explicit SampledReference(std::vector<std::pair<double, Vec3>> table);

  ReferenceSample operator()(double t) const;

  /// Parse a CSV file with the exact header `t,x,y,z` (SI units).
  /// Throws MalformedTable with a line diagnostic on any structural problem.
  static SampledReference from_csv(const std::string& path);

 private:
  std::vector<double> t_;
  std::vector<Vec3> pos_;
  std::vector<Vec3> curv_;  // spline second derivatives at the knots
};

/// Functional-style constructor matching the other generators.
SampledReference sampled_reference(
    const std::vector<std::pair<double, Vec3>>& table);

}  // namespace swash
