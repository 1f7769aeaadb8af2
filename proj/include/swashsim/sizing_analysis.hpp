#pragma once

#include <string>
#include <vector>

#include "swashsim/vehicle_model.hpp"

namespace swash {

/// Zero-mean symmetric triangle wave that starts at zero and rises: it peaks
/// at +amplitude a quarter period in, crosses zero at the half period, and
/// bottoms out at -amplitude at three quarters.  Any real t is accepted,
/// including negative times.  Throws OutOfRange unless period > 0.
double triangle_input(double t, double amplitude, double period);

/// Slope of triangle_input at time t (piecewise constant, +-4*amplitude /
/// period), taking the right-continuous value at the corner instants.
/// Throws OutOfRange unless period > 0.
double triangle_rate(double t, double amplitude, double period);

/// Triangular swash-displacement drive for the tilt-response study.
struct TriangleSettings {
  double amplitude{0.2};  // displacement peak, m (sign flips the drive)
  double period{4.0};     // s
};

/// Tilt trace from exciting the rotational planar dynamics alone.
struct PitchResponse {
  std::vector<double> t;    // s
  std::vector<double> phi;  // rad
  double phi_max{0.0};      // max |phi| over the trace, rad
};

/// Drive the planar tilt equation with a triangular swash displacement while
/// every other loop is held at its working point: the thrust is slaved to
/// the hover value M g / cos(phi) at each evaluation, which makes the drive
/// torque beta * M * g * ell_y independent of the tilt angle, and the
/// time-varying tilt-axis inertia and its rate come from the rigid-body
/// model.  Integrates with the classical fourth-order scheme at step dt.
/// Throws OutOfRange for invalid params, |amplitude| beyond the swash
/// travel, or non-positive period/dt/Tf; throws Diverged when the tilt state
/// leaves the trust region.
PitchResponse pitch_response(const DesignParams& p, const TriangleSettings& in,
                             double Tf = 8.0, double dt = 1e-3);

/// Maximum-tilt surface over a design grid of mass ratios and arm lengths.
struct SizingSweep {
  std::vector<double> betas;                 // dimensionless, ascending
  std::vector<double> lengths;               // m, ascending
  std::vector<std::vector<double>> phi_max;  // [beta index][length index], rad
  bool beta_monotone{false};    // non-decreasing along beta at every length
  bool length_monotone{false};  // non-decreasing along length at every beta
};

/// Evaluate pitch_response over every (beta, length) cell.  Each cell keeps
/// the same total mass and redistributes it: m = beta * M and
/// m_b = M * (1 - 4 beta), so beta must stay inside (0, 0.25).  The drive
/// amplitude is stroke_fraction of the cell's full swash travel.  Grids must
/// be non-empty and strictly increasing; stroke_fraction in (0, 1].
SizingSweep phi_max_surface(const std::vector<double>& betas,
                            const std::vector<double>& lengths,
                            double stroke_fraction = 1.0, double period = 4.0);

/// Write the surface as CSV rows `beta,L,phi_max_deg` (header included),
/// one row per grid cell, outer loop over beta.
void write_surface_csv(const SizingSweep& sweep, const std::string& path);

/// Write a response trace as CSV rows `t,phi` (header included).
void write_response_csv(const PitchResponse& r, const std::string& path);

}  // namespace swash
