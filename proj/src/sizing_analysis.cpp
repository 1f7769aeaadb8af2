#include "swashsim/sizing_analysis.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "swashsim/errors.hpp"
#include "swashsim/sim_engine.hpp"

namespace swash {

namespace {

constexpr double kTiltTrustRegion = 1e3;  // rad; far beyond any physical spin

double triangle_phase(double t, double period) {
  if (!(period > 0.0)) {
    throw OutOfRange("triangle period must be positive");
  }
  const double cycles = t / period;
  return cycles - std::floor(cycles);  // fractional phase in [0, 1)
}

void check_grid(const std::vector<double>& grid, const std::string& name) {
  if (grid.empty()) {
    throw OutOfRange("sizing sweep: " + name + " grid is empty");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw OutOfRange("sizing sweep: " + name +
                       " grid must be strictly increasing");
    }
  }
}

bool rows_non_decreasing_along_inner(
    const std::vector<std::vector<double>>& surface) {
  for (const std::vector<double>& row : surface) {
    for (std::size_t j = 1; j < row.size(); ++j) {
      if (row[j] < row[j - 1] - 1e-12) return false;
    }
  }
  return true;
}

bool columns_non_decreasing_along_outer(
    const std::vector<std::vector<double>>& surface) {
  for (std::size_t i = 1; i < surface.size(); ++i) {
    for (std::size_t j = 0; j < surface[i].size(); ++j) {
      if (surface[i][j] < surface[i - 1][j] - 1e-12) return false;
    }
  }
  return true;
}

std::FILE* open_for_writing(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) {
    throw OutOfRange("cannot open file for writing: " + path);
  }
  return f;
}

}  // namespace

double triangle_input(double t, double amplitude, double period) {
  const double tau = triangle_phase(t, period);
  double unit;
  if (tau < 0.25) {
    unit = 4.0 * tau;
  } else if (tau < 0.75) {
    unit = 2.0 - 4.0 * tau;
  } else {
    unit = 4.0 * tau - 4.0;
  }
  return amplitude * unit;
}

double triangle_rate(double t, double amplitude, double period) {
  const double tau = triangle_phase(t, period);
  const double slope = 4.0 * amplitude / period;
  return (tau < 0.25 || tau >= 0.75) ? slope : -slope;
}

PitchResponse pitch_response(const DesignParams& p, const TriangleSettings& in,
                             double Tf, double dt) {
  p.validate();
  if (!(in.period > 0.0)) {
    throw OutOfRange("pitch response: triangle period must be positive");
  }
  if (!(std::abs(in.amplitude) <= p.L)) {
    throw OutOfRange("pitch response: triangle amplitude exceeds the swash travel");
  }
  if (!(dt > 0.0)) {
    throw OutOfRange("pitch response: step size must be positive");
  }
  if (!(Tf >= dt)) {
    throw OutOfRange("pitch response: horizon must cover at least one step");
  }

  const double beta = p.beta();
  // Time rides along as a third state so the autonomous stepper sees the
  // drive at the correct stage instants.
  const auto deriv = [&](const Vec3& x) -> Vec3 {
    const double phi_dot = x[1];
    const double now = x[2];
    const double ell = triangle_input(now, in.amplitude, in.period);
    const double ell_dot = triangle_rate(now, in.amplitude, in.period);
    const double Ixx = inertia(p, 0.0, ell, EulerAngles{})(0, 0);
    VehicleState motion;
    motion.ell_y = ell;
    motion.ell_y_dot = ell_dot;
    const double Ixx_dot = inertia_dot(p, motion)(0, 0);
    // Hover-slaved thrust: T1 cos(phi) = M g exactly, so the drive torque is
    // beta * M * g * ell regardless of the current tilt.
    const double phi_ddot =
        (beta * p.M * p.g * ell - Ixx_dot * phi_dot) / Ixx;
    return Vec3(phi_dot, phi_ddot, 1.0);
  };

  const auto n_steps = static_cast<long>(std::llround(Tf / dt));
  PitchResponse out;
  out.t.reserve(static_cast<std::size_t>(n_steps) + 1);
  out.phi.reserve(static_cast<std::size_t>(n_steps) + 1);

  Vec3 x = Vec3::Zero();
  for (long k = 0;; ++k) {
    if (!std::isfinite(x[0]) || !std::isfinite(x[1]) ||
        std::abs(x[0]) > kTiltTrustRegion) {
      throw Diverged("pitch response left the trust region at t = " +
                     std::to_string(x[2]));
    }
    out.t.push_back(static_cast<double>(k) * dt);
    out.phi.push_back(x[0]);
    out.phi_max = std::max(out.phi_max, std::abs(x[0]));
    if (k == n_steps) break;
    x = rk4_step(deriv, x, dt);
  }
  return out;
}

SizingSweep phi_max_surface(const std::vector<double>& betas,
                            const std::vector<double>& lengths,
                            double stroke_fraction, double period) {
  check_grid(betas, "beta");
  check_grid(lengths, "length");
  if (!(stroke_fraction > 0.0 && stroke_fraction <= 1.0)) {
    throw OutOfRange("sizing sweep: stroke fraction must lie in (0, 1]");
  }

  SizingSweep sweep;
  sweep.betas = betas;
  sweep.lengths = lengths;
  sweep.phi_max.assign(betas.size(), std::vector<double>(lengths.size(), 0.0));

  for (std::size_t i = 0; i < betas.size(); ++i) {
    for (std::size_t j = 0; j < lengths.size(); ++j) {
      DesignParams p;  // keeps the default total mass and gravity
      p.m = betas[i] * p.M;
      p.m_b = p.M * (1.0 - 4.0 * betas[i]);
      p.L = lengths[j];
      TriangleSettings in;
      in.amplitude = stroke_fraction * p.L;
      in.period = period;
      sweep.phi_max[i][j] = pitch_response(p, in).phi_max;
    }
  }

  sweep.beta_monotone = columns_non_decreasing_along_outer(sweep.phi_max);
  sweep.length_monotone = rows_non_decreasing_along_inner(sweep.phi_max);
  return sweep;
}

void write_surface_csv(const SizingSweep& sweep, const std::string& path) {
  std::FILE* f = open_for_writing(path);
  std::fputs("beta,L,phi_max_deg\n", f);
  for (std::size_t i = 0; i < sweep.betas.size(); ++i) {
    for (std::size_t j = 0; j < sweep.lengths.size(); ++j) {
      const double deg = sweep.phi_max[i][j] * 180.0 / M_PI;
      std::fprintf(f, "%.17g,%.17g,%.17g\n", sweep.betas[i], sweep.lengths[j],
                   deg);
    }
  }
  std::fclose(f);
}

void write_response_csv(const PitchResponse& r, const std::string& path) {
  std::FILE* f = open_for_writing(path);
  std::fputs("t,phi\n", f);
  for (std::size_t k = 0; k < r.t.size(); ++k) {
    std::fprintf(f, "%.17g,%.17g\n", r.t[k], r.phi[k]);
  }
  std::fclose(f);
}

}  // namespace swash
