#include "swashsim/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace swash {

namespace {

constexpr double kLinearSlope = 0.857;  // m/s along both y and z

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ReferenceSample linear_reference(double t) {
  ReferenceSample r;
  r.pos = Vec3(0.0, kLinearSlope * t, kLinearSlope * t);
  r.vel = Vec3(0.0, kLinearSlope, kLinearSlope);
  r.acc = Vec3::Zero();
  return r;
}

ReferenceSample complex_reference(double t) {
  ReferenceSample r;
  r.pos = Vec3(0.0, 4.0 * std::sin(0.5 * t), 5.0 * std::sin(t));
  r.vel = Vec3(0.0, 2.0 * std::cos(0.5 * t), 5.0 * std::cos(t));
  r.acc = Vec3(0.0, -std::sin(0.5 * t), -5.0 * std::sin(t));
  return r;
}

SampledReference::SampledReference(
    std::vector<std::pair<double, Vec3>> table) {
  if (table.size() < 4) {
    throw MalformedTable("trajectory table needs at least 4 rows, got " +
                         std::to_string(table.size()));
  }
  const std::size_t n = table.size();
  t_.resize(n);
  pos_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = table[i].first;
    const Vec3& pi = table[i].second;
    if (!std::isfinite(ti) || !pi.allFinite()) {
      throw MalformedTable("trajectory table row " + std::to_string(i) +
                           " contains a non-finite value");
    }
    if (i > 0 && !(ti > t_[i - 1])) {
      throw MalformedTable("trajectory table times must strictly increase "
                           "(row " + std::to_string(i) + ")");
    }
    t_[i] = ti;
    pos_[i] = pi;
  }

  // Natural cubic spline: solve the tridiagonal system for the second
  // derivatives at the knots (one pass of the Thomas algorithm per axis,
  // done vectorially since the system matrix is shared by all axes).
  curv_.assign(n, Vec3::Zero());
  std::vector<double> diag(n, 0.0);
  std::vector<Vec3> rhs(n, Vec3::Zero());
  std::vector<double> upper(n, 0.0);
  // Interior equations: (h_{i-1}/6) M_{i-1} + ((h_{i-1}+h_i)/3) M_i +
  // (h_i/6) M_{i+1} = dS_i - dS_{i-1}, with natural ends M_0 = M_{n-1} = 0.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = t_[i] - t_[i - 1];
    const double h1 = t_[i + 1] - t_[i];
    diag[i] = (h0 + h1) / 3.0;
    upper[i] = h1 / 6.0;
    rhs[i] = (pos_[i + 1] - pos_[i]) / h1 - (pos_[i] - pos_[i - 1]) / h0;
  }
  // Forward elimination.
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double lower = (t_[i] - t_[i - 1]) / 6.0;
    const double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  // Back substitution.
  for (std::size_t i = n - 2; i >= 1; --i) {
    Vec3 acc = rhs[i];
    if (i + 2 < n) acc -= upper[i] * curv_[i + 1];
    curv_[i] = acc / diag[i];
    if (i == 1) break;
  }
}

ReferenceSample SampledReference::operator()(double t) const {
  ReferenceSample r;
  if (t <= t_.front()) {
    r.pos = pos_.front();
    return r;
  }
  if (t >= t_.back()) {
    r.pos = pos_.back();
    return r;
  }
  // Locate the interval [t_i, t_{i+1}) containing t.
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
  const double h = t_[i + 1] - t_[i];
  const double a = (t_[i + 1] - t) / h;
  const double b = (t - t_[i]) / h;
  const Vec3& m0 = curv_[i];
  const Vec3& m1 = curv_[i + 1];
  r.pos = a * pos_[i] + b * pos_[i + 1] +
          ((a * a * a - a) * m0 + (b * b * b - b) * m1) * (h * h) / 6.0;
  r.vel = (pos_[i + 1] - pos_[i]) / h +
          (-(3.0 * a * a - 1.0) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0;
  r.acc = a * m0 + b * m1;
  return r;
}

SampledReference SampledReference::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw MalformedTable("cannot open trajectory file: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw MalformedTable("trajectory file is empty: " + path);
  }
  if (trim(line) != "t,x,y,z") {
    throw MalformedTable("trajectory file must start with header 't,x,y,z' "
                         "(line 1)");
  }
  std::vector<std::pair<double, Vec3>> table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    std::istringstream ss(row);
    double vals[4];
    std::string cell;
    for (int k = 0; k < 4; ++k) {
      if (!std::getline(ss, cell, ',')) {
        throw MalformedTable("trajectory row has fewer than 4 fields (line " +
                             std::to_string(line_no) + ")");
      }
      std::size_t used = 0;
      try {
        vals[k] = std::stod(trim(cell), &used);
      } catch (const std::exception&) {
        throw MalformedTable("trajectory field is not a number (line " +
                             std::to_string(line_no) + ")");
      }
      if (used != trim(cell).size()) {
        throw MalformedTable("trajectory field has trailing characters "
                             "(line " + std::to_string(line_no) + ")");
      }
    }
    if (std::getline(ss, cell, ',')) {
      throw MalformedTable("trajectory row has more than 4 fields (line " +
                           std::to_string(line_no) + ")");
    }
    table.emplace_back(vals[0], Vec3(vals[1], vals[2], vals[3]));
  }
  return SampledReference(std::move(table));
}

SampledReference sampled_reference(
    const std::vector<std::pair<double, Vec3>>& table) {
  return SampledReference(table);
}

}  // namespace swash
