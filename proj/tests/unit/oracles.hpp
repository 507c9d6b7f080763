#pragma once

// Test-only oracles, kept independent of the library implementation paths
// they are used to check.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "colonpose/common.hpp"
#include "colonpose/pose.hpp"

namespace oracle {

// rotation matrices written out directly from the textbook formulas
inline Eigen::Matrix3d rz(double deg) {
  const double r = deg * M_PI / 180.0, c = std::cos(r), s = std::sin(r);
  Eigen::Matrix3d m;
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return m;
}
inline Eigen::Matrix3d rx(double deg) {
  const double r = deg * M_PI / 180.0, c = std::cos(r), s = std::sin(r);
  Eigen::Matrix3d m;
  m << 1, 0, 0, 0, c, -s, 0, s, c;
  return m;
}

// quaternion oracle: independent axis-angle construction and Hamilton product
struct Quat {
  double w, x, y, z;
};
inline Quat quat_axis_angle(const Eigen::Vector3d& axis, double angle_rad) {
  const Eigen::Vector3d u = axis.normalized();
  const double h = angle_rad / 2;
  return {std::cos(h), std::sin(h) * u.x(), std::sin(h) * u.y(), std::sin(h) * u.z()};
}
inline Quat quat_mul(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

inline colonpose::Pose random_pose(colonpose::Rng& rng, double max_angle_rad = M_PI - 1e-3,
                                   double trans_radius = 10.0) {
  colonpose::Pose p;
  p.rotation = Eigen::AngleAxisd(rng.uniform(0.0, max_angle_rad), rng.unit_vector())
                   .toRotationMatrix();
  p.translation = rng.in_ball(trans_radius);
  return p;
}

// central finite differences of a scalar function w.r.t. a parameter array
inline std::vector<double> finite_diff(const std::function<double()>& f, double* params, long n,
                                       double eps = 1e-6) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double saved = params[i];
    params[i] = saved + eps;
    const double hi = f();
    params[i] = saved - eps;
    const double lo = f();
    params[i] = saved;
    g[static_cast<std::size_t>(i)] = (hi - lo) / (2 * eps);
  }
  return g;
}

// max relative error between analytic and finite-difference gradients
inline double grad_rel_error(const std::vector<double>& analytic,
                             const std::vector<double>& fd, double floor = 1e-6) {
  double worst = 0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double denom = std::max({std::abs(analytic[i]), std::abs(fd[i]), floor});
    worst = std::max(worst, std::abs(analytic[i] - fd[i]) / denom);
  }
  return worst;
}

}  // namespace oracle
