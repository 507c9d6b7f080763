#include "colonpose/spline.hpp"

#include <algorithm>
#include <cmath>

namespace colonpose {

namespace {

// Catmull-Rom basis on one segment, t in [0,1]
Eigen::Vector3d cr_point(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                         const Eigen::Vector3d& p2, const Eigen::Vector3d& p3, double t) {
  const double t2 = t * t, t3 = t2 * t;
  return 0.5 * ((2.0 * p1) + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2 +
                (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t3);
}

Eigen::Vector3d cr_derivative(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                              const Eigen::Vector3d& p2, const Eigen::Vector3d& p3, double t) {
  const double t2 = t * t;
  return 0.5 * ((-p0 + p2) + 2.0 * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t +
                3.0 * (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t2);
}

}  // namespace

CatmullRomSpline::CatmullRomSpline(std::vector<Eigen::Vector3d> control_points,
                                   int samples_per_segment)
    : points_(std::move(control_points)) {
  if (points_.size() < 2) throw NumericError("spline: need at least two control points");
  for (std::size_t i = 1; i < points_.size(); ++i)
    if ((points_[i] - points_[i - 1]).norm() < 1e-9)
      throw NumericError("spline: coincident control points");

  const std::size_t n_segments = points_.size() - 1;
  const std::size_t n = n_segments * static_cast<std::size_t>(samples_per_segment) + 1;
  lut_u_.reserve(n);
  lut_s_.reserve(n);
  lut_p_.reserve(n);
  double s = 0;
  Eigen::Vector3d prev = eval(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double u =
        static_cast<double>(i) / samples_per_segment;  // u in [0, n_segments]
    const Eigen::Vector3d p = eval(u);
    s += (p - prev).norm();
    prev = p;
    lut_u_.push_back(u);
    lut_s_.push_back(s);
    lut_p_.push_back(p);
  }
  control_s_.resize(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i)
    control_s_[i] = lut_s_[i * static_cast<std::size_t>(samples_per_segment)];
}

Eigen::Vector3d CatmullRomSpline::eval(double u) const {
  const std::size_t n_segments = points_.size() - 1;
  const double uc = std::clamp(u, 0.0, static_cast<double>(n_segments));
  std::size_t seg = std::min(static_cast<std::size_t>(uc), n_segments - 1);
  const double t = uc - static_cast<double>(seg);
  const Eigen::Vector3d& p1 = points_[seg];
  const Eigen::Vector3d& p2 = points_[seg + 1];
  const Eigen::Vector3d p0 = seg == 0 ? points_[0] : points_[seg - 1];
  const Eigen::Vector3d p3 = seg + 2 < points_.size() ? points_[seg + 2] : points_.back();
  return cr_point(p0, p1, p2, p3, t);
}

Eigen::Vector3d CatmullRomSpline::derivative(double u) const {
  const std::size_t n_segments = points_.size() - 1;
  const double uc = std::clamp(u, 0.0, static_cast<double>(n_segments));
  std::size_t seg = std::min(static_cast<std::size_t>(uc), n_segments - 1);
  const double t = uc - static_cast<double>(seg);
  const Eigen::Vector3d& p1 = points_[seg];
  const Eigen::Vector3d& p2 = points_[seg + 1];
  const Eigen::Vector3d p0 = seg == 0 ? points_[0] : points_[seg - 1];
  const Eigen::Vector3d p3 = seg + 2 < points_.size() ? points_[seg + 2] : points_.back();
  return cr_derivative(p0, p1, p2, p3, t);
}

double CatmullRomSpline::u_from_arclength(double s) const {
  const double sc = std::clamp(s, 0.0, total_length());
  const auto it = std::lower_bound(lut_s_.begin(), lut_s_.end(), sc);
  if (it == lut_s_.begin()) return lut_u_.front();
  const std::size_t i = static_cast<std::size_t>(it - lut_s_.begin());
  const double s0 = lut_s_[i - 1], s1 = lut_s_[i];
  const double f = s1 > s0 ? (sc - s0) / (s1 - s0) : 0.0;
  return lut_u_[i - 1] + f * (lut_u_[i] - lut_u_[i - 1]);
}

Eigen::Vector3d CatmullRomSpline::position(double s) const { return eval(u_from_arclength(s)); }

Eigen::Vector3d CatmullRomSpline::tangent(double s) const {
  const Eigen::Vector3d d = derivative(u_from_arclength(s));
  const double n = d.norm();
  if (n < 1e-12) throw NumericError("spline: degenerate tangent");
  return d / n;
}

double CatmullRomSpline::nearest_arclength(const Eigen::Vector3d& p, double hint_s) const {
  const std::size_t n = lut_p_.size();
  auto dist2 = [&](std::size_t i) { return (lut_p_[i] - p).squaredNorm(); };

  // locate starting index from hint
  const double sc = std::clamp(hint_s, 0.0, total_length());
  std::size_t i =
      static_cast<std::size_t>(std::lower_bound(lut_s_.begin(), lut_s_.end(), sc) -
                               lut_s_.begin());
  if (i >= n) i = n - 1;

  // hill descent on the table
  for (std::size_t iter = 0; iter < n; ++iter) {
    const double here = dist2(i);
    const double left = i > 0 ? dist2(i - 1) : here + 1;
    const double right = i + 1 < n ? dist2(i + 1) : here + 1;
    if (left < here)
      --i;
    else if (right < here)
      ++i;
    else
      break;
  }

  // golden-section refinement between the neighbours of the best sample
  double lo = lut_s_[i > 0 ? i - 1 : 0];
  double hi = lut_s_[std::min(i + 1, n - 1)];
  const double gr = 0.6180339887498949;
  double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
  double fa = (position(a) - p).squaredNorm(), fb = (position(b) - p).squaredNorm();
  for (int it = 0; it < 24; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - gr * (hi - lo);
      fa = (position(a) - p).squaredNorm();
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + gr * (hi - lo);
      fb = (position(b) - p).squaredNorm();
    }
  }
  return 0.5 * (lo + hi);
}

double CatmullRomSpline::nearest_arclength_global(const Eigen::Vector3d& p) const {
  std::size_t best = 0;
  double best_d = (lut_p_[0] - p).squaredNorm();
  for (std::size_t i = 1; i < lut_p_.size(); ++i) {
    const double d = (lut_p_[i] - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return nearest_arclength(p, lut_s_[best]);
}

}  // namespace colonpose
