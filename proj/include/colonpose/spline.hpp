#pragma once

#include <vector>

#include <Eigen/Core>

#include "colonpose/common.hpp"

namespace colonpose {

// Uniform Catmull-Rom spline through control points, reparameterized by
// arc length with a dense lookup table. End segments use duplicated
// endpoint phantoms.
class CatmullRomSpline {
 public:
  CatmullRomSpline() = default;
  explicit CatmullRomSpline(std::vector<Eigen::Vector3d> control_points,
                            int samples_per_segment = 64);

  double total_length() const { return lut_s_.empty() ? 0.0 : lut_s_.back(); }

  Eigen::Vector3d position(double s) const;
  Eigen::Vector3d tangent(double s) const;  // normalized

  // Arc length at which the spline passes through control point i.
  double control_arclength(std::size_t i) const { return control_s_.at(i); }
  std::size_t num_control_points() const { return points_.size(); }

  // Arc length of the point on the spline nearest to `p`, found by local
  // descent from `hint_s` over the dense table plus a fine refinement.
  // Valid when the true nearest point is within the descent basin of the
  // hint, which holds for the gently curved tubes used here.
  double nearest_arclength(const Eigen::Vector3d& p, double hint_s) const;

  // Global nearest over the whole table; O(table size).
  double nearest_arclength_global(const Eigen::Vector3d& p) const;

 private:
  Eigen::Vector3d eval(double u) const;        // u in [0, n_segments]
  Eigen::Vector3d derivative(double u) const;  // d/du
  double u_from_arclength(double s) const;

  std::vector<Eigen::Vector3d> points_;
  std::vector<double> lut_u_;  // monotonically increasing spline parameter
  std::vector<double> lut_s_;  // cumulative arc length at lut_u_
  std::vector<Eigen::Vector3d> lut_p_;
  std::vector<double> control_s_;
};

}  // namespace colonpose
