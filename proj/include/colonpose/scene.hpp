#pragma once

#include "colonpose/pose.hpp"
#include "colonpose/spline.hpp"

namespace colonpose {

struct Waypoint {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  UnitQuaternion orientation;  // offset from the tangent-following frame
};

// Procedural colon-like tube: a spline centerline with a radius profile
// that dips periodically to form self-occluding ring folds,
//   r(s) = base_radius - fold_amplitude * max(0, cos(2 pi fold_frequency s))^p.
struct TubeScene {
  CatmullRomSpline centerline;
  std::vector<Waypoint> base_waypoints;
  double base_radius = 2.5;      // cm
  double fold_amplitude = 1.0;   // cm
  double fold_frequency = 0.4;   // folds per cm of arc length
  int fold_sharpness = 8;        // bump exponent p
  std::uint64_t texture_seed = 0x7ea15eed;

  double radius_at(double s) const;

  // Signed radial distance to the tube wall (< 0 inside). `hint_s` is
  // updated to the nearest centerline arc length, so consecutive queries
  // along a ray stay cheap.
  double wall_distance(const Eigen::Vector3d& p, double& hint_s) const;

  // Outward (into-the-wall) surface normal by central differences.
  Eigen::Vector3d wall_normal(const Eigen::Vector3d& p, double hint_s) const;

  // Procedural albedo at a surface point (seam-free value noise over the
  // tube coordinates).
  Eigen::Vector3d albedo(const Eigen::Vector3d& p, double hint_s) const;

  void validate() const;
};

// Two point lights riding with the camera at symmetric offsets along its
// x axis; inverse-square falloff.
struct LightRig {
  double offset = 0.3;     // cm, left/right of the optical center
  double intensity = 2.5;  // radiant scale
};

struct SceneConfig {
  int n_waypoints = 18;
  double tube_length = 110.0;  // cm, approximate
  double base_radius = 2.5;
  double fold_amplitude = 1.0;
  double fold_frequency = 0.4;
  int fold_sharpness = 8;
  std::uint64_t texture_seed = 0x7ea15eed;
};

// Gently winding default tube; curvature is chosen so that the line of
// sight down the lumen always terminates on a wall within the far cap.
TubeScene make_tube_scene(const SceneConfig& cfg);

}  // namespace colonpose
