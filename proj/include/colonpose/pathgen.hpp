#pragma once

#include "colonpose/scene.hpp"

namespace colonpose {

// Camera-path knobs. Step size is per frame; defaults are calibrated so
// that pairs five frames apart move ~0.44 cm and rotate ~4.6 deg.
struct TrajectoryConfig {
  int n_waypoints = 18;
  int frames_per_segment = 59;     // frames = frames_per_segment * (n_waypoints - 1)
  int frames = 0;                  // optional explicit frame count override
  double max_wp_translation = 0.2; // cm
  double max_wp_rotation = 20.0;   // degrees
  double roll_rate = 0.75;         // degrees per frame about the optical axis
  double step_size_mean = 0.088;   // cm per frame along the centerline
  bool include_reinsertion = true;
  std::uint64_t seed = 1;

  int total_frames() const {
    return frames > 0 ? frames : frames_per_segment * (n_waypoints - 1);
  }
  void validate() const;
};

// Independent perturbation of every waypoint: translation uniform in a ball
// of radius max_wp_translation, rotation with uniform axis and angle uniform
// in [0, max_wp_rotation] composed onto the existing orientation.
std::vector<Waypoint> randomize_waypoints(const std::vector<Waypoint>& base,
                                          const TrajectoryConfig& cfg, Rng& rng);

// Samples the full camera path through the randomized waypoints. The camera
// always faces the +s tangent of the path (toward the lumen) while its
// position walks back and forth along the arc length, so the signed z step
// distribution is bimodal when reinsertion is enabled. Orientation composes
// a parallel-transported tangent frame, accumulated roll, and the slerped
// waypoint orientation offsets.
Trajectory sample_camera_path(const TubeScene& scene, const TrajectoryConfig& cfg);

}  // namespace colonpose
