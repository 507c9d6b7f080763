#include "colonpose/pathgen.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

namespace colonpose {

void TrajectoryConfig::validate() const {
  if (n_waypoints < 4) throw ConfigError("trajectory: need at least 4 waypoints");
  if (total_frames() < 2) throw ConfigError("trajectory: need at least 2 frames");
  if (!(step_size_mean > 0)) throw ConfigError("trajectory: step_size_mean must be positive");
  if (max_wp_translation < 0 || max_wp_rotation < 0)
    throw ConfigError("trajectory: negative waypoint randomization bound");
}

std::vector<Waypoint> randomize_waypoints(const std::vector<Waypoint>& base,
                                          const TrajectoryConfig& cfg, Rng& rng) {
  std::vector<Waypoint> out;
  out.reserve(base.size());
  for (const Waypoint& wp : base) {
    Waypoint r = wp;
    r.position += rng.in_ball(cfg.max_wp_translation);
    const Eigen::Vector3d axis = rng.unit_vector();
    const double angle = deg_to_rad(rng.uniform(0.0, cfg.max_wp_rotation));
    const Eigen::Quaterniond offset(Eigen::AngleAxisd(angle, axis));
    const Eigen::Quaterniond cur(wp.orientation.w, wp.orientation.x, wp.orientation.y,
                                 wp.orientation.z);
    const Eigen::Quaterniond q = offset * cur;
    UnitQuaternion uq{q.w(), q.x(), q.y(), q.z()};
    uq.canonicalize();
    r.orientation = uq;
    out.push_back(r);
  }
  return out;
}

namespace {

Eigen::Quaterniond to_eigen(const UnitQuaternion& q) { return {q.w, q.x, q.y, q.z}; }

// Image-down reference used to complete the tangent frame.
Eigen::Vector3d initial_reference(const Eigen::Vector3d& forward) {
  Eigen::Vector3d v = Eigen::Vector3d::UnitY();
  if (std::abs(forward.dot(v)) > 0.9) v = Eigen::Vector3d::UnitX();
  v -= v.dot(forward) * forward;
  return v.normalized();
}

}  // namespace

Trajectory sample_camera_path(const TubeScene& scene, const TrajectoryConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const std::vector<Waypoint> wps = randomize_waypoints(scene.base_waypoints, cfg, rng);

  std::vector<Eigen::Vector3d> pts;
  pts.reserve(wps.size());
  for (const auto& wp : wps) pts.push_back(wp.position);
  const CatmullRomSpline path(std::move(pts), 96);

  std::vector<double> wp_s(wps.size());
  for (std::size_t i = 0; i < wps.size(); ++i) wp_s[i] = path.control_arclength(i);

  const int n_frames = cfg.total_frames();
  const double length = path.total_length();
  const double s_margin = std::max(1.0, 0.02 * length);
  const double s_min = s_margin, s_max = length - s_margin;
  if (s_max <= s_min) throw NumericError("trajectory: tube too short for the path margins");

  auto draw_run_length = [&]() {
    const int lo = std::max(10, n_frames / 12), hi = std::max(lo + 1, n_frames / 5);
    return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  };

  // withdrawal first, from the distal end
  double s = s_max;
  int direction = -1;
  int run_left = cfg.include_reinsertion ? draw_run_length() : n_frames + 1;

  Trajectory traj;
  traj.poses.reserve(n_frames);
  traj.frame_indices.reserve(n_frames);

  Eigen::Vector3d down_ref = initial_reference(path.tangent(s));
  double roll = 0;

  for (int f = 0; f < n_frames; ++f) {
    const Eigen::Vector3d forward = path.tangent(s);
    down_ref -= down_ref.dot(forward) * forward;  // parallel transport
    const double dn = down_ref.norm();
    down_ref = dn > 1e-9 ? Eigen::Vector3d(down_ref / dn) : initial_reference(forward);

    Eigen::Matrix3d base;
    base.col(0) = down_ref.cross(forward);  // camera x (image right)
    base.col(1) = down_ref;                 // camera y (image down)
    base.col(2) = forward;                  // camera z (optical axis)

    // waypoint orientation offsets, slerped by arc length
    std::size_t seg = 0;
    while (seg + 2 < wp_s.size() && wp_s[seg + 1] <= s) ++seg;
    const double span = wp_s[seg + 1] - wp_s[seg];
    const double frac = span > 1e-12 ? std::clamp((s - wp_s[seg]) / span, 0.0, 1.0) : 0.0;
    const Eigen::Quaterniond q_off =
        to_eigen(wps[seg].orientation).slerp(frac, to_eigen(wps[seg + 1].orientation));

    Pose pose;
    pose.rotation = base * Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitZ()).toRotationMatrix() *
                    q_off.toRotationMatrix();
    pose.translation = path.position(s);
    traj.poses.push_back(pose);
    traj.frame_indices.push_back(f);

    // advance
    const double step = cfg.step_size_mean * (0.75 + 0.5 * rng.uniform01());
    s += direction * step;
    if (s < s_min) {
      s = s_min;
      direction = 1;
      run_left = cfg.include_reinsertion ? draw_run_length() : n_frames + 1;
    } else if (s > s_max) {
      s = s_max;
      direction = -1;
      run_left = cfg.include_reinsertion ? draw_run_length() : n_frames + 1;
    } else if (cfg.include_reinsertion && --run_left <= 0) {
      direction = -direction;
      run_left = draw_run_length();
    }
    roll += deg_to_rad(cfg.roll_rate);
  }
  return traj;
}

}  // namespace colonpose
