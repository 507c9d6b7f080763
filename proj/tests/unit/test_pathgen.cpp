#include <doctest.h>

#include "colonpose/dataset.hpp"
#include "colonpose/pathgen.hpp"

using namespace colonpose;

TEST_CASE("waypoint randomization respects its bounds") {
  const TubeScene scene = make_tube_scene(SceneConfig{});
  TrajectoryConfig cfg;

  SUBCASE("zero bounds leave waypoints untouched") {
    cfg.max_wp_translation = 0;
    cfg.max_wp_rotation = 0;
    Rng rng(1);
    const auto out = randomize_waypoints(scene.base_waypoints, cfg, rng);
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK((out[i].position - scene.base_waypoints[i].position).norm() == 0.0);
      Pose p;
      p.rotation = out[i].orientation.to_rotation();
      CHECK(rotation_angle_deg(p) < 1e-9);
    }
  }

  SUBCASE("default bounds: displacement <= 0.2 cm, rotation <= 20 deg") {
    Rng rng(2);
    const auto out = randomize_waypoints(scene.base_waypoints, cfg, rng);
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK((out[i].position - scene.base_waypoints[i].position).norm() <= 0.2 + 1e-12);
      Pose p;
      p.rotation = out[i].orientation.to_rotation();
      CHECK(rotation_angle_deg(p) <= 20.0 + 1e-9);
    }
  }

  SUBCASE("same seed reproduces, different seed differs") {
    Rng r1(42), r2(42), r3(43);
    const auto a = randomize_waypoints(scene.base_waypoints, cfg, r1);
    const auto b = randomize_waypoints(scene.base_waypoints, cfg, r2);
    const auto c = randomize_waypoints(scene.base_waypoints, cfg, r3);
    bool same = true, differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      same = same && (a[i].position - b[i].position).norm() == 0.0;
      differs = differs || (a[i].position - c[i].position).norm() > 1e-6;
    }
    CHECK(same);
    CHECK(differs);
  }
}

TEST_CASE("straight centerline with no roll gives pure z steps") {
  TubeScene s;
  s.base_radius = 2.5;
  s.fold_amplitude = 0;
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < 8; ++i) {
    Waypoint w;
    w.position = Eigen::Vector3d(0, 0, 10.0 * i);
    s.base_waypoints.push_back(w);
    pts.push_back(w.position);
  }
  s.centerline = CatmullRomSpline(pts, 64);

  TrajectoryConfig cfg;
  cfg.frames = 100;
  cfg.roll_rate = 0;
  cfg.max_wp_translation = 0;
  cfg.max_wp_rotation = 0;
  cfg.include_reinsertion = false;
  cfg.seed = 7;
  const Trajectory traj = sample_camera_path(s, cfg);
  REQUIRE(traj.size() == 100);
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const Pose rel = relative(traj.poses[i], traj.poses[i + 1]);
    CHECK(std::abs(rel.translation.x()) < 1e-9);
    CHECK(std::abs(rel.translation.y()) < 1e-9);
    CHECK(rel.translation.z() < 0);  // pure withdrawal
    CHECK(std::abs(rel.translation.z()) <= cfg.step_size_mean * 1.25 + 1e-9);
    CHECK(rotation_angle_deg(rel) < 1e-6);
  }
}

TEST_CASE("default path is bimodal in t_z at k=5") {
  const TubeScene scene = make_tube_scene(SceneConfig{});
  TrajectoryConfig cfg;
  cfg.frames = 1000;
  cfg.seed = 1;
  const Trajectory traj = sample_camera_path(scene, cfg);
  const DatasetStats st = dataset_stats(traj.poses, 5);
  CHECK(st.bimodal());
  CHECK(st.frac_tz_neg >= 0.3);
  CHECK(st.frac_tz_pos >= 0.3);
}

TEST_CASE("paths are deterministic given the seed") {
  const TubeScene scene = make_tube_scene(SceneConfig{});
  TrajectoryConfig cfg;
  cfg.frames = 200;
  cfg.seed = 9;
  const Trajectory a = sample_camera_path(scene, cfg);
  const Trajectory b = sample_camera_path(scene, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK((a.poses[i].translation - b.poses[i].translation).norm() == 0.0);
    CHECK((a.poses[i].rotation - b.poses[i].rotation).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("per-step rotations at defaults stay within a few degrees") {
  const TubeScene scene = make_tube_scene(SceneConfig{});
  TrajectoryConfig cfg;
  cfg.frames = 600;
  cfg.seed = 13;
  const Trajectory traj = sample_camera_path(scene, cfg);
  double max_axis_deg = 0;
  for (std::size_t i = 0; i + 5 < traj.size(); ++i) {
    const RelPose6 rel = to_6d(relative(traj.poses[i], traj.poses[i + 5]));
    // per-axis rotation components in degrees (logq is half-angle scaled)
    for (int a = 0; a < 3; ++a)
      max_axis_deg = std::max(max_axis_deg, std::abs(rad_to_deg(2.0 * rel.logq[a])));
  }
  CHECK(max_axis_deg < 10.0);

  const DatasetStats st = dataset_stats(traj.poses, 1);
  CHECK(st.mean_rot_deg < 3.0);
}

TEST_CASE("trajectory config validation") {
  const TubeScene scene = make_tube_scene(SceneConfig{});
  TrajectoryConfig cfg;
  cfg.frames = 1;
  CHECK_THROWS_AS(sample_camera_path(scene, cfg), ConfigError);
  cfg.frames = 10;
  cfg.step_size_mean = 0;
  CHECK_THROWS_AS(sample_camera_path(scene, cfg), ConfigError);
}
