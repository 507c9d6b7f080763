#pragma once

#include <functional>
#include <string>
#include <vector>

#include "colonpose/image_io.hpp"
#include "colonpose/pathgen.hpp"
#include "colonpose/render.hpp"
#include "colonpose/trajectory_io.hpp"

namespace colonpose {

struct GeneratorConfig {
  SceneConfig scene;
  TrajectoryConfig trajectory;
  int n_trajectories = 1;
  int resolution = 128;
  LightRig lights;
  double far_cap = 30.0;
  int k = 5;               // frame gap used by the summary statistics
  bool render_images = true;
  std::uint64_t seed = 1;

  // fx = fy = 60 at 128 px, scaled with resolution; principal point at the
  // image center. FOV ~94 degrees.
  Intrinsics intrinsics() const;
};

struct TrajectoryEntry {
  std::string name;  // e.g. "traj_00"
  int frame_count = 0;
};

struct DatasetManifest {
  std::string version;
  std::uint64_t seed = 0;
  std::string units = "cm";
  Intrinsics intrinsics;
  bool has_images = true;
  std::vector<TrajectoryEntry> trajectories;
};

// Per-pair translation/rotation statistics at frame gap k.
struct DatasetStats {
  double mean_step_cm = 0;   // mean |translation| between pairs k apart
  double mean_rot_deg = 0;   // mean rotation angle between pairs k apart
  double frac_tz_neg = 0;    // mass of the withdrawal mode
  double frac_tz_pos = 0;    // mass of the insertion mode
  int n_pairs = 0;
  bool bimodal() const { return frac_tz_neg >= 0.3 && frac_tz_pos >= 0.3; }
};
DatasetStats dataset_stats(const std::vector<Pose>& poses, int k);

// Renders and writes one dataset under out_dir:
//   manifest.txt, traj_<NN>/{frame_%05d.ppm, frame_%05d.pfm, poses.txt,
//   intrinsics.txt}
// Trajectory n uses seed + n so every trajectory gets its own waypoint
// randomization. Deterministic: a seed reproduces the dataset byte for byte.
DatasetManifest generate_dataset(const GeneratorConfig& cfg, const std::string& out_dir,
                                 const std::function<void(const std::string&)>& log = {});

void write_manifest(const std::string& path, const DatasetManifest& m);
DatasetManifest read_manifest(const std::string& path);

// Loaded view of one trajectory directory (images stay on disk).
struct LoadedTrajectory {
  std::string dir;
  std::string name;
  std::vector<Pose> poses;
  Intrinsics intrinsics;
  bool has_images = true;

  RgbImage load_rgb(int frame) const;
  DepthMap load_depth(int frame) const;
};

// Reads the manifest, checks that every referenced file exists and that
// frame counts match the pose files, and returns per-trajectory views.
std::vector<LoadedTrajectory> load_dataset(const std::string& dir, DatasetManifest* manifest_out = nullptr);

Intrinsics read_intrinsics_file(const std::string& path);
void write_intrinsics_file(const std::string& path, const Intrinsics& k);

std::string frame_ppm_path(const std::string& traj_dir, int frame);
std::string frame_pfm_path(const std::string& traj_dir, int frame);

}  // namespace colonpose
