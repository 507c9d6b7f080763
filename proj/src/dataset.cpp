#include "colonpose/dataset.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "colonpose/version.hpp"

namespace fs = std::filesystem;

namespace colonpose {

Intrinsics GeneratorConfig::intrinsics() const {
  Intrinsics k;
  k.width = k.height = resolution;
  k.fx = k.fy = 60.0 * resolution / 128.0;
  k.cx = k.cy = resolution / 2.0;
  return k;
}

DatasetStats dataset_stats(const std::vector<Pose>& poses, int k) {
  DatasetStats st;
  if (k <= 0) throw ConfigError("dataset_stats: k must be positive");
  int neg = 0, pos = 0;
  double step_sum = 0, rot_sum = 0;
  for (std::size_t i = 0; i + static_cast<std::size_t>(k) < poses.size(); ++i) {
    const Pose rel = relative(poses[i], poses[i + k]);
    step_sum += rel.translation.norm();
    rot_sum += rotation_angle_deg(rel);
    if (rel.translation.z() < 0)
      ++neg;
    else if (rel.translation.z() > 0)
      ++pos;
    ++st.n_pairs;
  }
  if (st.n_pairs > 0) {
    st.mean_step_cm = step_sum / st.n_pairs;
    st.mean_rot_deg = rot_sum / st.n_pairs;
    st.frac_tz_neg = static_cast<double>(neg) / st.n_pairs;
    st.frac_tz_pos = static_cast<double>(pos) / st.n_pairs;
  }
  return st;
}

std::string frame_ppm_path(const std::string& traj_dir, int frame) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%05d.ppm", frame);
  return traj_dir + "/" + buf;
}

std::string frame_pfm_path(const std::string& traj_dir, int frame) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%05d.pfm", frame);
  return traj_dir + "/" + buf;
}

void write_intrinsics_file(const std::string& path, const Intrinsics& k) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(17);
  out << k.fx << ' ' << k.fy << ' ' << k.cx << ' ' << k.cy << ' ' << k.width << ' ' << k.height
      << '\n';
}

Intrinsics read_intrinsics_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  Intrinsics k;
  if (!(in >> k.fx >> k.fy >> k.cx >> k.cy >> k.width >> k.height))
    throw IoError(path + ": expected 'fx fy cx cy width height'");
  k.validate();
  return k;
}

void write_manifest(const std::string& path, const DatasetManifest& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(17);
  out << "version=" << m.version << '\n';
  out << "seed=" << m.seed << '\n';
  out << "units=" << m.units << '\n';
  out << "images=" << (m.has_images ? 1 : 0) << '\n';
  out << "intrinsics=" << m.intrinsics.fx << ' ' << m.intrinsics.fy << ' ' << m.intrinsics.cx
      << ' ' << m.intrinsics.cy << ' ' << m.intrinsics.width << ' ' << m.intrinsics.height
      << '\n';
  out << "n_trajectories=" << m.trajectories.size() << '\n';
  for (const auto& t : m.trajectories) out << "trajectory=" << t.name << ' ' << t.frame_count << '\n';
}

DatasetManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  DatasetManifest m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError(path + ": malformed manifest line: " + line);
    const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    std::istringstream vs(val);
    if (key == "version")
      m.version = val;
    else if (key == "seed")
      vs >> m.seed;
    else if (key == "units")
      m.units = val;
    else if (key == "images") {
      int v;
      vs >> v;
      m.has_images = v != 0;
    } else if (key == "intrinsics") {
      vs >> m.intrinsics.fx >> m.intrinsics.fy >> m.intrinsics.cx >> m.intrinsics.cy >>
          m.intrinsics.width >> m.intrinsics.height;
    } else if (key == "n_trajectories") {
      // informational; the trajectory lines are authoritative
    } else if (key == "trajectory") {
      TrajectoryEntry e;
      vs >> e.name >> e.frame_count;
      m.trajectories.push_back(e);
    } else {
      throw IoError(path + ": unknown manifest key: " + key);
    }
    if (vs.fail()) throw IoError(path + ": malformed manifest value for " + key);
  }
  return m;
}

DatasetManifest generate_dataset(const GeneratorConfig& cfg, const std::string& out_dir,
                                 const std::function<void(const std::string&)>& log) {
  const Intrinsics k = cfg.intrinsics();
  k.validate();
  const TubeScene scene = make_tube_scene(cfg.scene);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);

  DatasetManifest manifest;
  manifest.version = kVersion;
  manifest.seed = cfg.seed;
  manifest.intrinsics = k;
  manifest.has_images = cfg.render_images;

  for (int n = 0; n < cfg.n_trajectories; ++n) {
    char name[16];
    std::snprintf(name, sizeof(name), "traj_%02d", n);
    const std::string traj_dir = out_dir + "/" + name;
    fs::create_directories(traj_dir, ec);
    if (ec) throw IoError("cannot create " + traj_dir);

    TrajectoryConfig tcfg = cfg.trajectory;
    tcfg.n_waypoints = cfg.scene.n_waypoints;
    tcfg.seed = cfg.seed + static_cast<std::uint64_t>(n);
    const Trajectory traj = sample_camera_path(scene, tcfg);

    if (cfg.render_images) {
      for (std::size_t f = 0; f < traj.size(); ++f) {
        const RenderResult r = render_frame(scene, traj.poses[f], k, cfg.lights, cfg.far_cap);
        write_ppm(frame_ppm_path(traj_dir, static_cast<int>(f)), r.rgb);
        write_pfm(frame_pfm_path(traj_dir, static_cast<int>(f)), r.depth);
        if (log && f % 100 == 99)
          log(std::string(name) + ": rendered " + std::to_string(f + 1) + "/" +
              std::to_string(traj.size()) + " frames");
      }
    }
    write_pose_file(traj_dir + "/poses.txt", traj.poses);
    write_intrinsics_file(traj_dir + "/intrinsics.txt", k);
    manifest.trajectories.push_back({name, static_cast<int>(traj.size())});
    if (log) log(std::string(name) + ": " + std::to_string(traj.size()) + " frames done");
  }
  write_manifest(out_dir + "/manifest.txt", manifest);
  return manifest;
}

RgbImage LoadedTrajectory::load_rgb(int frame) const {
  RgbImage img = read_ppm(frame_ppm_path(dir, frame));
  img.intrinsics = intrinsics;
  return img;
}

DepthMap LoadedTrajectory::load_depth(int frame) const {
  DepthMap d = read_pfm(frame_pfm_path(dir, frame));
  d.intrinsics = intrinsics;
  return d;
}

std::vector<LoadedTrajectory> load_dataset(const std::string& dir, DatasetManifest* manifest_out) {
  const DatasetManifest manifest = read_manifest(dir + "/manifest.txt");
  std::vector<LoadedTrajectory> out;
  for (const auto& entry : manifest.trajectories) {
    LoadedTrajectory t;
    t.dir = dir + "/" + entry.name;
    t.name = entry.name;
    t.poses = read_pose_file(t.dir + "/poses.txt");
    t.intrinsics = read_intrinsics_file(t.dir + "/intrinsics.txt");
    t.has_images = manifest.has_images;
    if (static_cast<int>(t.poses.size()) != entry.frame_count)
      throw IoError(t.dir + ": manifest frame count " + std::to_string(entry.frame_count) +
                    " != pose lines " + std::to_string(t.poses.size()));
    if (manifest.has_images) {
      for (int f = 0; f < entry.frame_count; ++f) {
        if (!fs::exists(frame_ppm_path(t.dir, f)) || !fs::exists(frame_pfm_path(t.dir, f)))
          throw IoError(t.dir + ": missing frame files for index " + std::to_string(f));
      }
    }
    out.push_back(std::move(t));
  }
  if (manifest_out) *manifest_out = manifest;
  return out;
}

}  // namespace colonpose
