#include "colonpose/scene.hpp"

#include <cmath>

namespace colonpose {

namespace {

// deterministic lattice hash -> [0,1)
inline double hash01(std::uint64_t seed, std::int64_t ix, std::int64_t iy, std::int64_t iz) {
  std::uint64_t h = seed;
  h ^= static_cast<std::uint64_t>(ix) * 0x8da6b343ULL;
  h ^= static_cast<std::uint64_t>(iy) * 0xd8163841ULL;
  h ^= static_cast<std::uint64_t>(iz) * 0xcb1ab31fULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

double value_noise(std::uint64_t seed, const Eigen::Vector3d& p) {
  const double fx = std::floor(p.x()), fy = std::floor(p.y()), fz = std::floor(p.z());
  const auto ix = static_cast<std::int64_t>(fx), iy = static_cast<std::int64_t>(fy),
             iz = static_cast<std::int64_t>(fz);
  const double tx = smooth(p.x() - fx), ty = smooth(p.y() - fy), tz = smooth(p.z() - fz);
  double acc[2][2];
  for (int dy = 0; dy < 2; ++dy)
    for (int dz = 0; dz < 2; ++dz) {
      const double a = hash01(seed, ix, iy + dy, iz + dz);
      const double b = hash01(seed, ix + 1, iy + dy, iz + dz);
      acc[dy][dz] = a + tx * (b - a);
    }
  const double y0 = acc[0][0] + tz * (acc[0][1] - acc[0][0]);
  const double y1 = acc[1][0] + tz * (acc[1][1] - acc[1][0]);
  return y0 + ty * (y1 - y0);
}

double fbm(std::uint64_t seed, Eigen::Vector3d p, int octaves) {
  double amp = 0.5, sum = 0, norm = 0;
  for (int o = 0; o < octaves; ++o) {
    sum += amp * value_noise(seed + static_cast<std::uint64_t>(o) * 0x9e37ULL, p);
    norm += amp;
    amp *= 0.5;
    p *= 2.03;
  }
  return sum / norm;
}

}  // namespace

double TubeScene::radius_at(double s) const {
  const double c = std::cos(2.0 * kPi * fold_frequency * s);
  if (c <= 0) return base_radius;
  return base_radius - fold_amplitude * std::pow(c, fold_sharpness);
}

double TubeScene::wall_distance(const Eigen::Vector3d& p, double& hint_s) const {
  hint_s = centerline.nearest_arclength(p, hint_s);
  const double radial = (p - centerline.position(hint_s)).norm();
  return radial - radius_at(hint_s);
}

Eigen::Vector3d TubeScene::wall_normal(const Eigen::Vector3d& p, double hint_s) const {
  const double eps = 1e-4;
  Eigen::Vector3d n;
  for (int a = 0; a < 3; ++a) {
    Eigen::Vector3d dp = Eigen::Vector3d::Zero();
    dp[a] = eps;
    double h1 = hint_s, h2 = hint_s;
    n[a] = wall_distance(p + dp, h1) - wall_distance(p - dp, h2);
  }
  const double len = n.norm();
  if (len < 1e-12) return Eigen::Vector3d::UnitZ();
  return n / len;
}

Eigen::Vector3d TubeScene::albedo(const Eigen::Vector3d& p, double hint_s) const {
  const double s = centerline.nearest_arclength(p, hint_s);
  const Eigen::Vector3d c = centerline.position(s);
  const Eigen::Vector3d t = centerline.tangent(s);
  Eigen::Vector3d radial = p - c;
  radial -= radial.dot(t) * t;
  const double rn = radial.norm();
  if (rn > 1e-9) radial /= rn;
  // seam-free tube coordinates: arc length + radial direction
  const Eigen::Vector3d tex(s * 0.9, radial.x() * 1.7 + radial.z() * 0.6, radial.y() * 1.7);
  const double n1 = fbm(texture_seed, tex, 3);
  const double n2 = fbm(texture_seed ^ 0xabcdef1234ULL, tex * 1.31 + Eigen::Vector3d(7, 3, 5), 2);
  // mucosa-like pink with mild mottling
  Eigen::Vector3d base(0.78, 0.42, 0.36);
  base *= 0.72 + 0.34 * n1;
  base.y() *= 0.9 + 0.2 * n2;
  base.z() *= 0.85 + 0.3 * n2;
  return base.cwiseMin(1.0).cwiseMax(0.0);
}

void TubeScene::validate() const {
  if (!(base_radius > fold_amplitude) || fold_amplitude < 0)
    throw ConfigError("scene: requires base_radius > fold_amplitude >= 0");
  if (fold_frequency < 0) throw ConfigError("scene: fold_frequency must be >= 0");
}

TubeScene make_tube_scene(const SceneConfig& cfg) {
  if (cfg.n_waypoints < 4) throw ConfigError("scene: need at least 4 waypoints");
  TubeScene scene;
  scene.base_radius = cfg.base_radius;
  scene.fold_amplitude = cfg.fold_amplitude;
  scene.fold_frequency = cfg.fold_frequency;
  scene.fold_sharpness = cfg.fold_sharpness;
  scene.texture_seed = cfg.texture_seed;

  // winding centerline; lateral amplitudes and frequencies keep the
  // curvature radius well above the tube radius
  scene.base_waypoints.resize(cfg.n_waypoints);
  for (int i = 0; i < cfg.n_waypoints; ++i) {
    const double t = cfg.tube_length * static_cast<double>(i) / (cfg.n_waypoints - 1);
    Waypoint wp;
    wp.position = Eigen::Vector3d(8.0 * std::sin(0.055 * t), 6.0 * std::sin(0.042 * t + 1.3),
                                  0.95 * t);
    scene.base_waypoints[i] = wp;
  }
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(scene.base_waypoints.size());
  for (const auto& wp : scene.base_waypoints) pts.push_back(wp.position);
  scene.centerline = CatmullRomSpline(std::move(pts), 96);
  scene.validate();
  return scene;
}

}  // namespace colonpose
