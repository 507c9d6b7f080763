#include "colonpose/render.hpp"

#include <cmath>

namespace colonpose {

namespace {

// Conservative sphere tracing of the radial wall distance. The distance
// field is not 1-Lipschitz where the fold profile is steep, so steps use a
// small safety factor and a sign change triggers bisection refinement.
struct TraceResult {
  bool hit = false;
  double t = 0;  // Euclidean distance along the (normalized) ray
  double s = 0;  // centerline arc length at the hit
};

constexpr double kStepSafety = 0.2;
constexpr double kMinStep = 0.01;   // cm
constexpr double kMaxStep = 1.0;    // cm
constexpr double kHitEps = 2e-4;    // cm

TraceResult trace_ray(const TubeScene& scene, const Eigen::Vector3d& origin,
                      const Eigen::Vector3d& dir, double t_max, double hint_s) {
  TraceResult res;
  double s = hint_s;
  double t = 0;
  double f_prev = scene.wall_distance(origin, s);
  if (f_prev >= 0) return res;  // starting on/inside the wall: treat as miss
  double t_prev = 0;
  while (t < t_max) {
    const double step = std::clamp(kStepSafety * -f_prev, kMinStep, kMaxStep);
    t_prev = t;
    t += step;
    const double f = scene.wall_distance(origin + t * dir, s);
    if (f >= -kHitEps) {
      // bisect [t_prev, t] down to the surface
      double lo = t_prev, hi = t;
      for (int i = 0; i < 30; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = scene.wall_distance(origin + mid * dir, s);
        if (fm >= -kHitEps)
          hi = mid;
        else
          lo = mid;
      }
      res.hit = true;
      res.t = hi;
      double s_hit = s;
      scene.wall_distance(origin + hi * dir, s_hit);
      res.s = s_hit;
      return res;
    }
    f_prev = f;
  }
  return res;
}

bool light_blocked(const TubeScene& scene, const Eigen::Vector3d& surface_point,
                   const Eigen::Vector3d& inward_normal, const Eigen::Vector3d& light_pos,
                   double hint_s) {
  const Eigen::Vector3d to_light = light_pos - surface_point;
  const double dist = to_light.norm();
  if (dist < 1e-9) return false;
  const Eigen::Vector3d dir = to_light / dist;
  // lift off the surface before marching toward the light
  const Eigen::Vector3d start = surface_point + 5e-3 * inward_normal;
  const TraceResult tr = trace_ray(scene, start, dir, dist - 1e-2, hint_s);
  return tr.hit;
}

}  // namespace

RenderResult render_frame(const TubeScene& scene, const Pose& world_from_camera,
                          const Intrinsics& k, const LightRig& lights, double far_cap,
                          Exec exec) {
  k.validate();
  scene.validate();
  const Eigen::Vector3d cam_pos = world_from_camera.translation;
  double s_cam = scene.centerline.nearest_arclength_global(cam_pos);
  {
    double s_probe = s_cam;
    const double f = scene.wall_distance(cam_pos, s_probe);
    if (f >= -0.05 * scene.base_radius)
      throw NumericError("render_frame: camera is not inside the tube");
  }

  const Eigen::Vector3d light_l =
      cam_pos - lights.offset * world_from_camera.rotation.col(0);
  const Eigen::Vector3d light_r =
      cam_pos + lights.offset * world_from_camera.rotation.col(0);

  RenderResult out;
  out.rgb = RgbImage(k.width, k.height, k);
  out.depth = DepthMap(k.width, k.height, k, far_cap);
  out.shadow = ValidityMask(k.width, k.height);

  auto render_row = [&](int y) {
    double hint = s_cam;  // rays sweep the row coherently; reuse the hint
    for (int x = 0; x < k.width; ++x) {
      const Eigen::Vector3d dir_cam =
          Eigen::Vector3d((x - k.cx) / k.fx, (y - k.cy) / k.fy, 1.0).normalized();
      const Eigen::Vector3d dir = world_from_camera.rotation * dir_cam;
      const double t_max = far_cap / dir_cam.z();
      const TraceResult tr = trace_ray(scene, cam_pos, dir, t_max, hint);
      if (!tr.hit) {
        out.depth.at(y, x) = far_cap;
        continue;  // open end: black
      }
      hint = tr.s;
      out.depth.at(y, x) = tr.t * dir_cam.z();

      const Eigen::Vector3d p = cam_pos + tr.t * dir;
      const Eigen::Vector3d n_out = scene.wall_normal(p, tr.s);
      const Eigen::Vector3d n_in = -n_out;  // shading normal faces the lumen
      const Eigen::Vector3d alb = scene.albedo(p, tr.s);

      Eigen::Vector3d radiance = Eigen::Vector3d::Zero();
      bool any_shadow = false;
      for (const Eigen::Vector3d& lp : {light_l, light_r}) {
        const Eigen::Vector3d to_l = lp - p;
        const double d2 = to_l.squaredNorm();
        const double cosine = n_in.dot(to_l) / std::sqrt(d2);
        if (cosine <= 0) continue;
        if (light_blocked(scene, p, n_in, lp, tr.s)) {
          any_shadow = true;
          continue;
        }
        radiance += alb * (lights.intensity * cosine / std::max(d2, 1e-6));
      }
      for (int c = 0; c < 3; ++c) out.rgb.at(y, x, c) = std::clamp(radiance[c], 0.0, 1.0);
      out.shadow.at(y, x) = any_shadow ? 1 : 0;
    }
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int y = 0; y < k.height; ++y) render_row(y);
  } else {
    for (int y = 0; y < k.height; ++y) render_row(y);
  }
  return out;
}

}  // namespace colonpose
