#include "colonpose/camera.hpp"

#include <algorithm>
#include <cmath>

namespace colonpose {

void Intrinsics::validate() const {
  if (!(fx > 0) || !(fy > 0)) throw ConfigError("intrinsics: focal lengths must be positive");
  if (!(cx >= 0 && cx < width) || !(cy >= 0 && cy < height))
    throw ConfigError("intrinsics: principal point outside the image");
  if (width <= 0 || height <= 0) throw ConfigError("intrinsics: non-positive image size");
}

std::size_t ValidityMask::count_true() const {
  std::size_t n = 0;
  for (std::uint8_t v : data) n += v != 0;
  return n;
}

Eigen::Vector2d project(const Eigen::Vector3d& point, const Intrinsics& k) {
  if (!(point.z() > 0)) throw NumericError("project: point behind the camera (z <= 0)");
  return {k.fx * point.x() / point.z() + k.cx, k.fy * point.y() / point.z() + k.cy};
}

Eigen::Vector3d backproject(const Eigen::Vector2d& pixel, double depth, const Intrinsics& k) {
  if (!(depth > 0)) throw NumericError("backproject: depth must be positive");
  return {(pixel.x() - k.cx) / k.fx * depth, (pixel.y() - k.cy) / k.fy * depth, depth};
}

namespace {

struct BilinearWeights {
  int x0, y0;
  double wx, wy;
};

// All four neighbours must exist; at the far border the base index is pulled
// in by one so integer locations stay exact.
inline BilinearWeights bilinear_weights(double x, double y, int width, int height) {
  const int x0 = std::min(static_cast<int>(std::floor(x)), width - 2);
  const int y0 = std::min(static_cast<int>(std::floor(y)), height - 2);
  return {x0, y0, x - x0, y - y0};
}

inline bool in_sample_range(double x, double y, int width, int height) {
  return x >= 0.0 && y >= 0.0 && x <= width - 1.0 && y <= height - 1.0;
}

}  // namespace

double bilinear_sample(const DepthMap& img, const Eigen::Vector2d& loc) {
  if (img.width < 2 || img.height < 2) throw NumericError("bilinear_sample: image too small");
  if (!in_sample_range(loc.x(), loc.y(), img.width, img.height))
    throw NumericError("bilinear_sample: location out of bounds");
  const auto w = bilinear_weights(loc.x(), loc.y(), img.width, img.height);
  const double v00 = img.at(w.y0, w.x0), v01 = img.at(w.y0, w.x0 + 1);
  const double v10 = img.at(w.y0 + 1, w.x0), v11 = img.at(w.y0 + 1, w.x0 + 1);
  return (1 - w.wy) * ((1 - w.wx) * v00 + w.wx * v01) + w.wy * ((1 - w.wx) * v10 + w.wx * v11);
}

Eigen::Vector3d bilinear_sample(const RgbImage& img, const Eigen::Vector2d& loc) {
  if (img.width < 2 || img.height < 2) throw NumericError("bilinear_sample: image too small");
  if (!in_sample_range(loc.x(), loc.y(), img.width, img.height))
    throw NumericError("bilinear_sample: location out of bounds");
  const auto w = bilinear_weights(loc.x(), loc.y(), img.width, img.height);
  Eigen::Vector3d out;
  for (int c = 0; c < 3; ++c) {
    const double v00 = img.at(w.y0, w.x0, c), v01 = img.at(w.y0, w.x0 + 1, c);
    const double v10 = img.at(w.y0 + 1, w.x0, c), v11 = img.at(w.y0 + 1, w.x0 + 1, c);
    out[c] =
        (1 - w.wy) * ((1 - w.wx) * v00 + w.wx * v01) + w.wy * ((1 - w.wx) * v10 + w.wx * v11);
  }
  return out;
}

namespace {

// Reprojection of one target pixel into the source frame. Returns false when
// the sample leaves the source image or ends up behind the source camera.
// Locations within round-off of the border are clamped onto it so an
// identity warp keeps every pixel.
inline bool reproject_pixel(int x, int y, const DepthMap& target_depth,
                            const Intrinsics& source_k, const Pose& source_from_target,
                            Eigen::Vector2d& source_loc, double& z_in_source) {
  constexpr double kEdgeEps = 1e-9;
  const double d = target_depth.at(y, x);
  if (!(d > 0)) return false;
  const Eigen::Vector3d p_target = backproject(Eigen::Vector2d(x, y), d, target_depth.intrinsics);
  const Eigen::Vector3d p_source = source_from_target.apply(p_target);
  z_in_source = p_source.z();
  if (!(z_in_source > 0)) return false;
  source_loc = {source_k.fx * p_source.x() / z_in_source + source_k.cx,
                source_k.fy * p_source.y() / z_in_source + source_k.cy};
  if (source_loc.x() < -kEdgeEps || source_loc.y() < -kEdgeEps ||
      source_loc.x() > source_k.width - 1.0 + kEdgeEps ||
      source_loc.y() > source_k.height - 1.0 + kEdgeEps)
    return false;
  source_loc.x() = std::clamp(source_loc.x(), 0.0, source_k.width - 1.0);
  source_loc.y() = std::clamp(source_loc.y(), 0.0, source_k.height - 1.0);
  return true;
}

template <typename RowFn>
void for_each_row(int height, Exec exec, RowFn&& fn) {
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y) fn(y);
  } else {
    for (int y = 0; y < height; ++y) fn(y);
  }
}

}  // namespace

std::pair<RgbImage, ValidityMask> warp_image(const DepthMap& target_depth,
                                             const RgbImage& source, const Pose& omega,
                                             Exec exec) {
  if (target_depth.width != source.width || target_depth.height != source.height)
    throw NumericError("warp_image: shape mismatch");
  const Pose source_from_target = invert(omega);
  RgbImage out(target_depth.width, target_depth.height, target_depth.intrinsics);
  ValidityMask mask(target_depth.width, target_depth.height);

  for_each_row(target_depth.height, exec, [&](int y) {
    for (int x = 0; x < target_depth.width; ++x) {
      Eigen::Vector2d loc;
      double z;
      if (!reproject_pixel(x, y, target_depth, source.intrinsics, source_from_target, loc, z))
        continue;
      const Eigen::Vector3d rgb = bilinear_sample(source, loc);
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = rgb[c];
      mask.at(y, x) = 1;
    }
  });
  return {std::move(out), std::move(mask)};
}

std::tuple<DepthMap, DepthMap, ValidityMask> warp_depth(const DepthMap& target_depth,
                                                        const DepthMap& source_depth,
                                                        const Pose& omega, Exec exec) {
  if (target_depth.width != source_depth.width || target_depth.height != source_depth.height)
    throw NumericError("warp_depth: shape mismatch");
  const Pose source_from_target = invert(omega);
  DepthMap warped(target_depth.width, target_depth.height, target_depth.intrinsics, 0.0);
  DepthMap projected(target_depth.width, target_depth.height, target_depth.intrinsics, 0.0);
  ValidityMask mask(target_depth.width, target_depth.height);

  for_each_row(target_depth.height, exec, [&](int y) {
    for (int x = 0; x < target_depth.width; ++x) {
      Eigen::Vector2d loc;
      double z;
      if (!reproject_pixel(x, y, target_depth, source_depth.intrinsics, source_from_target, loc,
                           z))
        continue;
      warped.at(y, x) = bilinear_sample(source_depth, loc);
      projected.at(y, x) = z;
      mask.at(y, x) = 1;
    }
  });
  return {std::move(warped), std::move(projected), std::move(mask)};
}

}  // namespace colonpose
