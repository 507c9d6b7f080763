#pragma once

#include <cstdint>
#include <tuple>
#include <utility>
#include <vector>

#include "colonpose/pose.hpp"

namespace colonpose {

// Pinhole intrinsics in pixel units. Pixel (x, y) has continuous
// coordinates exactly (x, y): the integer grid is the sample grid.
struct Intrinsics {
  double fx = 0, fy = 0, cx = 0, cy = 0;
  int width = 0, height = 0;

  void validate() const;
  bool operator==(const Intrinsics&) const = default;
};

// Interleaved RGB, values in [0, 1], row-major.
struct RgbImage {
  int width = 0, height = 0;
  std::vector<double> data;  // height*width*3
  Intrinsics intrinsics;

  RgbImage() = default;
  RgbImage(int w, int h, const Intrinsics& k = {})
      : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0.0), intrinsics(k) {}

  double& at(int y, int x, int c) { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  double at(int y, int x, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
};

// z-depth along the optical axis, centimeters, strictly positive.
struct DepthMap {
  int width = 0, height = 0;
  std::vector<double> data;  // height*width
  Intrinsics intrinsics;

  DepthMap() = default;
  DepthMap(int w, int h, const Intrinsics& k = {}, double fill = 1.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill), intrinsics(k) {}

  double& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

struct ValidityMask {
  int width = 0, height = 0;
  std::vector<std::uint8_t> data;

  ValidityMask() = default;
  ValidityMask(int w, int h, bool fill = false)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

  std::uint8_t& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }
  bool at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
  std::size_t count_true() const;
};

// (fx x/z + cx, fy y/z + cy); throws NumericError for z <= 0.
Eigen::Vector2d project(const Eigen::Vector3d& point, const Intrinsics& k);

// Inverse of project at the given depth; throws NumericError for depth <= 0.
Eigen::Vector3d backproject(const Eigen::Vector2d& pixel, double depth, const Intrinsics& k);

// Bilinear sample at a subpixel location inside [0, w-1] x [0, h-1];
// exact at integer locations. Out-of-bounds locations throw NumericError
// (warp callers mask instead of sampling).
double bilinear_sample(const DepthMap& img, const Eigen::Vector2d& location);
Eigen::Vector3d bilinear_sample(const RgbImage& img, const Eigen::Vector2d& location);

// Dense inverse warping. `omega_target_to_source` is the relative pose
// mapping the target camera onto the source camera (P_src = P_tgt * omega),
// i.e. the pose of the source camera expressed in the target frame; point
// coordinates therefore transform from target to source by its inverse.
// Each target pixel is back-projected with the target depth, moved into the
// source frame, projected, and bilinearly sampled from the source image.
// Mask is false where the sample would fall outside the source image or
// behind the source camera; masked pixels are left at 0.
std::pair<RgbImage, ValidityMask> warp_image(const DepthMap& target_depth,
                                             const RgbImage& source,
                                             const Pose& omega_target_to_source,
                                             Exec exec = Exec::parallel);

// Same reprojection as warp_image, producing the warped source depth
// (bilinearly sampled at the reprojected location) and the projected depth
// (z of the target point expressed in the source frame).
std::tuple<DepthMap, DepthMap, ValidityMask> warp_depth(const DepthMap& target_depth,
                                                        const DepthMap& source_depth,
                                                        const Pose& omega_target_to_source,
                                                        Exec exec = Exec::parallel);

}  // namespace colonpose
