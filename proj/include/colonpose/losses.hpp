#pragma once

#include <array>
#include <string>

#include "colonpose/camera.hpp"
#include "colonpose/pose.hpp"

namespace colonpose {

// Learned homoscedastic loss weights (beta for translation, gamma for
// rotation) plus the fixed class-loss weight.
struct LossWeights {
  double beta = 0.0;
  double gamma = -3.0;
  double w_c = 0.1;
};

struct LossReport {
  double l_r = 0, l_s = 0, l_g = 0, l_pose = 0, l_class = 0, total = 0;
  double valid_fraction = 0;

  static std::string csv_header();  // pair_id,l_r,l_s,l_g,l_pose,l_class,total,valid_fraction
  std::string csv_row(const std::string& pair_id) const;
};

// SSIM parameters: uniform window and the standard stabilizers on [0,1]
// intensities.
inline constexpr int kSsimWindow = 7;
inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;

// Mean absolute per-channel difference over mask-true pixels. When
// `match_means` is set, the warped image is pre-scaled so both images have
// the same mean intensity over the valid region (the linear illumination
// adjustment used by the warp study). Empty mask throws NumericError.
double reprojection_loss(const RgbImage& target, const RgbImage& warped, const ValidityMask& mask,
                         bool match_means = false, Exec exec = Exec::parallel);

// Mean over valid windows of (1 - SSIM)/2, per channel. A window is valid
// when it lies fully inside the image and every pixel of it is mask-true.
// Images smaller than the window, or a mask with no valid window, throw.
double ssim_loss(const RgbImage& target, const RgbImage& warped, const ValidityMask& mask,
                 Exec exec = Exec::parallel);

// Mean over valid pixels of |warped - projected| / (warped + projected).
double geometric_consistency_loss(const DepthMap& d_warped, const DepthMap& d_projected,
                                  const ValidityMask& mask, Exec exec = Exec::parallel);

// |t^ - t|_1 e^-beta + beta + |logq^ - logq|_1 e^-gamma + gamma
double pose_loss(const RelPose6& pred, const RelPose6& gt, const LossWeights& w);

struct PoseLossGrad {
  double value = 0;
  Eigen::Matrix<double, 6, 1> d_pred = Eigen::Matrix<double, 6, 1>::Zero();
  double d_beta = 0;
  double d_gamma = 0;
};
PoseLossGrad pose_loss_grad(const RelPose6& pred, const RelPose6& gt, const LossWeights& w);

// Cross entropy -log p[label]; probabilities clamped at 1e-12 before the log.
double class_loss(const std::array<double, 2>& pred_probs, int label);

// pose_l + w_c * class_l
double supervised_target(double pose_l, double class_l, const LossWeights& w);

}  // namespace colonpose
