#pragma once

#include "colonpose/dataset.hpp"
#include "colonpose/losses.hpp"

namespace colonpose {

// Self-supervision study: compares warping losses under ground-truth depth
// and pose against a grid of deliberately wrong poses.
struct WarpStudyConfig {
  int n_pairs = 100;
  int k = 5;
  bool match_means = false;  // linear illumination adjustment before L_R
  int dump_pairs = 0;        // dump images/error maps for the first N pairs
  std::vector<double> trans_scales{0.0, 0.25, 0.5, 0.75, 1.25, 1.5};
  std::vector<double> z_offsets{-0.2, -0.1, 0.1, 0.2};
  std::vector<double> rot_z_degs{-2.0, -1.0, 1.0, 2.0};
};

// One warped image (a pair has two: each frame warped toward the other).
struct WarpStudyRow {
  std::string image_id;
  double gt_lr = 0, gt_ls = 0, gt_lg = 0;
  double valid_fraction = 0;
  double best_wrong_lr = 0;
  std::string best_wrong_pose;
  bool wrong_beats_gt = false;

  static std::string csv_header();
  std::string csv_row() const;
};

struct WarpStudySummary {
  int n_images = 0;
  double fraction_wrong_beats_gt = 0;
  std::vector<WarpStudyRow> rows;
};

// Pairs are taken evenly spaced over the concatenated trajectories. When
// dump_dir is non-empty, target/source/warped images and L1 error maps of
// the first dump_pairs pairs are written there as PPM files.
WarpStudySummary run_warp_study(const std::vector<LoadedTrajectory>& trajectories,
                                const WarpStudyConfig& cfg, const std::string& dump_dir = "");

}  // namespace colonpose
