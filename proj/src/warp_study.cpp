#include "colonpose/warp_study.hpp"

#include <cmath>
#include <sstream>

#include "colonpose/image_io.hpp"

namespace colonpose {

std::string WarpStudyRow::csv_header() {
  return "image_id,l_r_gt,l_s_gt,l_g_gt,valid_fraction,best_wrong_l_r,best_wrong_pose,"
         "wrong_beats_gt";
}

std::string WarpStudyRow::csv_row() const {
  std::ostringstream ss;
  ss.precision(12);
  ss << image_id << ',' << gt_lr << ',' << gt_ls << ',' << gt_lg << ',' << valid_fraction << ','
     << best_wrong_lr << ',' << best_wrong_pose << ',' << (wrong_beats_gt ? 1 : 0);
  return ss.str();
}

namespace {

struct Candidate {
  Pose omega;
  std::string desc;
};

std::vector<Candidate> perturbation_grid(const Pose& gt, const WarpStudyConfig& cfg) {
  std::vector<Candidate> out;
  for (double s : cfg.trans_scales) {
    Pose p = gt;
    p.translation *= s;
    out.push_back({p, "tscale=" + std::to_string(s)});
  }
  for (double dz : cfg.z_offsets) {
    Pose p = gt;
    p.translation.z() += dz;
    out.push_back({p, "dz=" + std::to_string(dz)});
  }
  for (double deg : cfg.rot_z_degs) {
    out.push_back({compose(gt, Pose::rot_z_deg(deg)), "rotz=" + std::to_string(deg)});
  }
  return out;
}

RgbImage error_map(const RgbImage& a, const RgbImage& b, const ValidityMask& mask) {
  RgbImage em(a.width, a.height, a.intrinsics);
  for (int y = 0; y < a.height; ++y)
    for (int x = 0; x < a.width; ++x) {
      double e = 0;
      if (mask.at(y, x))
        for (int c = 0; c < 3; ++c) e += std::abs(a.at(y, x, c) - b.at(y, x, c)) / 3.0;
      for (int c = 0; c < 3; ++c) em.at(y, x, c) = std::min(1.0, 3.0 * e);
    }
  return em;
}

}  // namespace

WarpStudySummary run_warp_study(const std::vector<LoadedTrajectory>& trajectories,
                                const WarpStudyConfig& cfg, const std::string& dump_dir) {
  if (cfg.n_pairs <= 0) throw ConfigError("warp study: n_pairs must be positive");
  struct PairRef {
    const LoadedTrajectory* traj;
    int frame;
  };
  std::vector<PairRef> all;
  for (const auto& t : trajectories) {
    if (!t.has_images) throw IoError("warp study requires rendered depth/images: " + t.dir);
    for (int i = 0; i + cfg.k < static_cast<int>(t.poses.size()); ++i) all.push_back({&t, i});
  }
  if (all.empty()) throw NumericError("warp study: dataset has no pairs at this k");

  std::vector<PairRef> chosen;
  const std::size_t stride = std::max<std::size_t>(1, all.size() / static_cast<std::size_t>(cfg.n_pairs));
  for (std::size_t i = 0; i < all.size() && chosen.size() < static_cast<std::size_t>(cfg.n_pairs);
       i += stride)
    chosen.push_back(all[i]);

  WarpStudySummary summary;
  int beaten = 0;
  for (std::size_t pi = 0; pi < chosen.size(); ++pi) {
    const auto& pr = chosen[pi];
    const int i = pr.frame, j = pr.frame + cfg.k;
    const RgbImage rgb_i = pr.traj->load_rgb(i), rgb_j = pr.traj->load_rgb(j);
    const DepthMap d_i = pr.traj->load_depth(i), d_j = pr.traj->load_depth(j);

    // two warped images per pair: frame j warped toward i and vice versa
    struct Direction {
      const RgbImage *target, *source;
      const DepthMap *target_depth, *source_depth;
      Pose omega;  // source pose in target frame
      std::string tag;
    };
    const Direction dirs[2] = {
        {&rgb_i, &rgb_j, &d_i, &d_j, relative(pr.traj->poses[i], pr.traj->poses[j]), "to_earlier"},
        {&rgb_j, &rgb_i, &d_j, &d_i, relative(pr.traj->poses[j], pr.traj->poses[i]), "to_later"},
    };

    for (const Direction& dir : dirs) {
      WarpStudyRow row;
      {
        std::ostringstream id;
        id << pr.traj->name << "_f" << i << "_k" << cfg.k << "_" << dir.tag;
        row.image_id = id.str();
      }
      const auto [warped, mask] = warp_image(*dir.target_depth, *dir.source, dir.omega);
      row.valid_fraction =
          static_cast<double>(mask.count_true()) / (mask.width * mask.height);
      row.gt_lr = reprojection_loss(*dir.target, warped, mask, cfg.match_means);
      row.gt_ls = ssim_loss(*dir.target, warped, mask);
      const auto [dw, dp, dmask] = warp_depth(*dir.target_depth, *dir.source_depth, dir.omega);
      row.gt_lg = geometric_consistency_loss(dw, dp, dmask);

      row.best_wrong_lr = std::numeric_limits<double>::infinity();
      const RgbImage* best_warp = nullptr;
      RgbImage best_warp_store;
      for (const Candidate& cand : perturbation_grid(dir.omega, cfg)) {
        const auto [w2, m2] = warp_image(*dir.target_depth, *dir.source, cand.omega);
        if (m2.count_true() == 0) continue;
        const double lr = reprojection_loss(*dir.target, w2, m2, cfg.match_means);
        if (lr < row.best_wrong_lr) {
          row.best_wrong_lr = lr;
          row.best_wrong_pose = cand.desc;
          if (!dump_dir.empty() && pi < static_cast<std::size_t>(cfg.dump_pairs)) {
            best_warp_store = w2;
            best_warp = &best_warp_store;
          }
        }
      }
      row.wrong_beats_gt = row.best_wrong_lr < row.gt_lr;
      beaten += row.wrong_beats_gt ? 1 : 0;

      if (!dump_dir.empty() && pi < static_cast<std::size_t>(cfg.dump_pairs)) {
        const std::string base = dump_dir + "/" + row.image_id;
        write_ppm(base + "_target.ppm", *dir.target);
        write_ppm(base + "_source.ppm", *dir.source);
        write_ppm(base + "_warp_gt.ppm", warped);
        write_ppm(base + "_err_gt.ppm", error_map(*dir.target, warped, mask));
        if (best_warp) {
          write_ppm(base + "_warp_best_wrong.ppm", *best_warp);
          write_ppm(base + "_err_best_wrong.ppm", error_map(*dir.target, *best_warp, mask));
        }
      }
      summary.rows.push_back(std::move(row));
    }
  }
  summary.n_images = static_cast<int>(summary.rows.size());
  summary.fraction_wrong_beats_gt =
      summary.n_images > 0 ? static_cast<double>(beaten) / summary.n_images : 0.0;
  return summary;
}

}  // namespace colonpose
