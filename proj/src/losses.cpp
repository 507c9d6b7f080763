#include "colonpose/losses.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace colonpose {

namespace {

void check_shapes(int w1, int h1, int w2, int h2, int wm, int hm, const char* who) {
  if (w1 != w2 || h1 != h2 || w1 != wm || h1 != hm)
    throw NumericError(std::string(who) + ": shape mismatch");
}

// Deterministic masked reduction: per-row partials summed in row order, so
// the result does not depend on the thread count.
template <typename PixelFn>
std::pair<double, std::size_t> masked_row_sum(int width, int height, Exec exec, PixelFn&& fn) {
  std::vector<double> partial(height, 0.0);
  std::vector<std::size_t> counts(height, 0);
  auto row = [&](int y) {
    double acc = 0;
    std::size_t n = 0;
    for (int x = 0; x < width; ++x) {
      double v;
      if (fn(y, x, v)) {
        acc += v;
        ++n;
      }
    }
    partial[y] = acc;
    counts[y] = n;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y) row(y);
  } else {
    for (int y = 0; y < height; ++y) row(y);
  }
  double total = 0;
  std::size_t n = 0;
  for (int y = 0; y < height; ++y) {
    total += partial[y];
    n += counts[y];
  }
  return {total, n};
}

}  // namespace

std::string LossReport::csv_header() {
  return "pair_id,l_r,l_s,l_g,l_pose,l_class,total,valid_fraction";
}

std::string LossReport::csv_row(const std::string& pair_id) const {
  std::ostringstream ss;
  ss.precision(12);
  ss << pair_id << ',' << l_r << ',' << l_s << ',' << l_g << ',' << l_pose << ',' << l_class
     << ',' << total << ',' << valid_fraction;
  return ss.str();
}

double reprojection_loss(const RgbImage& target, const RgbImage& warped, const ValidityMask& mask,
                         bool match_means, Exec exec) {
  check_shapes(target.width, target.height, warped.width, warped.height, mask.width, mask.height,
               "reprojection_loss");
  double scale = 1.0;
  if (match_means) {
    auto [sum_t, n_t] = masked_row_sum(target.width, target.height, exec, [&](int y, int x, double& v) {
      if (!mask.at(y, x)) return false;
      v = target.at(y, x, 0) + target.at(y, x, 1) + target.at(y, x, 2);
      return true;
    });
    auto [sum_w, n_w] = masked_row_sum(target.width, target.height, exec, [&](int y, int x, double& v) {
      if (!mask.at(y, x)) return false;
      v = warped.at(y, x, 0) + warped.at(y, x, 1) + warped.at(y, x, 2);
      return true;
    });
    if (n_t == 0) throw NumericError("reprojection_loss: empty mask (no overlap)");
    if (sum_w > 0) scale = sum_t / sum_w;
    (void)n_w;
  }
  auto [sum, n] = masked_row_sum(target.width, target.height, exec, [&](int y, int x, double& v) {
    if (!mask.at(y, x)) return false;
    v = 0;
    for (int c = 0; c < 3; ++c) v += std::abs(target.at(y, x, c) - scale * warped.at(y, x, c));
    return true;
  });
  if (n == 0) throw NumericError("reprojection_loss: empty mask (no overlap)");
  return sum / (3.0 * static_cast<double>(n));
}

double ssim_loss(const RgbImage& target, const RgbImage& warped, const ValidityMask& mask,
                 Exec exec) {
  check_shapes(target.width, target.height, warped.width, warped.height, mask.width, mask.height,
               "ssim_loss");
  if (target.width < kSsimWindow || target.height < kSsimWindow)
    throw NumericError("ssim_loss: image smaller than the SSIM window");
  const int r = kSsimWindow / 2;
  const double npix = kSsimWindow * kSsimWindow;

  auto [sum, n] = masked_row_sum(target.width, target.height, exec, [&](int cy, int cx, double& v) {
    if (cy < r || cy >= target.height - r || cx < r || cx >= target.width - r) return false;
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx)
        if (!mask.at(cy + dy, cx + dx)) return false;
    double loss = 0;
    for (int c = 0; c < 3; ++c) {
      double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const double a = target.at(cy + dy, cx + dx, c);
          const double b = warped.at(cy + dy, cx + dx, c);
          s1 += a;
          s2 += b;
          s11 += a * a;
          s22 += b * b;
          s12 += a * b;
        }
      const double mu1 = s1 / npix, mu2 = s2 / npix;
      const double var1 = s11 / npix - mu1 * mu1;
      const double var2 = s22 / npix - mu2 * mu2;
      const double cov = s12 / npix - mu1 * mu2;
      const double ssim = ((2 * mu1 * mu2 + kSsimC1) * (2 * cov + kSsimC2)) /
                          ((mu1 * mu1 + mu2 * mu2 + kSsimC1) * (var1 + var2 + kSsimC2));
      loss += (1.0 - ssim) / 2.0;
    }
    v = loss / 3.0;
    return true;
  });
  if (n == 0) throw NumericError("ssim_loss: no valid window");
  return sum / static_cast<double>(n);
}

double geometric_consistency_loss(const DepthMap& d_warped, const DepthMap& d_projected,
                                  const ValidityMask& mask, Exec exec) {
  check_shapes(d_warped.width, d_warped.height, d_projected.width, d_projected.height, mask.width,
               mask.height, "geometric_consistency_loss");
  auto [sum, n] = masked_row_sum(d_warped.width, d_warped.height, exec, [&](int y, int x, double& v) {
    if (!mask.at(y, x)) return false;
    const double a = d_warped.at(y, x), b = d_projected.at(y, x);
    v = std::abs(a - b) / (a + b);
    return true;
  });
  if (n == 0) throw NumericError("geometric_consistency_loss: empty mask (no overlap)");
  return sum / static_cast<double>(n);
}

double pose_loss(const RelPose6& pred, const RelPose6& gt, const LossWeights& w) {
  const double et = (pred.translation - gt.translation).lpNorm<1>();
  const double er = (pred.logq - gt.logq).lpNorm<1>();
  return et * std::exp(-w.beta) + w.beta + er * std::exp(-w.gamma) + w.gamma;
}

PoseLossGrad pose_loss_grad(const RelPose6& pred, const RelPose6& gt, const LossWeights& w) {
  PoseLossGrad g;
  const Eigen::Vector3d dt = pred.translation - gt.translation;
  const Eigen::Vector3d dr = pred.logq - gt.logq;
  const double et = dt.lpNorm<1>();
  const double er = dr.lpNorm<1>();
  const double eb = std::exp(-w.beta), eg = std::exp(-w.gamma);
  g.value = et * eb + w.beta + er * eg + w.gamma;
  for (int i = 0; i < 3; ++i) {
    g.d_pred[i] = (dt[i] > 0 ? 1.0 : (dt[i] < 0 ? -1.0 : 0.0)) * eb;
    g.d_pred[3 + i] = (dr[i] > 0 ? 1.0 : (dr[i] < 0 ? -1.0 : 0.0)) * eg;
  }
  g.d_beta = -et * eb + 1.0;
  g.d_gamma = -er * eg + 1.0;
  return g;
}

double class_loss(const std::array<double, 2>& pred_probs, int label) {
  const double p = std::max(pred_probs[static_cast<std::size_t>(label)], 1e-12);
  return -std::log(p);
}

double supervised_target(double pose_l, double class_l, const LossWeights& w) {
  return pose_l + w.w_c * class_l;
}

}  // namespace colonpose
