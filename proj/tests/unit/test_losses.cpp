#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "colonpose/losses.hpp"
#include "oracles.hpp"

using namespace colonpose;

namespace {

RgbImage constant_image(int w, int h, double v) {
  RgbImage img(w, h);
  std::fill(img.data.begin(), img.data.end(), v);
  return img;
}

}  // namespace

TEST_CASE("reprojection loss basics") {
  const RgbImage a = constant_image(8, 8, 0.4);
  const ValidityMask all(8, 8, true);
  CHECK(reprojection_loss(a, a, all) == 0.0);

  const RgbImage b = constant_image(8, 8, 0.5);
  CHECK(reprojection_loss(a, b, all) == doctest::Approx(0.1).epsilon(1e-12));

  // 2x1 image with per-channel diffs 0.2 and 0.4 -> mean 0.3
  RgbImage t(2, 1), w(2, 1);
  for (int c = 0; c < 3; ++c) {
    t.at(0, 0, c) = 0.5;
    w.at(0, 0, c) = 0.7;
    t.at(0, 1, c) = 0.1;
    w.at(0, 1, c) = 0.5;
  }
  CHECK(reprojection_loss(t, w, ValidityMask(2, 1, true)) == doctest::Approx(0.3).epsilon(1e-12));

  const ValidityMask none(8, 8, false);
  CHECK_THROWS_AS(reprojection_loss(a, b, none), NumericError);
}

TEST_CASE("reprojection loss with mean matching removes a global gain") {
  Rng rng(4);
  RgbImage target(8, 8);
  for (double& v : target.data) v = rng.uniform(0.2, 0.9);
  RgbImage warped = target;
  for (double& v : warped.data) v *= 0.5;
  const ValidityMask all(8, 8, true);
  CHECK(reprojection_loss(target, warped, all) > 0.05);
  CHECK(reprojection_loss(target, warped, all, /*match_means=*/true) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("ssim loss on constant images follows the closed form") {
  const RgbImage a = constant_image(16, 16, 0.5);
  const ValidityMask all(16, 16, true);
  CHECK(ssim_loss(a, a, all) == doctest::Approx(0.0).epsilon(1e-12));

  const RgbImage zeros = constant_image(16, 16, 0.0);
  const RgbImage ones = constant_image(16, 16, 1.0);
  // constant patches: ssim = (2*0*1 + C1)(2*0 + C2) / ((0+1+C1)(0+0+C2))
  const double ssim = (kSsimC1 * kSsimC2) / ((1.0 + kSsimC1) * kSsimC2);
  const double expect = (1.0 - ssim) / 2.0;
  CHECK(ssim_loss(zeros, ones, all) == doctest::Approx(expect).epsilon(1e-12));

  const RgbImage tiny = constant_image(4, 4, 0.5);
  CHECK_THROWS_AS(ssim_loss(tiny, tiny, ValidityMask(4, 4, true)), NumericError);
}

TEST_CASE("geometric consistency loss") {
  DepthMap a(4, 4), b(4, 4);
  const ValidityMask all(4, 4, true);
  std::fill(a.data.begin(), a.data.end(), 7.0);
  std::fill(b.data.begin(), b.data.end(), 7.0);
  CHECK(geometric_consistency_loss(a, b, all) == 0.0);

  std::fill(a.data.begin(), a.data.end(), 3.0);
  std::fill(b.data.begin(), b.data.end(), 1.0);
  CHECK(geometric_consistency_loss(a, b, all) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(geometric_consistency_loss(a, b, ValidityMask(4, 4, false)), NumericError);
}

TEST_CASE("pixelwise losses are permutation invariant") {
  Rng rng(6);
  const int w = 6, h = 5;
  RgbImage t(w, h), wimg(w, h);
  DepthMap d1(w, h), d2(w, h);
  ValidityMask m(w, h);
  for (double& v : t.data) v = rng.uniform01();
  for (double& v : wimg.data) v = rng.uniform01();
  for (double& v : d1.data) v = rng.uniform(1, 9);
  for (double& v : d2.data) v = rng.uniform(1, 9);
  for (auto& v : m.data) v = rng.uniform01() < 0.8 ? 1 : 0;

  std::vector<int> perm(static_cast<std::size_t>(w) * h);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);

  RgbImage tp(w, h), wp(w, h);
  DepthMap d1p(w, h), d2p(w, h);
  ValidityMask mp(w, h);
  for (int i = 0; i < w * h; ++i) {
    const int j = perm[static_cast<std::size_t>(i)];
    for (int c = 0; c < 3; ++c) {
      tp.data[static_cast<std::size_t>(i) * 3 + c] = t.data[static_cast<std::size_t>(j) * 3 + c];
      wp.data[static_cast<std::size_t>(i) * 3 + c] = wimg.data[static_cast<std::size_t>(j) * 3 + c];
    }
    d1p.data[static_cast<std::size_t>(i)] = d1.data[static_cast<std::size_t>(j)];
    d2p.data[static_cast<std::size_t>(i)] = d2.data[static_cast<std::size_t>(j)];
    mp.data[static_cast<std::size_t>(i)] = m.data[static_cast<std::size_t>(j)];
  }
  CHECK(reprojection_loss(t, wimg, m) == doctest::Approx(reprojection_loss(tp, wp, mp)).epsilon(1e-12));
  CHECK(geometric_consistency_loss(d1, d2, m) ==
        doctest::Approx(geometric_consistency_loss(d1p, d2p, mp)).epsilon(1e-12));
}

TEST_CASE("pose loss values") {
  RelPose6 gt;
  gt.translation = {1, 2, 3};
  gt.logq = {0.1, -0.2, 0.3};

  LossWeights w;
  w.beta = 0;
  w.gamma = -3;
  CHECK(pose_loss(gt, gt, w) == doctest::Approx(-3.0).epsilon(1e-12));

  w.gamma = 0;
  CHECK(pose_loss(gt, gt, w) == 0.0);

  RelPose6 pred = gt;
  pred.translation.x() += 1.0;  // L1 translation error 1 at beta = gamma = 0
  CHECK(pose_loss(pred, gt, w) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pose loss gradient matches finite differences") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    RelPose6 gt, pred;
    for (int i = 0; i < 3; ++i) {
      gt.translation[i] = rng.uniform(-2, 2);
      gt.logq[i] = rng.uniform(-1, 1);
      // keep differences away from the L1 kink
      pred.translation[i] = gt.translation[i] + (rng.uniform01() < 0.5 ? -1 : 1) * rng.uniform(0.05, 1.0);
      pred.logq[i] = gt.logq[i] + (rng.uniform01() < 0.5 ? -1 : 1) * rng.uniform(0.05, 0.5);
    }
    LossWeights w;
    w.beta = rng.uniform(-1, 1);
    w.gamma = rng.uniform(-3, 1);

    const PoseLossGrad g = pose_loss_grad(pred, gt, w);
    CHECK(g.value == doctest::Approx(pose_loss(pred, gt, w)).epsilon(1e-12));

    double params[8];
    for (int i = 0; i < 3; ++i) {
      params[i] = pred.translation[i];
      params[3 + i] = pred.logq[i];
    }
    params[6] = w.beta;
    params[7] = w.gamma;
    auto eval = [&]() {
      RelPose6 p;
      p.translation = {params[0], params[1], params[2]};
      p.logq = {params[3], params[4], params[5]};
      LossWeights lw;
      lw.beta = params[6];
      lw.gamma = params[7];
      return pose_loss(p, gt, lw);
    };
    const std::vector<double> fd = oracle::finite_diff(eval, params, 8);
    std::vector<double> analytic(8);
    for (int i = 0; i < 6; ++i) analytic[static_cast<std::size_t>(i)] = g.d_pred[i];
    analytic[6] = g.d_beta;
    analytic[7] = g.d_gamma;
    CHECK(oracle::grad_rel_error(analytic, fd) < 1e-4);
  }
}

TEST_CASE("pose loss bounds and monotonicity") {
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    RelPose6 gt, pred;
    for (int i = 0; i < 3; ++i) {
      gt.translation[i] = rng.uniform(-2, 2);
      gt.logq[i] = rng.uniform(-1, 1);
      pred.translation[i] = gt.translation[i] + rng.uniform(0.01, 1.0);
      pred.logq[i] = gt.logq[i] + rng.uniform(-0.5, 0.5);
    }
    LossWeights w;
    w.beta = rng.uniform(-1, 1);
    w.gamma = rng.uniform(-3, 1);
    CHECK(pose_loss(pred, gt, w) >= w.beta + w.gamma);

    RelPose6 scaled = pred;
    scaled.translation = gt.translation + 1.7 * (pred.translation - gt.translation);
    CHECK(pose_loss(scaled, gt, w) > pose_loss(pred, gt, w));
  }
}

TEST_CASE("class loss and the supervised target") {
  CHECK(class_loss({1.0, 0.0}, 0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(class_loss({0.5, 0.5}, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(class_loss({0.5, 0.5}, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(class_loss({0.9, 0.1}, 1) == doctest::Approx(-std::log(0.1)).epsilon(1e-12));

  LossWeights w;
  w.w_c = 0.1;
  CHECK(supervised_target(1.0, 2.0, w) == doctest::Approx(1.2).epsilon(1e-12));
  w.w_c = 0.0;
  CHECK(supervised_target(3.5, 99.0, w) == 3.5);
  w.w_c = 0.1;
  CHECK(supervised_target(-3.0, std::log(2.0), w) ==
        doctest::Approx(-3.0 + 0.1 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("loss report csv row") {
  LossReport r;
  r.l_r = 0.25;
  r.valid_fraction = 0.5;
  const std::string row = r.csv_row("p1");
  CHECK(row.substr(0, 3) == "p1,");
  CHECK(LossReport::csv_header().substr(0, 7) == "pair_id");
}

TEST_CASE("losses agree between serial and parallel execution") {
  Rng rng(12);
  RgbImage t(32, 32), w(32, 32);
  DepthMap d1(32, 32), d2(32, 32);
  ValidityMask m(32, 32);
  for (double& v : t.data) v = rng.uniform01();
  for (double& v : w.data) v = rng.uniform01();
  for (double& v : d1.data) v = rng.uniform(1, 9);
  for (double& v : d2.data) v = rng.uniform(1, 9);
  for (auto& v : m.data) v = rng.uniform01() < 0.9 ? 1 : 0;

  CHECK(reprojection_loss(t, w, m, false, Exec::serial) ==
        reprojection_loss(t, w, m, false, Exec::parallel));
  CHECK(ssim_loss(t, w, m, Exec::serial) == ssim_loss(t, w, m, Exec::parallel));
  CHECK(geometric_consistency_loss(d1, d2, m, Exec::serial) ==
        geometric_consistency_loss(d1, d2, m, Exec::parallel));
}
