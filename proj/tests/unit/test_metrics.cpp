#include <doctest.h>

#include "colonpose/metrics.hpp"
#include "oracles.hpp"

using namespace colonpose;

namespace {

Trajectory line_trajectory(int n, double step_z) {
  Trajectory t;
  for (int i = 0; i < n; ++i) {
    t.poses.push_back(Pose::translate(0, 0, step_z * i));
    t.frame_indices.push_back(i);
  }
  return t;
}

std::vector<Pose> relatives_of(const std::vector<Pose>& poses) {
  std::vector<Pose> rel;
  for (std::size_t i = 0; i + 1 < poses.size(); ++i)
    rel.push_back(relative(poses[i], poses[i + 1]));
  return rel;
}

}  // namespace

TEST_CASE("scale factor: identity, half-scale, orthogonal") {
  const Trajectory gt = line_trajectory(8, 1.0);
  CHECK(scale_factor(gt, gt) == doctest::Approx(1.0).epsilon(1e-12));

  Trajectory half = gt;
  for (Pose& p : half.poses) p.translation *= 0.5;
  CHECK(scale_factor(gt, half) == doctest::Approx(2.0).epsilon(1e-12));

  Trajectory ortho = gt;
  for (std::size_t i = 0; i < ortho.poses.size(); ++i)
    ortho.poses[i].translation = Eigen::Vector3d(static_cast<double>(i), 0, 0);
  CHECK(scale_factor(gt, ortho) == doctest::Approx(0.0).epsilon(1e-12));

  Trajectory zeros = gt;
  for (Pose& p : zeros.poses) p.translation.setZero();
  CHECK_THROWS_AS(scale_factor(gt, zeros), NumericError);
}

TEST_CASE("rte: exact values") {
  const Trajectory gt = line_trajectory(8, 1.0);
  const auto gt_rel = relatives_of(gt.poses);
  CHECK(rte(gt_rel, gt_rel) == 0.0);

  // post-composing a 1 mm z step makes every relative error exactly 0.1 cm
  std::vector<Pose> pred_rel;
  for (const Pose& r : gt_rel) pred_rel.push_back(compose(r, Pose::translate(0, 0, 0.1)));
  CHECK(rte(gt_rel, pred_rel) == doctest::Approx(0.1).epsilon(1e-12));

  // median of (0.1, 0.2, 0.9)
  std::vector<Pose> g3(3, Pose::identity());
  std::vector<Pose> p3 = {Pose::translate(0.1, 0, 0), Pose::translate(0, 0.2, 0),
                          Pose::translate(0, 0, 0.9)};
  CHECK(rte(g3, p3) == doctest::Approx(0.2).epsilon(1e-12));

  CHECK_THROWS_AS(rte(gt_rel, p3), NumericError);
}

TEST_CASE("ate: offsets and the linear-drift median") {
  const Trajectory gt = line_trajectory(11, 1.0);
  CHECK(ate(gt, gt) == 0.0);

  Trajectory off = gt;
  for (Pose& p : off.poses) p.translation.x() += 1.0;
  CHECK(ate(gt, off) == doctest::Approx(1.0).epsilon(1e-12));

  // drift growing linearly 0..1 over 11 frames: median error 0.5
  Trajectory drift = gt;
  for (int i = 0; i < 11; ++i) drift.poses[static_cast<std::size_t>(i)].translation.x() += 0.1 * i;
  CHECK(ate(gt, drift) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("rot: exact values") {
  const Trajectory gt = line_trajectory(6, 1.0);
  const auto gt_rel = relatives_of(gt.poses);
  CHECK(rot(gt_rel, gt_rel) == 0.0);

  std::vector<Pose> pred_rel;
  for (const Pose& r : gt_rel) pred_rel.push_back(compose(r, Pose::rot_z_deg(2)));
  CHECK(rot(gt_rel, pred_rel) == doctest::Approx(2.0).epsilon(1e-9));

  std::vector<Pose> g3(3, Pose::identity());
  std::vector<Pose> p3 = {Pose::rot_z_deg(1), Pose::rot_x_deg(3), Pose::rot_z_deg(5)};
  CHECK(rot(g3, p3) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("direction accuracy") {
  std::vector<Pose> gt_rel = {Pose::translate(0, 0, 1), Pose::translate(0, 0, -1),
                              Pose::translate(0, 0, 1), Pose::translate(0, 0, -1)};
  CHECK(direction_accuracy(gt_rel, gt_rel) == 1.0);

  std::vector<Pose> flipped;
  for (const Pose& r : gt_rel) {
    Pose p = r;
    p.translation.z() = -p.translation.z();
    flipped.push_back(p);
  }
  CHECK(direction_accuracy(gt_rel, flipped) == 0.0);

  std::vector<Pose> three_of_four = gt_rel;
  three_of_four[3].translation.z() = 1;  // one wrong sign
  CHECK(direction_accuracy(gt_rel, three_of_four) == doctest::Approx(0.75).epsilon(1e-12));

  // |t_z| < 1e-9 in the ground truth leaves the denominator
  std::vector<Pose> with_zero = gt_rel;
  with_zero[0].translation.z() = 0;
  CHECK(direction_accuracy(with_zero, gt_rel) == 1.0);

  std::vector<Pose> all_zero(3, Pose::identity());
  CHECK_THROWS_AS(direction_accuracy(all_zero, all_zero), NumericError);

  // invariance to positive rescaling of the prediction
  std::vector<Pose> scaled;
  for (const Pose& r : gt_rel) {
    Pose p = r;
    p.translation *= 17.3;
    scaled.push_back(p);
  }
  CHECK(direction_accuracy(gt_rel, scaled) == 1.0);
}

TEST_CASE("manhattan histogram loss") {
  Histogram a = Histogram::with_uniform_bins(-1, 1, 2);
  Histogram b = a;
  CHECK(manhattan_histogram_loss(a, b) == 0);

  a.counts = {10, 0};
  b.counts = {0, 10};
  CHECK(manhattan_histogram_loss(a, b) == 20);

  Histogram c = Histogram::with_uniform_bins(-2, 1, 2);
  CHECK_THROWS_AS(manhattan_histogram_loss(a, c), NumericError);

  Histogram h = Histogram::with_uniform_bins(0, 1, 4);
  h.add(0.1);
  h.add(0.6);
  h.add(0.6);
  h.add(99.0);  // clipped into the last bin
  CHECK(h.counts == std::vector<long>{1, 0, 2, 1});
}

TEST_CASE("metric invariances") {
  Rng rng(15);
  std::vector<Pose> gt_abs, pred_abs;
  Pose g = Pose::identity(), p = Pose::identity();
  for (int i = 0; i < 24; ++i) {
    gt_abs.push_back(g);
    pred_abs.push_back(p);
    const Pose step = oracle::random_pose(rng, 0.1, 0.0);
    Pose noisy = step;
    noisy.translation += rng.in_ball(0.02);
    g = compose(g, compose(step, Pose::translate(0, 0, 0.4)));
    p = compose(p, compose(noisy, Pose::translate(0, 0, 0.4)));
  }
  const auto gt_rel = relatives_of(gt_abs), pred_rel = relatives_of(pred_abs);

  // RTE and ROT are invariant to a global rigid pre-transformation
  const Pose rig = oracle::random_pose(rng);
  std::vector<Pose> gt2, pred2;
  for (const Pose& q : gt_abs) gt2.push_back(compose(rig, q));
  for (const Pose& q : pred_abs) pred2.push_back(compose(rig, q));
  const auto gt2_rel = relatives_of(gt2), pred2_rel = relatives_of(pred2);
  CHECK(rte(gt_rel, pred_rel) == doctest::Approx(rte(gt2_rel, pred2_rel)).epsilon(1e-9));
  CHECK(rot(gt_rel, pred_rel) == doctest::Approx(rot(gt2_rel, pred2_rel)).epsilon(1e-9));

  // optimal scaling never hurts the ATE when the correlation is positive
  Trajectory tg, tp;
  tg.poses = gt_abs;
  tp.poses = pred_abs;
  for (int i = 0; i < 24; ++i) {
    tg.frame_indices.push_back(i);
    tp.frame_indices.push_back(i);
  }
  const double s = scale_factor(tg, tp);
  REQUIRE(s > 0);
  Trajectory tscaled = tp;
  for (Pose& q : tscaled.poses) q.translation *= s;
  CHECK(ate(tg, tscaled) <= ate(tg, tp) + 1e-12);

  // median is order-independent
  auto rev_rel = gt_rel;
  std::reverse(rev_rel.begin(), rev_rel.end());
  auto rev_pred = pred_rel;
  std::reverse(rev_pred.begin(), rev_pred.end());
  CHECK(rte(gt_rel, pred_rel) == doctest::Approx(rte(rev_rel, rev_pred)).epsilon(1e-12));
}

TEST_CASE("evaluate_run: zeros on identical files, k=1 plain case, spreadsheet oracle") {
  EvaluateOptions opt;
  opt.k = 1;

  // hand-built 6-frame case with x offsets (0, .1, 0, .2, 0, .3)
  std::vector<Pose> gt, pred;
  const double dx[6] = {0, 0.1, 0, 0.2, 0, 0.3};
  for (int i = 0; i < 6; ++i) {
    gt.push_back(Pose::translate(0, 0, i));
    pred.push_back(Pose::translate(dx[i], 0, i));
  }
  const EvaluateResult same = evaluate_run(gt, gt, {}, opt);
  CHECK(same.forward.ate == 0.0);
  CHECK(same.forward.rte == 0.0);
  CHECK(same.forward.rot == 0.0);
  CHECK(same.forward.direction_accuracy == 1.0);
  CHECK(same.forward.scale == 1.0);
  CHECK(same.backward.rte == 0.0);

  const EvaluateResult res = evaluate_run(gt, pred, {}, opt);
  // ATE: per-frame errors (0,.1,0,.2,0,.3), median (0+0.1)/2 = 0.05
  CHECK(res.forward.ate == doctest::Approx(0.05).epsilon(1e-12));
  // RTE: per-step errors (.1,.1,.2,.2,.3), median 0.2
  CHECK(res.forward.rte == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(res.forward.rot == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(res.forward.direction_accuracy == 1.0);
  CHECK(res.forward.n_steps == 5);

  CHECK_THROWS_AS(evaluate_run(gt, std::vector<Pose>(4), {}, opt), NumericError);
}

TEST_CASE("evaluate_run averages the k phase offsets and rescales on request") {
  std::vector<Pose> gt, pred;
  for (int i = 0; i < 21; ++i) {
    gt.push_back(Pose::translate(0, 0, 0.5 * i));
    pred.push_back(Pose::translate(0, 0, 0.25 * i));  // half scale
  }
  EvaluateOptions opt;
  opt.k = 5;
  opt.supervised_scale = false;
  const EvaluateResult res = evaluate_run(gt, pred, {}, opt);
  CHECK(res.forward.scale == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(res.forward.ate < 1e-9);  // rescaling recovers the trajectory exactly

  EvaluateOptions sup = opt;
  sup.supervised_scale = true;
  const EvaluateResult res2 = evaluate_run(gt, pred, {}, sup);
  CHECK(res2.forward.scale == 1.0);
  CHECK(res2.forward.ate > 0.5);

  // histogram captures the +0.5*k steps of the ground truth
  long total = 0;
  for (long c : res.hist_gt_fwd.counts) total += c;
  CHECK(total == 16);  // 21 - 5 pairs
}

TEST_CASE("metric report csv uses table units") {
  MetricReport r;
  r.ate = 1.25;
  r.rte = 0.07;  // cm -> 0.7 mm
  r.rot = 1.5;
  r.direction_accuracy = 0.99;
  r.scale = 1.0;
  r.n_steps = 100;
  r.direction = "forward";
  const std::string row = r.csv_row("t1");
  CHECK(row.find("t1,forward,1.25,0.7,1.5,99,") == 0);
}
