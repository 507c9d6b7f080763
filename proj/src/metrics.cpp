#include "colonpose/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace colonpose {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) throw NumericError("median of empty list");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void check_equal_lengths(std::size_t a, std::size_t b, const char* who) {
  if (a != b) throw NumericError(std::string(who) + ": length mismatch");
}

std::vector<Pose> relatives_of(const std::vector<Pose>& poses) {
  std::vector<Pose> rel;
  rel.reserve(poses.size() > 0 ? poses.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < poses.size(); ++i)
    rel.push_back(relative(poses[i], poses[i + 1]));
  return rel;
}

}  // namespace

std::string MetricReport::csv_header() {
  return "trajectory,direction,ate_cm,rte_mm,rot_deg,acc_pct,scale,n_steps";
}

std::string MetricReport::csv_row(const std::string& trajectory) const {
  std::ostringstream ss;
  ss.precision(12);
  ss << trajectory << ',' << direction << ',' << ate << ',' << rte * 10.0 << ',' << rot << ','
     << direction_accuracy * 100.0 << ',' << scale << ',' << n_steps;
  return ss.str();
}

Histogram Histogram::with_uniform_bins(double lo, double hi, int n_bins) {
  if (!(hi > lo) || n_bins <= 0) throw ConfigError("histogram: bad bin range");
  Histogram h;
  h.bin_edges.resize(n_bins + 1);
  for (int i = 0; i <= n_bins; ++i)
    h.bin_edges[i] = lo + (hi - lo) * static_cast<double>(i) / n_bins;
  h.counts.assign(n_bins, 0);
  return h;
}

void Histogram::add(double value) {
  const double lo = bin_edges.front(), hi = bin_edges.back();
  const int n = static_cast<int>(counts.size());
  int bin = static_cast<int>(std::floor((value - lo) / (hi - lo) * n));
  bin = std::clamp(bin, 0, n - 1);
  ++counts[static_cast<std::size_t>(bin)];
}

double scale_factor(const Trajectory& gt, const Trajectory& pred) {
  check_equal_lengths(gt.size(), pred.size(), "scale_factor");
  if (gt.size() < 2) throw NumericError("scale_factor: need at least two poses");
  double num = 0, den = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    num += gt.poses[i].translation.dot(pred.poses[i].translation);
    den += pred.poses[i].translation.squaredNorm();
  }
  if (den == 0) throw NumericError("scale_factor: predicted trajectory has zero translations");
  return num / den;
}

double rte(const std::vector<Pose>& gt_rel, const std::vector<Pose>& pred_rel) {
  check_equal_lengths(gt_rel.size(), pred_rel.size(), "rte");
  std::vector<double> errs;
  errs.reserve(gt_rel.size());
  for (std::size_t i = 0; i < gt_rel.size(); ++i)
    errs.push_back(relative(gt_rel[i], pred_rel[i]).translation.norm());
  return median(std::move(errs));
}

double ate(const Trajectory& gt, const Trajectory& pred_scaled) {
  check_equal_lengths(gt.size(), pred_scaled.size(), "ate");
  std::vector<double> errs;
  errs.reserve(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i)
    errs.push_back((gt.poses[i].translation - pred_scaled.poses[i].translation).norm());
  return median(std::move(errs));
}

double rot(const std::vector<Pose>& gt_rel, const std::vector<Pose>& pred_rel) {
  check_equal_lengths(gt_rel.size(), pred_rel.size(), "rot");
  std::vector<double> errs;
  errs.reserve(gt_rel.size());
  for (std::size_t i = 0; i < gt_rel.size(); ++i)
    errs.push_back(rotation_angle_deg(relative(gt_rel[i], pred_rel[i])));
  return median(std::move(errs));
}

double direction_accuracy(const std::vector<Pose>& gt_rel, const std::vector<Pose>& pred_rel) {
  check_equal_lengths(gt_rel.size(), pred_rel.size(), "direction_accuracy");
  int considered = 0, correct = 0;
  for (std::size_t i = 0; i < gt_rel.size(); ++i) {
    const double gz = gt_rel[i].translation.z();
    if (std::abs(gz) < 1e-9) continue;
    ++considered;
    const double pz = pred_rel[i].translation.z();
    if ((gz > 0 && pz > 0) || (gz < 0 && pz < 0)) ++correct;
  }
  if (considered == 0) throw NumericError("direction_accuracy: no steps with |t_z| >= 1e-9");
  return static_cast<double>(correct) / considered;
}

long manhattan_histogram_loss(const Histogram& a, const Histogram& b) {
  if (a.bin_edges != b.bin_edges) throw NumericError("manhattan_histogram_loss: bin edge mismatch");
  long sum = 0;
  for (std::size_t i = 0; i < a.counts.size(); ++i) sum += std::labs(a.counts[i] - b.counts[i]);
  return sum;
}

namespace {

// One direction of evaluate_run: metrics averaged over the k phase offsets.
MetricReport evaluate_direction(const std::vector<Pose>& gt, const std::vector<Pose>& pred,
                                const EvaluateOptions& opt, const std::string& name) {
  MetricReport rep;
  rep.direction = name;
  double sum_ate = 0, sum_rte = 0, sum_rot = 0, sum_acc = 0, sum_scale = 0;
  int phases = 0;
  for (int phase = 0; phase < opt.k; ++phase) {
    Trajectory gt_sub, pred_sub;
    for (std::size_t i = static_cast<std::size_t>(phase); i < gt.size();
         i += static_cast<std::size_t>(opt.k)) {
      gt_sub.poses.push_back(gt[i]);
      gt_sub.frame_indices.push_back(static_cast<std::int64_t>(i));
      pred_sub.poses.push_back(pred[i]);
      pred_sub.frame_indices.push_back(static_cast<std::int64_t>(i));
    }
    if (gt_sub.size() < 2) continue;
    const std::vector<Pose> gt_rel = relatives_of(gt_sub.poses);
    const std::vector<Pose> pred_rel = relatives_of(pred_sub.poses);

    double s = 1.0;
    Trajectory pred_eval = pred_sub;
    if (!opt.supervised_scale) {
      s = scale_factor(gt_sub, pred_sub);
      for (Pose& p : pred_eval.poses) p.translation *= s;
    }
    sum_ate += ate(gt_sub, pred_eval);
    sum_rte += rte(gt_rel, pred_rel);
    sum_rot += rot(gt_rel, pred_rel);
    sum_acc += direction_accuracy(gt_rel, pred_rel);
    sum_scale += s;
    rep.n_steps += static_cast<int>(gt_rel.size());
    ++phases;
  }
  if (phases == 0) throw NumericError("evaluate_run: trajectory too short for gap k");
  rep.ate = sum_ate / phases;
  rep.rte = sum_rte / phases;
  rep.rot = sum_rot / phases;
  rep.direction_accuracy = sum_acc / phases;
  rep.scale = sum_scale / phases;
  return rep;
}

}  // namespace

EvaluateResult evaluate_run(const std::vector<Pose>& gt, const std::vector<Pose>& pred,
                            const std::vector<Pose>& pred_backward, const EvaluateOptions& opt) {
  check_equal_lengths(gt.size(), pred.size(), "evaluate_run");
  if (opt.k <= 0) throw ConfigError("evaluate_run: k must be positive");

  EvaluateResult res;
  res.forward = evaluate_direction(gt, pred, opt, "forward");

  std::vector<Pose> gt_bwd(gt.rbegin(), gt.rend());
  std::vector<Pose> pred_bwd;
  if (!pred_backward.empty()) {
    check_equal_lengths(gt.size(), pred_backward.size(), "evaluate_run (backward)");
    pred_bwd = pred_backward;
  } else {
    pred_bwd.assign(pred.rbegin(), pred.rend());
  }
  res.backward = evaluate_direction(gt_bwd, pred_bwd, opt, "backward");

  res.hist_gt_fwd = Histogram::with_uniform_bins(opt.hist_lo, opt.hist_hi, opt.hist_bins);
  res.hist_pred_fwd = Histogram::with_uniform_bins(opt.hist_lo, opt.hist_hi, opt.hist_bins);
  for (std::size_t i = 0; i + static_cast<std::size_t>(opt.k) < gt.size(); ++i) {
    res.hist_gt_fwd.add(relative(gt[i], gt[i + opt.k]).translation.z());
    res.hist_pred_fwd.add(relative(pred[i], pred[i + opt.k]).translation.z());
  }
  return res;
}

}  // namespace colonpose
