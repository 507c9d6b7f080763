#pragma once

#include <string>
#include <vector>

#include "colonpose/pose.hpp"

namespace colonpose {

struct MetricReport {
  double ate = 0;                  // cm
  double rte = 0;                  // cm
  double rot = 0;                  // degrees
  double direction_accuracy = 0;   // fraction
  double scale = 1;
  int n_steps = 0;
  std::string direction;  // "forward" | "backward"

  // Table-style units: ATE cm, RTE mm, ROT deg, accuracy percent.
  static std::string csv_header();
  std::string csv_row(const std::string& trajectory) const;
};

struct Histogram {
  std::vector<double> bin_edges;  // strictly increasing, counts has size-1
  std::vector<long> counts;

  static Histogram with_uniform_bins(double lo, double hi, int n_bins);
  void add(double value);  // values outside [lo, hi) are clipped to end bins
};

// Least-squares scale over absolute translations,
// s = sum(t_gt . t_pred) / sum(t_pred . t_pred). Applied to predicted
// translations only; never a rotational or translational alignment.
double scale_factor(const Trajectory& gt, const Trajectory& pred);

// Median over steps of |trans(rel_gt^-1 rel_pred)|_2, cm.
double rte(const std::vector<Pose>& gt_rel, const std::vector<Pose>& pred_rel);

// Median over frames of |trans(gt) - trans(pred)|_2, cm. pred is expected
// to be already scaled.
double ate(const Trajectory& gt, const Trajectory& pred_scaled);

// Median over steps of the geodesic angle of rel_gt^-1 rel_pred, degrees.
double rot(const std::vector<Pose>& gt_rel, const std::vector<Pose>& pred_rel);

// Fraction of steps whose sign(t_z) matches; ground-truth steps with
// |t_z| < 1e-9 are excluded from the denominator.
double direction_accuracy(const std::vector<Pose>& gt_rel, const std::vector<Pose>& pred_rel);

// sum_i |counts_a(i) - counts_b(i)|; requires identical bin edges.
long manhattan_histogram_loss(const Histogram& a, const Histogram& b);

struct EvaluateOptions {
  int k = 5;
  // When true (supervised setting), predictions are evaluated at their
  // absolute scale; otherwise the least-squares scale is applied per
  // direction before the ATE.
  bool supervised_scale = true;
  // z-translation histogram over [-1.5, 1.5] cm, 50 bins
  double hist_lo = -1.5, hist_hi = 1.5;
  int hist_bins = 50;
};

struct EvaluateResult {
  MetricReport forward;
  MetricReport backward;
  Histogram hist_gt_fwd, hist_pred_fwd;  // t_z histograms at gap k (forward)
};

// Metrics averaged over the k phase-offset sub-trajectories, evaluated
// forward and backward (backward reverses pair order and inverts the
// relative poses). When pred_backward is non-empty it supplies the
// backward absolute poses; otherwise they are derived from `pred`.
EvaluateResult evaluate_run(const std::vector<Pose>& gt, const std::vector<Pose>& pred,
                            const std::vector<Pose>& pred_backward, const EvaluateOptions& opt);

}  // namespace colonpose
