#pragma once

#include "colonpose/bimodal_net.hpp"
#include "colonpose/dataset.hpp"

namespace colonpose {

struct TrainConfig {
  double lr = 0.05;
  double momentum = 0.9;
  bool cosine_decay = true;  // lr annealed to zero over the run
  // beta/gamma take gentler steps than the network weights; with full-size
  // steps the uncertainty terms chase the residuals and never settle
  double uncertainty_lr_scale = 0.05;
  int batch_size = 6;
  int steps = 600;
  std::uint64_t seed = 1;
  double w_c = 0.1;
  int log_every = 20;
  int val_every = 100;
  int val_cap = 250;  // at most this many validation pairs per evaluation
  // train on both orderings of each pair so insertion/withdrawal are balanced
  bool both_directions = true;
};

struct TrainPair {
  int traj = 0;
  int frame = 0;      // pair is (frame, frame + k), swapped when reversed
  bool reversed = false;
  RelPose6 gt;
  int label = 0;  // 0: t_z < 0 (withdrawal), 1: t_z > 0 (insertion)
};

// Image pairs k frames apart with ground-truth relative poses. Frames are
// cached as 8-bit RGB and converted to tensors per batch.
struct TrainingData {
  struct TrajCache {
    std::vector<std::vector<std::uint8_t>> rgb;  // per frame, h*w*3
    std::vector<Pose> poses;
  };
  std::vector<TrajCache> trajs;
  std::vector<TrainPair> pairs;
  int input_size = 0;
  int k = 5;

  static TrainingData load(const std::vector<LoadedTrajectory>& trajectories, int k,
                           bool both_directions);

  Tensor frame_tensor(int traj, int frame) const;
  void pair_tensors(const TrainPair& p, Tensor& img1, Tensor& img2) const;
};

// Exact-zero t_z pairs take the label of the previous step (first pair
// defaults to insertion).
std::vector<TrainPair> build_pairs(const std::vector<Pose>& poses, int traj_index, int k,
                                   bool both_directions);

struct TrainResult {
  double final_loss = 0;
  double final_val_accuracy = -1;
  std::vector<std::string> curve_rows;  // step,loss,l_pose,l_class,beta,gamma,val_acc
  static std::string curve_header() { return "step,loss,l_pose,l_class,beta,gamma,val_acc"; }
};

// SGD with momentum over L = L_pose + w_c * L_class (w_c forced to 0 in the
// no-supervision mode; the class head still learns through the mixture).
// beta and gamma train jointly with the network. Deterministic given the
// seed. Throws NumericError when the loss goes non-finite.
TrainResult train(BimodalModel& model, const TrainingData& train_data,
                  const TrainingData& val_data, const TrainConfig& cfg,
                  const std::function<void(const std::string&)>& log = {});

// Fraction of pairs whose predicted direction matches the label: argmax of
// the class probabilities in bimodal modes, sign of the predicted t_z in
// unimodal mode.
double direction_accuracy_on(const BimodalModel& model, const TrainingData& data, int cap = -1);

// Per-pair relative pose predictions integrated into absolute world-from-
// camera poses. Forward chains start from the first k ground-truth poses;
// the backward list is ordered last-frame-first and starts from the last k.
struct PredictedRun {
  std::vector<Pose> forward;
  std::vector<Pose> backward;
};
PredictedRun predict_trajectory(const BimodalModel& model, const LoadedTrajectory& traj, int k);

}  // namespace colonpose
