#include "colonpose/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace colonpose {

std::vector<TrainPair> build_pairs(const std::vector<Pose>& poses, int traj_index, int k,
                                   bool both_directions) {
  std::vector<TrainPair> out;
  int prev_label = 1;
  for (std::size_t i = 0; i + static_cast<std::size_t>(k) < poses.size(); ++i) {
    const Pose rel = relative(poses[i], poses[i + k]);
    TrainPair p;
    p.traj = traj_index;
    p.frame = static_cast<int>(i);
    p.gt = to_6d(rel);
    const double tz = p.gt.translation.z();
    p.label = tz < 0 ? 0 : (tz > 0 ? 1 : prev_label);
    prev_label = p.label;
    out.push_back(p);
    if (both_directions) {
      TrainPair q = p;
      q.reversed = true;
      q.gt = to_6d(invert(rel));
      const double qz = q.gt.translation.z();
      q.label = qz < 0 ? 0 : (qz > 0 ? 1 : 1 - p.label);
      out.push_back(q);
    }
  }
  return out;
}

TrainingData TrainingData::load(const std::vector<LoadedTrajectory>& trajectories, int k,
                                bool both_directions) {
  TrainingData data;
  data.k = k;
  for (std::size_t t = 0; t < trajectories.size(); ++t) {
    const LoadedTrajectory& lt = trajectories[t];
    if (!lt.has_images) throw IoError("training requires rendered images: " + lt.dir);
    TrajCache cache;
    cache.poses = lt.poses;
    cache.rgb.reserve(lt.poses.size());
    for (std::size_t f = 0; f < lt.poses.size(); ++f) {
      const RgbImage img = lt.load_rgb(static_cast<int>(f));
      if (data.input_size == 0) data.input_size = img.width;
      if (img.width != data.input_size || img.height != data.input_size)
        throw IoError(lt.dir + ": frames are not square images of a uniform size");
      std::vector<std::uint8_t> raw(img.data.size());
      for (std::size_t i = 0; i < raw.size(); ++i)
        raw[i] = static_cast<std::uint8_t>(std::lround(std::clamp(img.data[i], 0.0, 1.0) * 255.0));
      cache.rgb.push_back(std::move(raw));
    }
    auto pairs = build_pairs(cache.poses, static_cast<int>(t), k, both_directions);
    data.pairs.insert(data.pairs.end(), pairs.begin(), pairs.end());
    data.trajs.push_back(std::move(cache));
  }
  if (data.pairs.empty()) throw NumericError("training dataset has no pairs");
  return data;
}

Tensor TrainingData::frame_tensor(int traj, int frame) const {
  const auto& raw = trajs[static_cast<std::size_t>(traj)].rgb[static_cast<std::size_t>(frame)];
  const int s = input_size;
  Tensor t({3, s, s});
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < s; ++y)
      for (int x = 0; x < s; ++x)
        t.v[(static_cast<std::size_t>(c) * s + y) * s + x] =
            raw[(static_cast<std::size_t>(y) * s + x) * 3 + static_cast<std::size_t>(c)] / 255.0;
  return t;
}

void TrainingData::pair_tensors(const TrainPair& p, Tensor& img1, Tensor& img2) const {
  const int a = p.reversed ? p.frame + k : p.frame;
  const int b = p.reversed ? p.frame : p.frame + k;
  img1 = frame_tensor(p.traj, a);
  img2 = frame_tensor(p.traj, b);
}

namespace {

int predicted_label(const BimodalModel::ForwardState& st, Mode mode) {
  if (mode == Mode::unimodal)
    return st.prediction.final_pose.translation.z() < 0 ? 0 : 1;
  return st.prediction.probs[1] >= st.prediction.probs[0] ? 1 : 0;
}

}  // namespace

double direction_accuracy_on(const BimodalModel& model, const TrainingData& data, int cap) {
  const std::size_t n = cap > 0 ? std::min<std::size_t>(data.pairs.size(), static_cast<std::size_t>(cap))
                                : data.pairs.size();
  if (n == 0) throw NumericError("direction accuracy: no pairs");
  Rng unused(0);
  int correct = 0;
  Tensor img1, img2;
  for (std::size_t i = 0; i < n; ++i) {
    const TrainPair& p = data.pairs[i];
    data.pair_tensors(p, img1, img2);
    const auto st = model.forward(img1, img2, /*training=*/false, unused);
    if (predicted_label(st, model.config().bimodal.mode) == p.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

TrainResult train(BimodalModel& model, const TrainingData& train_data,
                  const TrainingData& val_data, const TrainConfig& cfg,
                  const std::function<void(const std::string&)>& log) {
  if (train_data.pairs.empty()) throw NumericError("train: empty dataset");
  const Mode mode = model.config().bimodal.mode;
  const double w_c = mode == Mode::bimodal_nosup || mode == Mode::unimodal ? 0.0 : cfg.w_c;

  Rng rng(cfg.seed);
  model.init_params(rng);

  // momentum buffers in parameter declaration order
  auto param_refs = model.params();
  std::vector<Tensor> velocity;
  velocity.reserve(param_refs.size());
  for (const auto& p : param_refs) velocity.emplace_back(p.value->shape);
  double vel_beta = 0, vel_gamma = 0;

  std::vector<std::size_t> order(train_data.pairs.size());
  std::iota(order.begin(), order.end(), 0);
  auto reshuffle = [&] {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.below(i)]);
  };
  reshuffle();
  std::size_t cursor = 0;

  TrainResult result;
  Tensor img1, img2;
  double last_val = -1;

  for (int step = 0; step < cfg.steps; ++step) {
    model.zero_grads();
    double batch_loss = 0, batch_pose = 0, batch_class = 0;

    for (int b = 0; b < cfg.batch_size; ++b) {
      if (cursor >= order.size()) {
        reshuffle();
        cursor = 0;
      }
      const TrainPair& pair = train_data.pairs[order[cursor++]];
      train_data.pair_tensors(pair, img1, img2);
      const auto st = model.forward(img1, img2, /*training=*/true, rng);

      LossWeights w{model.beta, model.gamma, w_c};
      const PoseLossGrad pg = pose_loss_grad(st.prediction.final_pose, pair.gt, w);
      const double lc = mode == Mode::unimodal ? 0.0 : class_loss(st.prediction.probs, pair.label);
      const double total = supervised_target(pg.value, lc, w);
      if (!std::isfinite(total))
        throw NumericError("train: non-finite loss at step " + std::to_string(step));
      batch_loss += total;
      batch_pose += pg.value;
      batch_class += lc;

      std::array<double, 2> d_probs{0, 0};
      if (w_c > 0) {
        const double p = std::max(st.prediction.probs[static_cast<std::size_t>(pair.label)], 1e-12);
        d_probs[static_cast<std::size_t>(pair.label)] = -w_c / p;
      }
      model.backward(st, pg.d_pred, d_probs);
      model.d_beta += pg.d_beta;
      model.d_gamma += pg.d_gamma;
    }

    const double inv_b = 1.0 / cfg.batch_size;
    const double lr_t =
        cfg.cosine_decay ? cfg.lr * 0.5 * (1.0 + std::cos(kPi * step / cfg.steps)) : cfg.lr;
    for (std::size_t i = 0; i < param_refs.size(); ++i) {
      double* v = velocity[i].data();
      double* val = param_refs[i].value->data();
      const double* g = param_refs[i].grad->data();
      const long n = param_refs[i].value->numel();
      for (long j = 0; j < n; ++j) {
        v[j] = cfg.momentum * v[j] + g[j] * inv_b;
        val[j] -= lr_t * v[j];
      }
    }
    vel_beta = cfg.momentum * vel_beta + model.d_beta * inv_b;
    vel_gamma = cfg.momentum * vel_gamma + model.d_gamma * inv_b;
    model.beta -= lr_t * cfg.uncertainty_lr_scale * vel_beta;
    model.gamma -= lr_t * cfg.uncertainty_lr_scale * vel_gamma;

    result.final_loss = batch_loss * inv_b;
    const bool log_now = (step + 1) % cfg.log_every == 0 || step + 1 == cfg.steps;
    const bool val_now =
        !val_data.pairs.empty() && ((step + 1) % cfg.val_every == 0 || step + 1 == cfg.steps);
    if (val_now) last_val = direction_accuracy_on(model, val_data, cfg.val_cap);
    if (log_now || val_now) {
      std::ostringstream row;
      row.precision(10);
      row << (step + 1) << ',' << batch_loss * inv_b << ',' << batch_pose * inv_b << ','
          << batch_class * inv_b << ',' << model.beta << ',' << model.gamma << ','
          << (val_now ? last_val : -1.0);
      result.curve_rows.push_back(row.str());
      if (log) log("step " + std::to_string(step + 1) + " loss " + std::to_string(batch_loss * inv_b) +
                   (val_now ? " val_acc " + std::to_string(last_val) : ""));
    }
  }
  result.final_val_accuracy = last_val;
  return result;
}

PredictedRun predict_trajectory(const BimodalModel& model, const LoadedTrajectory& traj, int k) {
  const int n = static_cast<int>(traj.poses.size());
  if (n <= k) throw NumericError("predict: trajectory shorter than the frame gap");
  Rng unused(0);

  auto load_tensor = [&](int f) { return image_to_tensor(traj.load_rgb(f)); };

  // relative predictions for every adjacent pair of each phase chain
  std::vector<Pose> rel_fwd(static_cast<std::size_t>(n - k));
  std::vector<Pose> rel_bwd(static_cast<std::size_t>(n - k));
  for (int i = 0; i + k < n; ++i) {
    const Tensor a = load_tensor(i);
    const Tensor b = load_tensor(i + k);
    const auto st_f = model.forward(a, b, false, unused);
    rel_fwd[static_cast<std::size_t>(i)] = from_6d(st_f.prediction.final_pose);
    const auto st_b = model.forward(b, a, false, unused);
    rel_bwd[static_cast<std::size_t>(i)] = from_6d(st_b.prediction.final_pose);
  }

  PredictedRun run;
  run.forward.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < k; ++j) run.forward[static_cast<std::size_t>(j)] = traj.poses[static_cast<std::size_t>(j)];
  for (int j = k; j < n; ++j)
    run.forward[static_cast<std::size_t>(j)] =
        compose(run.forward[static_cast<std::size_t>(j - k)], rel_fwd[static_cast<std::size_t>(j - k)]);

  // backward trajectory listed last-frame-first; position j corresponds to
  // original frame n-1-j, and each step consumes the reversed pair
  run.backward.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < k; ++j)
    run.backward[static_cast<std::size_t>(j)] = traj.poses[static_cast<std::size_t>(n - 1 - j)];
  for (int j = k; j < n; ++j) {
    const int lo = n - 1 - j;  // original index of this backward position
    run.backward[static_cast<std::size_t>(j)] =
        compose(run.backward[static_cast<std::size_t>(j - k)], rel_bwd[static_cast<std::size_t>(lo)]);
  }
  return run;
}

}  // namespace colonpose
