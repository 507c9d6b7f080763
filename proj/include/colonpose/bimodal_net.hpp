#pragma once

#include <array>
#include <string>

#include "colonpose/camera.hpp"
#include "colonpose/losses.hpp"
#include "colonpose/net_ops.hpp"
#include "colonpose/pose.hpp"
#include "colonpose/tensor.hpp"

namespace colonpose {

enum class Mode { bimodal, unimodal, bimodal_nosup, bimodal_nocorr };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

// Bin centers are z-translation prototypes; class 0 is the withdrawal class
// (t_z < 0) and carries the negative center.
struct BimodalConfig {
  double bin1 = -0.5;
  double bin2 = 0.5;
  int k = 5;
  Mode mode = Mode::bimodal;

  static BimodalConfig for_k(int k, Mode mode) {
    BimodalConfig c;
    c.k = k;
    c.mode = mode;
    c.bin1 = -0.1 * k;
    c.bin2 = 0.1 * k;
    return c;
  }
  void validate() const;
};

struct ModelConfig {
  int input_size = 128;
  std::array<int, 4> enc_widths{8, 16, 32, 64};   // stride-2 stages, kernel 3
  std::array<int, 4> reg_widths{32, 32, 16, 12};  // stride-1 stages, last = 12
  int class_h1 = 64;
  int class_h2 = 32;
  double dropout = 0.5;
  BimodalConfig bimodal;

  int grid() const { return input_size / 16; }
  int cells() const { return grid() * grid(); }
  // correlation mode feeds both normalized volume views; the no-correlation
  // ablation feeds the two mean-pooled feature vectors instead
  int class_input_dim() const {
    return bimodal.mode == Mode::bimodal_nocorr ? 2 * enc_widths[3] : 2 * cells() * cells();
  }
  void validate() const;
};

struct BimodalPrediction {
  std::array<double, 2> probs{0.5, 0.5};
  RelPose6 residual1, residual2;
  RelPose6 final_pose;
};

// Mixture of the two bin-relative residuals weighted by the class
// probabilities; with one-hot probs it returns exactly that branch.
// In unimodal mode the first residual is the prediction itself.
RelPose6 predict_mixture(const std::array<double, 2>& probs, const RelPose6& residual1,
                         const RelPose6& residual2, const BimodalConfig& cfg);

class BimodalModel {
 public:
  explicit BimodalModel(const ModelConfig& cfg);

  const ModelConfig& config() const { return cfg_; }

  void init_params(Rng& rng);
  void zero_grads();

  double beta = 0.0;
  double gamma = -3.0;
  double d_beta = 0.0;
  double d_gamma = 0.0;

  struct ParamRef {
    std::string name;
    Tensor* value;
    Tensor* grad;
  };
  std::vector<ParamRef> params();  // declaration order (checkpoint order)

  // Everything the backward pass needs; also carries the prediction.
  struct ForwardState {
    Tensor in1, in2;
    std::array<Tensor, 4> z1, a1, z2, a2;   // per-stage pre/post activations
    Tensor vol, view_a, view_b;             // correlation volume + match views
    Tensor cls_in;
    std::array<Tensor, 3> cls_z;
    std::array<Tensor, 2> cls_a, cls_mask;
    std::array<double, 2> logits{};
    Tensor reg_in;
    std::array<Tensor, 4> reg_z, reg_a;
    Tensor reg_out;  // 12 outputs
    bool training = false;
    BimodalPrediction prediction;
  };

  // img tensors are [3, input_size, input_size] in [0,1]. Dropout masks are
  // drawn from `rng` only when training; an eval pass never touches it.
  ForwardState forward(const Tensor& img1, const Tensor& img2, bool training, Rng& rng,
                       Exec exec = Exec::parallel) const;

  // Accumulates parameter gradients. d_final is dL/d(final 6D pose);
  // d_probs_direct is the class-loss gradient w.r.t. the probabilities
  // (the mixture path contribution is added internally).
  void backward(const ForwardState& state, const Eigen::Matrix<double, 6, 1>& d_final,
                const std::array<double, 2>& d_probs_direct, Exec exec = Exec::parallel);

  // spec-level single ops, built on the same kernels
  Tensor encode(const Tensor& img, Exec exec = Exec::parallel) const;
  Tensor correlate(const Tensor& f1, const Tensor& f2, Exec exec = Exec::parallel) const;
  // class probabilities from feature grids (eval mode, dropout-free); the
  // class head sees the features only through the correlation volume
  std::array<double, 2> classify_features(const Tensor& f1, const Tensor& f2,
                                          Exec exec = Exec::parallel) const;

  void save_checkpoint(const std::string& path, const std::string& sidecar_text) const;
  static BimodalModel load_checkpoint(const std::string& path);

 private:
  struct Conv {
    Tensor w, b, dw, db;
    ConvDims dims;
  };
  struct Fc {
    Tensor w, b, dw, db;
    int n_in = 0, n_out = 0;
  };

  Tensor image_features(const Tensor& img, std::array<Tensor, 4>& z, std::array<Tensor, 4>& a,
                        Exec exec) const;

  ModelConfig cfg_;
  std::array<Conv, 4> enc_;
  std::array<Conv, 4> reg_;
  std::array<Fc, 3> cls_;

  friend struct ModelTestAccess;
};

// Converts an RGB image to the [3, H, W] input tensor (raw [0,1] values).
Tensor image_to_tensor(const RgbImage& img);

}  // namespace colonpose
