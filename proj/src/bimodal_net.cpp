#include "colonpose/bimodal_net.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace colonpose {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::bimodal: return "bimodal";
    case Mode::unimodal: return "unimodal";
    case Mode::bimodal_nosup: return "bimodal_nosup";
    case Mode::bimodal_nocorr: return "bimodal_nocorr";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "bimodal") return Mode::bimodal;
  if (s == "unimodal") return Mode::unimodal;
  if (s == "bimodal_nosup") return Mode::bimodal_nosup;
  if (s == "bimodal_nocorr") return Mode::bimodal_nocorr;
  throw ConfigError("unknown mode: " + s + " (expected bimodal|unimodal|bimodal_nosup|bimodal_nocorr)");
}

void BimodalConfig::validate() const {
  if (k <= 0) throw ConfigError("bimodal config: k must be positive");
  if (mode != Mode::unimodal) {
    if (bin1 != -bin2 || bin1 == 0)
      throw ConfigError("bimodal config: requires bin1 = -bin2 != 0");
    if (bin1 > 0) throw ConfigError("bimodal config: class-0 (t_z<0) bin must be negative");
  }
}

void ModelConfig::validate() const {
  if (input_size < 16 || input_size % 16 != 0)
    throw ConfigError("model: input size must be a positive multiple of 16");
  if (reg_widths[3] != 12) throw ConfigError("model: regression head must output 12 values");
  for (int w : enc_widths)
    if (w <= 0) throw ConfigError("model: encoder widths must be positive");
  if (class_h1 <= 0 || class_h2 <= 0) throw ConfigError("model: class hidden sizes must be positive");
  if (dropout < 0 || dropout >= 1) throw ConfigError("model: dropout must be in [0,1)");
}

RelPose6 predict_mixture(const std::array<double, 2>& probs, const RelPose6& residual1,
                         const RelPose6& residual2, const BimodalConfig& cfg) {
  if (cfg.mode == Mode::unimodal) return residual1;
  Eigen::Matrix<double, 6, 1> b1 = Eigen::Matrix<double, 6, 1>::Zero();
  Eigen::Matrix<double, 6, 1> b2 = Eigen::Matrix<double, 6, 1>::Zero();
  b1[2] = cfg.bin1;
  b2[2] = cfg.bin2;
  const Eigen::Matrix<double, 6, 1> v =
      probs[0] * (b1 + residual1.as_vector()) + probs[1] * (b2 + residual2.as_vector());
  return RelPose6::from_vector(v);
}

Tensor image_to_tensor(const RgbImage& img) {
  Tensor t({3, img.height, img.width});
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        t.v[(static_cast<std::size_t>(c) * img.height + y) * img.width + x] = img.at(y, x, c);
  return t;
}

BimodalModel::BimodalModel(const ModelConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  cfg_.bimodal.validate();

  int size = cfg_.input_size;
  int c_in = 3;
  for (int i = 0; i < 4; ++i) {
    Conv& cv = enc_[i];
    cv.dims = ConvDims{c_in, size, size, cfg_.enc_widths[i], 3, 2, 1};
    cv.w = Tensor({cfg_.enc_widths[i], c_in, 3, 3});
    cv.b = Tensor({cfg_.enc_widths[i]});
    cv.dw = Tensor(cv.w.shape);
    cv.db = Tensor(cv.b.shape);
    c_in = cfg_.enc_widths[i];
    size /= 2;
  }

  const int g = cfg_.grid();
  c_in = 2 * cfg_.enc_widths[3];
  for (int i = 0; i < 4; ++i) {
    Conv& cv = reg_[i];
    cv.dims = ConvDims{c_in, g, g, cfg_.reg_widths[i], 3, 1, 1};
    cv.w = Tensor({cfg_.reg_widths[i], c_in, 3, 3});
    cv.b = Tensor({cfg_.reg_widths[i]});
    cv.dw = Tensor(cv.w.shape);
    cv.db = Tensor(cv.b.shape);
    c_in = cfg_.reg_widths[i];
  }

  const int dims[4] = {cfg_.class_input_dim(), cfg_.class_h1, cfg_.class_h2, 2};
  for (int i = 0; i < 3; ++i) {
    Fc& fc = cls_[i];
    fc.n_in = dims[i];
    fc.n_out = dims[i + 1];
    fc.w = Tensor({fc.n_out, fc.n_in});
    fc.b = Tensor({fc.n_out});
    fc.dw = Tensor(fc.w.shape);
    fc.db = Tensor(fc.b.shape);
  }
}

void BimodalModel::init_params(Rng& rng) {
  auto he_uniform = [&rng](Tensor& t, int fan_in) {
    const double limit = std::sqrt(6.0 / fan_in);
    for (double& x : t.v) x = rng.uniform(-limit, limit);
  };
  for (Conv& cv : enc_) he_uniform(cv.w, cv.dims.c_in * 9);
  for (Conv& cv : reg_) he_uniform(cv.w, cv.dims.c_in * 9);
  for (Fc& fc : cls_) he_uniform(fc.w, fc.n_in);
  beta = 0.0;
  gamma = -3.0;
}

void BimodalModel::zero_grads() {
  for (Conv& cv : enc_) {
    cv.dw.fill(0);
    cv.db.fill(0);
  }
  for (Conv& cv : reg_) {
    cv.dw.fill(0);
    cv.db.fill(0);
  }
  for (Fc& fc : cls_) {
    fc.dw.fill(0);
    fc.db.fill(0);
  }
  d_beta = d_gamma = 0;
}

std::vector<BimodalModel::ParamRef> BimodalModel::params() {
  std::vector<ParamRef> out;
  for (int i = 0; i < 4; ++i) {
    out.push_back({"enc" + std::to_string(i) + ".w", &enc_[i].w, &enc_[i].dw});
    out.push_back({"enc" + std::to_string(i) + ".b", &enc_[i].b, &enc_[i].db});
  }
  for (int i = 0; i < 4; ++i) {
    out.push_back({"reg" + std::to_string(i) + ".w", &reg_[i].w, &reg_[i].dw});
    out.push_back({"reg" + std::to_string(i) + ".b", &reg_[i].b, &reg_[i].db});
  }
  for (int i = 0; i < 3; ++i) {
    out.push_back({"cls" + std::to_string(i) + ".w", &cls_[i].w, &cls_[i].dw});
    out.push_back({"cls" + std::to_string(i) + ".b", &cls_[i].b, &cls_[i].db});
  }
  return out;
}

Tensor BimodalModel::image_features(const Tensor& img, std::array<Tensor, 4>& z,
                                    std::array<Tensor, 4>& a, Exec exec) const {
  if (img.shape != std::vector<int>{3, cfg_.input_size, cfg_.input_size})
    throw NumericError("encode: image tensor has the wrong shape");
  const Tensor* cur = &img;
  for (int i = 0; i < 4; ++i) {
    const ConvDims& d = enc_[i].dims;
    z[i] = Tensor({d.c_out, d.h_out(), d.w_out()});
    conv2d_forward(cur->data(), enc_[i].w.data(), enc_[i].b.data(), z[i].data(), d, exec);
    a[i] = Tensor(z[i].shape);
    relu_forward(z[i].data(), a[i].data(), z[i].numel(), exec);
    cur = &a[i];
  }
  return a[3];
}

Tensor BimodalModel::encode(const Tensor& img, Exec exec) const {
  std::array<Tensor, 4> z, a;
  return image_features(img, z, a, exec);
}

Tensor BimodalModel::correlate(const Tensor& f1, const Tensor& f2, Exec exec) const {
  if (f1.shape != f2.shape) throw NumericError("correlate: feature shape mismatch");
  const int c = f1.shape[0];
  const int cells = f1.shape[1] * f1.shape[2];
  Tensor vol({cells, cells});
  correlation_forward(f1.data(), f2.data(), vol.data(), c, cells, exec);
  return vol;
}

std::array<double, 2> BimodalModel::classify_features(const Tensor& f1, const Tensor& f2,
                                                      Exec exec) const {
  if (cfg_.bimodal.mode == Mode::unimodal)
    throw NumericError("classify: the unimodal model has no class head");
  const int channels = f1.shape[0];
  const int cells = f1.shape[1] * f1.shape[2];
  Tensor input({cfg_.class_input_dim()});
  if (cfg_.bimodal.mode == Mode::bimodal_nocorr) {
    mean_pool_forward(f1.data(), input.data(), channels, cells);
    mean_pool_forward(f2.data(), input.data() + channels, channels, cells);
  } else {
    const Tensor vol = correlate(f1, f2, exec);
    softmax_cols(vol.data(), input.data(), cells, cells, exec);
    softmax_rows(vol.data(), input.data() + vol.numel(), cells, cells, exec);
  }
  Tensor cur = std::move(input);
  for (int i = 0; i < 2; ++i) {
    Tensor z({cls_[i].n_out});
    fc_forward(cur.data(), cls_[i].w.data(), cls_[i].b.data(), z.data(), cls_[i].n_in,
               cls_[i].n_out, exec);
    Tensor a(z.shape);
    relu_forward(z.data(), a.data(), z.numel(), exec);
    cur = std::move(a);
  }
  Tensor logits({2});
  fc_forward(cur.data(), cls_[2].w.data(), cls_[2].b.data(), logits.data(), cls_[2].n_in, 2, exec);
  std::array<double, 2> probs;
  softmax(logits.data(), probs.data(), 2);
  return probs;
}

BimodalModel::ForwardState BimodalModel::forward(const Tensor& img1, const Tensor& img2,
                                                 bool training, Rng& rng, Exec exec) const {
  ForwardState st;
  st.training = training;
  st.in1 = img1;
  st.in2 = img2;
  const Tensor f1 = image_features(st.in1, st.z1, st.a1, exec);
  const Tensor f2 = image_features(st.in2, st.z2, st.a2, exec);
  const int channels = cfg_.enc_widths[3];
  const int cells = cfg_.cells();
  const Mode mode = cfg_.bimodal.mode;

  // class input
  if (mode != Mode::unimodal) {
    if (mode == Mode::bimodal_nocorr) {
      st.cls_in = Tensor({2 * channels});
      mean_pool_forward(f1.data(), st.cls_in.data(), channels, cells);
      mean_pool_forward(f2.data(), st.cls_in.data() + channels, channels, cells);
    } else {
      st.vol = Tensor({cells, cells});
      correlation_forward(f1.data(), f2.data(), st.vol.data(), channels, cells, exec);
      st.view_a = Tensor(st.vol.shape);  // matches of image 2 in image 1
      st.view_b = Tensor(st.vol.shape);  // matches of image 1 in image 2
      softmax_cols(st.vol.data(), st.view_a.data(), cells, cells, exec);
      softmax_rows(st.vol.data(), st.view_b.data(), cells, cells, exec);
      st.cls_in = Tensor({2 * cells * cells});
      std::memcpy(st.cls_in.data(), st.view_a.data(), sizeof(double) * st.view_a.v.size());
      std::memcpy(st.cls_in.data() + st.view_a.numel(), st.view_b.data(),
                  sizeof(double) * st.view_b.v.size());
    }

    const Tensor* cur = &st.cls_in;
    for (int i = 0; i < 2; ++i) {
      st.cls_z[i] = Tensor({cls_[i].n_out});
      fc_forward(cur->data(), cls_[i].w.data(), cls_[i].b.data(), st.cls_z[i].data(),
                 cls_[i].n_in, cls_[i].n_out, exec);
      st.cls_a[i] = Tensor(st.cls_z[i].shape);
      relu_forward(st.cls_z[i].data(), st.cls_a[i].data(), st.cls_z[i].numel(), exec);
      st.cls_mask[i] = Tensor(st.cls_z[i].shape);
      if (training && cfg_.dropout > 0) {
        Tensor dropped(st.cls_a[i].shape);
        dropout_forward(st.cls_a[i].data(), dropped.data(), st.cls_mask[i].data(),
                        st.cls_a[i].numel(), cfg_.dropout, rng);
        st.cls_a[i] = std::move(dropped);
      } else {
        st.cls_mask[i].fill(1.0);
      }
      cur = &st.cls_a[i];
    }
    st.cls_z[2] = Tensor({2});
    fc_forward(cur->data(), cls_[2].w.data(), cls_[2].b.data(), st.cls_z[2].data(), cls_[2].n_in,
               2, exec);
    st.logits = {st.cls_z[2].v[0], st.cls_z[2].v[1]};
    softmax(st.cls_z[2].data(), st.prediction.probs.data(), 2);
  }

  // regression input: pair features concatenated along channels
  st.reg_in = Tensor({2 * channels, cfg_.grid(), cfg_.grid()});
  std::memcpy(st.reg_in.data(), f1.data(), sizeof(double) * f1.v.size());
  std::memcpy(st.reg_in.data() + f1.numel(), f2.data(), sizeof(double) * f2.v.size());

  const Tensor* cur = &st.reg_in;
  for (int i = 0; i < 4; ++i) {
    const ConvDims& d = reg_[i].dims;
    st.reg_z[i] = Tensor({d.c_out, d.h_out(), d.w_out()});
    conv2d_forward(cur->data(), reg_[i].w.data(), reg_[i].b.data(), st.reg_z[i].data(), d, exec);
    if (i < 3) {
      st.reg_a[i] = Tensor(st.reg_z[i].shape);
      relu_forward(st.reg_z[i].data(), st.reg_a[i].data(), st.reg_z[i].numel(), exec);
      cur = &st.reg_a[i];
    } else {
      cur = &st.reg_z[i];
    }
  }
  st.reg_out = Tensor({12});
  mean_pool_forward(cur->data(), st.reg_out.data(), 12, cells);

  Eigen::Matrix<double, 6, 1> r1, r2;
  for (int i = 0; i < 6; ++i) {
    r1[i] = st.reg_out.v[static_cast<std::size_t>(i)];
    r2[i] = st.reg_out.v[static_cast<std::size_t>(6 + i)];
  }
  st.prediction.residual1 = RelPose6::from_vector(r1);
  st.prediction.residual2 = RelPose6::from_vector(r2);
  st.prediction.final_pose = predict_mixture(st.prediction.probs, st.prediction.residual1,
                                             st.prediction.residual2, cfg_.bimodal);
  return st;
}

void BimodalModel::backward(const ForwardState& st, const Eigen::Matrix<double, 6, 1>& d_final,
                            const std::array<double, 2>& d_probs_direct, Exec exec) {
  const int channels = cfg_.enc_widths[3];
  const int cells = cfg_.cells();
  const Mode mode = cfg_.bimodal.mode;

  // mixture backward
  Tensor d_reg_out({12});
  std::array<double, 2> d_probs = d_probs_direct;
  if (mode == Mode::unimodal) {
    for (int i = 0; i < 6; ++i) d_reg_out.v[static_cast<std::size_t>(i)] = d_final[i];
  } else {
    const auto& p = st.prediction;
    Eigen::Matrix<double, 6, 1> b1 = Eigen::Matrix<double, 6, 1>::Zero();
    Eigen::Matrix<double, 6, 1> b2 = Eigen::Matrix<double, 6, 1>::Zero();
    b1[2] = cfg_.bimodal.bin1;
    b2[2] = cfg_.bimodal.bin2;
    d_probs[0] += d_final.dot(b1 + p.residual1.as_vector());
    d_probs[1] += d_final.dot(b2 + p.residual2.as_vector());
    for (int i = 0; i < 6; ++i) {
      d_reg_out.v[static_cast<std::size_t>(i)] = p.probs[0] * d_final[i];
      d_reg_out.v[static_cast<std::size_t>(6 + i)] = p.probs[1] * d_final[i];
    }
  }

  // feature gradients accumulate from the class and regression paths
  Tensor d_f1({channels, cfg_.grid(), cfg_.grid()});
  Tensor d_f2(d_f1.shape);

  if (mode != Mode::unimodal) {
    Tensor d_logits({2});
    softmax_backward(st.prediction.probs.data(), d_probs.data(), d_logits.data(), 2);

    Tensor d_cls_in({cfg_.class_input_dim()});
    Tensor d_a1({cls_[1].n_out});
    {
      // fc2
      fc_backward(st.cls_a[1].data(), cls_[2].w.data(), d_logits.data(), d_a1.data(),
                  cls_[2].dw.data(), cls_[2].db.data(), cls_[2].n_in, 2, exec);
      // dropout + relu of layer 1
      Tensor d_relu1({cls_[1].n_out});
      dropout_backward(d_a1.data(), st.cls_mask[1].data(), d_relu1.data(), d_relu1.numel());
      Tensor d_z1({cls_[1].n_out});
      relu_backward(st.cls_z[1].data(), d_relu1.data(), d_z1.data(), d_z1.numel(), exec);
      // fc1
      Tensor d_a0({cls_[0].n_out});
      fc_backward(st.cls_a[0].data(), cls_[1].w.data(), d_z1.data(), d_a0.data(),
                  cls_[1].dw.data(), cls_[1].db.data(), cls_[1].n_in, cls_[1].n_out, exec);
      Tensor d_relu0({cls_[0].n_out});
      dropout_backward(d_a0.data(), st.cls_mask[0].data(), d_relu0.data(), d_relu0.numel());
      Tensor d_z0({cls_[0].n_out});
      relu_backward(st.cls_z[0].data(), d_relu0.data(), d_z0.data(), d_z0.numel(), exec);
      fc_backward(st.cls_in.data(), cls_[0].w.data(), d_z0.data(), d_cls_in.data(),
                  cls_[0].dw.data(), cls_[0].db.data(), cls_[0].n_in, cls_[0].n_out, exec);
    }

    if (mode == Mode::bimodal_nocorr) {
      mean_pool_backward(d_cls_in.data(), d_f1.data(), channels, cells);
      mean_pool_backward(d_cls_in.data() + channels, d_f2.data(), channels, cells);
    } else {
      Tensor d_vol({cells, cells});
      softmax_cols_backward(st.view_a.data(), d_cls_in.data(), d_vol.data(), cells, cells, exec);
      softmax_rows_backward(st.view_b.data(), d_cls_in.data() + st.view_a.numel(), d_vol.data(),
                            cells, cells, exec);
      const double* f1 = st.a1[3].data();
      const double* f2 = st.a2[3].data();
      correlation_backward(f1, f2, d_vol.data(), d_f1.data(), d_f2.data(), channels, cells, exec);
    }
  }

  // regression head backward
  {
    Tensor d_last(st.reg_z[3].shape);
    mean_pool_backward(d_reg_out.data(), d_last.data(), 12, cells);
    Tensor d_cur = std::move(d_last);
    for (int i = 3; i >= 0; --i) {
      const Tensor& input = i == 0 ? st.reg_in : st.reg_a[i - 1];
      Tensor d_input(i == 0 ? st.reg_in.shape : st.reg_a[i - 1].shape);
      Tensor d_z = std::move(d_cur);
      if (i < 3) {
        // d_cur currently holds d(post-relu); convert to d(pre-act)
        Tensor tmp(st.reg_z[i].shape);
        relu_backward(st.reg_z[i].data(), d_z.data(), tmp.data(), tmp.numel(), exec);
        d_z = std::move(tmp);
      }
      conv2d_backward(input.data(), reg_[i].w.data(), d_z.data(), d_input.data(),
                      reg_[i].dw.data(), reg_[i].db.data(), reg_[i].dims, exec);
      d_cur = std::move(d_input);
    }
    // split the pair gradient into the two feature maps
    for (std::size_t i = 0; i < d_f1.v.size(); ++i) {
      d_f1.v[i] += d_cur.v[i];
      d_f2.v[i] += d_cur.v[i + d_f1.v.size()];
    }
  }

  // encoder backward for both images
  auto encoder_backward = [&](const Tensor& img, const std::array<Tensor, 4>& z,
                              const std::array<Tensor, 4>& a, Tensor d_feat) {
    Tensor d_cur = std::move(d_feat);
    for (int i = 3; i >= 0; --i) {
      Tensor d_z(z[i].shape);
      relu_backward(z[i].data(), d_cur.data(), d_z.data(), d_z.numel(), exec);
      const Tensor& input = i == 0 ? img : a[i - 1];
      if (i == 0) {
        conv2d_backward(input.data(), enc_[0].w.data(), d_z.data(), nullptr, enc_[0].dw.data(),
                        enc_[0].db.data(), enc_[0].dims, exec);
      } else {
        Tensor d_input(a[i - 1].shape);
        conv2d_backward(input.data(), enc_[i].w.data(), d_z.data(), d_input.data(),
                        enc_[i].dw.data(), enc_[i].db.data(), enc_[i].dims, exec);
        d_cur = std::move(d_input);
      }
    }
  };
  encoder_backward(st.in1, st.z1, st.a1, std::move(d_f1));
  encoder_backward(st.in2, st.z2, st.a2, std::move(d_f2));
}

namespace {

void write_raw(std::ofstream& out, const void* p, std::size_t n) {
  out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void read_raw(std::ifstream& in, void* p, std::size_t n, const std::string& path) {
  in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!in) throw IoError(path + ": truncated checkpoint");
}

constexpr char kMagic[8] = {'C', 'P', 'C', 'K', 'P', 'T', '0', '1'};

}  // namespace

void BimodalModel::save_checkpoint(const std::string& path, const std::string& sidecar_text) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint: " + path);
  write_raw(out, kMagic, sizeof(kMagic));
  const std::int32_t version = 1;
  write_raw(out, &version, 4);
  std::int32_t ints[13] = {cfg_.input_size,
                           cfg_.enc_widths[0],
                           cfg_.enc_widths[1],
                           cfg_.enc_widths[2],
                           cfg_.enc_widths[3],
                           cfg_.reg_widths[0],
                           cfg_.reg_widths[1],
                           cfg_.reg_widths[2],
                           cfg_.reg_widths[3],
                           cfg_.class_h1,
                           cfg_.class_h2,
                           static_cast<std::int32_t>(cfg_.bimodal.mode),
                           cfg_.bimodal.k};
  write_raw(out, ints, sizeof(ints));
  const double reals[3] = {cfg_.bimodal.bin1, cfg_.bimodal.bin2, cfg_.dropout};
  write_raw(out, reals, sizeof(reals));

  auto* self = const_cast<BimodalModel*>(this);
  for (const ParamRef& p : self->params()) {
    const std::int64_t n = p.value->numel();
    write_raw(out, &n, 8);
    std::vector<float> buf(p.value->v.begin(), p.value->v.end());
    write_raw(out, buf.data(), buf.size() * 4);
  }
  const float bg[2] = {static_cast<float>(beta), static_cast<float>(gamma)};
  write_raw(out, bg, sizeof(bg));
  if (!out) throw IoError("write failed: " + path);

  std::ofstream side(path + ".txt");
  if (!side) throw IoError("cannot write checkpoint sidecar: " + path + ".txt");
  side << sidecar_text;
}

BimodalModel BimodalModel::load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  char magic[8];
  read_raw(in, magic, 8, path);
  if (std::memcmp(magic, kMagic, 8) != 0) throw IoError(path + ": not a checkpoint file");
  std::int32_t version;
  read_raw(in, &version, 4, path);
  if (version != 1) throw IoError(path + ": unsupported checkpoint version");
  std::int32_t ints[13];
  read_raw(in, ints, sizeof(ints), path);
  double reals[3];
  read_raw(in, reals, sizeof(reals), path);

  ModelConfig cfg;
  cfg.input_size = ints[0];
  cfg.enc_widths = {ints[1], ints[2], ints[3], ints[4]};
  cfg.reg_widths = {ints[5], ints[6], ints[7], ints[8]};
  cfg.class_h1 = ints[9];
  cfg.class_h2 = ints[10];
  cfg.bimodal.mode = static_cast<Mode>(ints[11]);
  cfg.bimodal.k = ints[12];
  cfg.bimodal.bin1 = reals[0];
  cfg.bimodal.bin2 = reals[1];
  cfg.dropout = reals[2];

  BimodalModel model(cfg);
  for (const ParamRef& p : model.params()) {
    std::int64_t n;
    read_raw(in, &n, 8, path);
    if (n != p.value->numel())
      throw IoError(path + ": parameter size mismatch for " + p.name);
    std::vector<float> buf(static_cast<std::size_t>(n));
    read_raw(in, buf.data(), buf.size() * 4, path);
    for (std::size_t i = 0; i < buf.size(); ++i) p.value->v[i] = buf[i];
  }
  float bg[2];
  read_raw(in, bg, sizeof(bg), path);
  model.beta = bg[0];
  model.gamma = bg[1];
  return model;
}

}  // namespace colonpose
