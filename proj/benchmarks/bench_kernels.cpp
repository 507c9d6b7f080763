// Serial vs OpenMP timings for the hot kernels.

#include <benchmark/benchmark.h>

#include "colonpose/losses.hpp"
#include "colonpose/net_ops.hpp"
#include "colonpose/render.hpp"

using namespace colonpose;

namespace {

Intrinsics bench_k(int size) {
  Intrinsics k;
  k.width = k.height = size;
  k.fx = k.fy = 60.0 * size / 128.0;
  k.cx = k.cy = size / 2.0;
  return k;
}

struct WarpInputs {
  DepthMap depth;
  RgbImage src;
  Pose omega = Pose::translate(0.2, 0.1, -0.4);
  WarpInputs() : depth(128, 128, bench_k(128)), src(128, 128, bench_k(128)) {
    Rng rng(1);
    for (double& d : depth.data) d = rng.uniform(3, 15);
    for (double& v : src.data) v = rng.uniform01();
  }
};

void bm_warp_image(benchmark::State& state, Exec exec) {
  static const WarpInputs in;
  for (auto _ : state) {
    auto [w, m] = warp_image(in.depth, in.src, in.omega, exec);
    benchmark::DoNotOptimize(w.data.data());
  }
}

void bm_ssim(benchmark::State& state, Exec exec) {
  static const WarpInputs in;
  static const ValidityMask mask(128, 128, true);
  for (auto _ : state) {
    const double v = ssim_loss(in.src, in.src, mask, exec);
    benchmark::DoNotOptimize(v);
  }
}

void bm_render(benchmark::State& state, Exec exec) {
  static const TubeScene scene = make_tube_scene(SceneConfig{});
  Pose cam;
  cam.translation = scene.centerline.position(40.0);
  cam.rotation.col(2) = scene.centerline.tangent(40.0);
  cam.rotation.col(1) = cam.rotation.col(2).unitOrthogonal();
  cam.rotation.col(0) = cam.rotation.col(1).cross(cam.rotation.col(2));
  const Intrinsics k = bench_k(64);
  for (auto _ : state) {
    const RenderResult r = render_frame(scene, cam, k, LightRig{}, 30.0, exec);
    benchmark::DoNotOptimize(r.depth.data.data());
  }
}

struct ConvInputs {
  ConvDims d{16, 32, 32, 32, 3, 2, 1};
  Tensor in, w, b, out, dout, din, dw, db;
  ConvInputs()
      : in({d.c_in, d.h_in, d.w_in}),
        w({d.c_out, d.c_in, 3, 3}),
        b({d.c_out}),
        out({d.c_out, d.h_out(), d.w_out()}),
        dout(out.shape),
        din(in.shape),
        dw(w.shape),
        db(b.shape) {
    Rng rng(2);
    for (double& v : in.v) v = rng.uniform(-1, 1);
    for (double& v : w.v) v = rng.uniform(-1, 1);
    for (double& v : dout.v) v = rng.uniform(-1, 1);
  }
};

void bm_conv_forward(benchmark::State& state, Exec exec) {
  static ConvInputs ci;
  for (auto _ : state) {
    conv2d_forward(ci.in.data(), ci.w.data(), ci.b.data(), ci.out.data(), ci.d, exec);
    benchmark::DoNotOptimize(ci.out.data());
  }
}

void bm_conv_backward(benchmark::State& state, Exec exec) {
  static ConvInputs ci;
  for (auto _ : state) {
    ci.din.fill(0);
    ci.dw.fill(0);
    ci.db.fill(0);
    conv2d_backward(ci.in.data(), ci.w.data(), ci.dout.data(), ci.din.data(), ci.dw.data(),
                    ci.db.data(), ci.d, exec);
    benchmark::DoNotOptimize(ci.din.data());
  }
}

void bm_correlation(benchmark::State& state, Exec exec) {
  static Tensor f1({64, 8, 8}), f2({64, 8, 8}), vol({64, 64});
  static bool init = [] {
    Rng rng(3);
    for (double& v : f1.v) v = rng.uniform(-1, 1);
    for (double& v : f2.v) v = rng.uniform(-1, 1);
    return true;
  }();
  (void)init;
  for (auto _ : state) {
    correlation_forward(f1.data(), f2.data(), vol.data(), 64, 64, exec);
    benchmark::DoNotOptimize(vol.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(bm_warp_image, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_warp_image, parallel, Exec::parallel);
BENCHMARK_CAPTURE(bm_ssim, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_ssim, parallel, Exec::parallel);
BENCHMARK_CAPTURE(bm_render, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_render, parallel, Exec::parallel);
BENCHMARK_CAPTURE(bm_conv_forward, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_conv_forward, parallel, Exec::parallel);
BENCHMARK_CAPTURE(bm_conv_backward, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_conv_backward, parallel, Exec::parallel);
BENCHMARK_CAPTURE(bm_correlation, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_correlation, parallel, Exec::parallel);

BENCHMARK_MAIN();
