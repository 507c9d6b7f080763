#include "colonpose/net_ops.hpp"

#include <algorithm>
#include <cmath>

namespace colonpose {

namespace {

template <typename Fn>
void par_for(int n, Exec exec, Fn&& fn) {
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) fn(i);
  } else {
    for (int i = 0; i < n; ++i) fn(i);
  }
}

}  // namespace

void conv2d_forward(const double* in, const double* w, const double* b, double* out,
                    const ConvDims& d, Exec exec) {
  const int ho = d.h_out(), wo = d.w_out();
  par_for(d.c_out, exec, [&](int oc) {
    const double* w_oc = w + static_cast<std::size_t>(oc) * d.c_in * d.kernel * d.kernel;
    double* out_oc = out + static_cast<std::size_t>(oc) * ho * wo;
    for (int oy = 0; oy < ho; ++oy) {
      for (int ox = 0; ox < wo; ++ox) {
        double acc = b[oc];
        const int iy0 = oy * d.stride - d.pad;
        const int ix0 = ox * d.stride - d.pad;
        for (int ic = 0; ic < d.c_in; ++ic) {
          const double* in_c = in + static_cast<std::size_t>(ic) * d.h_in * d.w_in;
          const double* w_ic = w_oc + static_cast<std::size_t>(ic) * d.kernel * d.kernel;
          for (int ky = 0; ky < d.kernel; ++ky) {
            const int iy = iy0 + ky;
            if (iy < 0 || iy >= d.h_in) continue;
            const double* in_row = in_c + static_cast<std::size_t>(iy) * d.w_in;
            const double* w_row = w_ic + static_cast<std::size_t>(ky) * d.kernel;
            for (int kx = 0; kx < d.kernel; ++kx) {
              const int ix = ix0 + kx;
              if (ix < 0 || ix >= d.w_in) continue;
              acc += w_row[kx] * in_row[ix];
            }
          }
        }
        out_oc[static_cast<std::size_t>(oy) * wo + ox] = acc;
      }
    }
  });
}

void conv2d_backward(const double* in, const double* w, const double* d_out, double* d_in,
                     double* d_w, double* d_b, const ConvDims& d, Exec exec) {
  const int ho = d.h_out(), wo = d.w_out();

  // weight and bias gradients: parallel over output channels (disjoint rows)
  par_for(d.c_out, exec, [&](int oc) {
    const double* dout_oc = d_out + static_cast<std::size_t>(oc) * ho * wo;
    double* dw_oc = d_w + static_cast<std::size_t>(oc) * d.c_in * d.kernel * d.kernel;
    double db = 0;
    for (int oy = 0; oy < ho; ++oy)
      for (int ox = 0; ox < wo; ++ox) {
        const double g = dout_oc[static_cast<std::size_t>(oy) * wo + ox];
        if (g == 0) continue;
        db += g;
        const int iy0 = oy * d.stride - d.pad;
        const int ix0 = ox * d.stride - d.pad;
        for (int ic = 0; ic < d.c_in; ++ic) {
          const double* in_c = in + static_cast<std::size_t>(ic) * d.h_in * d.w_in;
          double* dw_ic = dw_oc + static_cast<std::size_t>(ic) * d.kernel * d.kernel;
          for (int ky = 0; ky < d.kernel; ++ky) {
            const int iy = iy0 + ky;
            if (iy < 0 || iy >= d.h_in) continue;
            for (int kx = 0; kx < d.kernel; ++kx) {
              const int ix = ix0 + kx;
              if (ix < 0 || ix >= d.w_in) continue;
              dw_ic[static_cast<std::size_t>(ky) * d.kernel + kx] +=
                  g * in_c[static_cast<std::size_t>(iy) * d.w_in + ix];
            }
          }
        }
      }
    d_b[oc] += db;
  });

  if (!d_in) return;
  // input gradient in gather form: parallel over input rows (disjoint writes)
  par_for(d.c_in * d.h_in, exec, [&](int row) {
    const int ic = row / d.h_in;
    const int iy = row % d.h_in;
    double* din_row = d_in + (static_cast<std::size_t>(ic) * d.h_in + iy) * d.w_in;
    for (int ix = 0; ix < d.w_in; ++ix) {
      double acc = 0;
      for (int oc = 0; oc < d.c_out; ++oc) {
        const double* dout_oc = d_out + static_cast<std::size_t>(oc) * ho * wo;
        const double* w_ic = w + (static_cast<std::size_t>(oc) * d.c_in + ic) * d.kernel * d.kernel;
        for (int ky = 0; ky < d.kernel; ++ky) {
          const int oy_num = iy + d.pad - ky;
          if (oy_num < 0 || oy_num % d.stride != 0) continue;
          const int oy = oy_num / d.stride;
          if (oy >= ho) continue;
          for (int kx = 0; kx < d.kernel; ++kx) {
            const int ox_num = ix + d.pad - kx;
            if (ox_num < 0 || ox_num % d.stride != 0) continue;
            const int ox = ox_num / d.stride;
            if (ox >= wo) continue;
            acc += w_ic[static_cast<std::size_t>(ky) * d.kernel + kx] *
                   dout_oc[static_cast<std::size_t>(oy) * wo + ox];
          }
        }
      }
      din_row[ix] += acc;
    }
  });
}

void relu_forward(const double* x, double* y, long n, Exec exec) {
  par_for(static_cast<int>(n), exec, [&](int i) { y[i] = x[i] > 0 ? x[i] : 0.0; });
}

void relu_backward(const double* x, const double* dy, double* dx, long n, Exec exec) {
  par_for(static_cast<int>(n), exec, [&](int i) { dx[i] += x[i] > 0 ? dy[i] : 0.0; });
}

void fc_forward(const double* x, const double* w, const double* b, double* y, int n_in, int n_out,
                Exec exec) {
  par_for(n_out, exec, [&](int o) {
    const double* w_row = w + static_cast<std::size_t>(o) * n_in;
    double acc = b[o];
#pragma omp simd reduction(+ : acc)
    for (int i = 0; i < n_in; ++i) acc += w_row[i] * x[i];
    y[o] = acc;
  });
}

void fc_backward(const double* x, const double* w, const double* dy, double* dx, double* dw,
                 double* db, int n_in, int n_out, Exec exec) {
  par_for(n_out, exec, [&](int o) {
    const double g = dy[o];
    db[o] += g;
    double* dw_row = dw + static_cast<std::size_t>(o) * n_in;
#pragma omp simd
    for (int i = 0; i < n_in; ++i) dw_row[i] += g * x[i];
  });
  if (!dx) return;
  par_for(n_in, exec, [&](int i) {
    double acc = 0;
    for (int o = 0; o < n_out; ++o) acc += w[static_cast<std::size_t>(o) * n_in + i] * dy[o];
    dx[i] += acc;
  });
}

void dropout_forward(const double* x, double* y, double* mask, long n, double p, Rng& rng) {
  const double scale = 1.0 / (1.0 - p);
  for (long i = 0; i < n; ++i) {
    mask[i] = rng.uniform01() < p ? 0.0 : scale;
    y[i] = x[i] * mask[i];
  }
}

void dropout_backward(const double* dy, const double* mask, double* dx, long n) {
  for (long i = 0; i < n; ++i) dx[i] += dy[i] * mask[i];
}

void softmax(const double* x, double* y, int n) {
  double mx = x[0];
  for (int i = 1; i < n; ++i) mx = std::max(mx, x[i]);
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    y[i] = std::exp(x[i] - mx);
    sum += y[i];
  }
  for (int i = 0; i < n; ++i) y[i] /= sum;
}

void softmax_backward(const double* y, const double* dy, double* dx, int n) {
  double dot = 0;
  for (int i = 0; i < n; ++i) dot += dy[i] * y[i];
  for (int i = 0; i < n; ++i) dx[i] += y[i] * (dy[i] - dot);
}

void correlation_forward(const double* f1, const double* f2, double* vol, int channels, int cells,
                         Exec exec) {
  par_for(cells, exec, [&](int a) {
    double* vol_row = vol + static_cast<std::size_t>(a) * cells;
    for (int b = 0; b < cells; ++b) {
      double acc = 0;
      for (int c = 0; c < channels; ++c)
        acc += f1[static_cast<std::size_t>(c) * cells + a] *
               f2[static_cast<std::size_t>(c) * cells + b];
      vol_row[b] = acc;
    }
  });
}

void correlation_backward(const double* f1, const double* f2, const double* d_vol, double* d_f1,
                          double* d_f2, int channels, int cells, Exec exec) {
  par_for(cells, exec, [&](int a) {
    const double* dv_row = d_vol + static_cast<std::size_t>(a) * cells;
    for (int c = 0; c < channels; ++c) {
      double acc = 0;
      const double* f2_c = f2 + static_cast<std::size_t>(c) * cells;
      for (int b = 0; b < cells; ++b) acc += dv_row[b] * f2_c[b];
      d_f1[static_cast<std::size_t>(c) * cells + a] += acc;
    }
  });
  par_for(cells, exec, [&](int b) {
    for (int c = 0; c < channels; ++c) {
      double acc = 0;
      const double* f1_c = f1 + static_cast<std::size_t>(c) * cells;
      for (int a = 0; a < cells; ++a)
        acc += d_vol[static_cast<std::size_t>(a) * cells + b] * f1_c[a];
      d_f2[static_cast<std::size_t>(c) * cells + b] += acc;
    }
  });
}

void softmax_rows(const double* x, double* y, int rows, int cols, Exec exec) {
  par_for(rows, exec, [&](int r) {
    softmax(x + static_cast<std::size_t>(r) * cols, y + static_cast<std::size_t>(r) * cols, cols);
  });
}

void softmax_rows_backward(const double* y, const double* dy, double* dx, int rows, int cols,
                           Exec exec) {
  par_for(rows, exec, [&](int r) {
    softmax_backward(y + static_cast<std::size_t>(r) * cols, dy + static_cast<std::size_t>(r) * cols,
                     dx + static_cast<std::size_t>(r) * cols, cols);
  });
}

void softmax_cols(const double* x, double* y, int rows, int cols, Exec exec) {
  par_for(cols, exec, [&](int c) {
    double mx = x[c];
    for (int r = 1; r < rows; ++r) mx = std::max(mx, x[static_cast<std::size_t>(r) * cols + c]);
    double sum = 0;
    for (int r = 0; r < rows; ++r) {
      const double e = std::exp(x[static_cast<std::size_t>(r) * cols + c] - mx);
      y[static_cast<std::size_t>(r) * cols + c] = e;
      sum += e;
    }
    for (int r = 0; r < rows; ++r) y[static_cast<std::size_t>(r) * cols + c] /= sum;
  });
}

void softmax_cols_backward(const double* y, const double* dy, double* dx, int rows, int cols,
                           Exec exec) {
  par_for(cols, exec, [&](int c) {
    double dot = 0;
    for (int r = 0; r < rows; ++r)
      dot += dy[static_cast<std::size_t>(r) * cols + c] * y[static_cast<std::size_t>(r) * cols + c];
    for (int r = 0; r < rows; ++r) {
      const std::size_t i = static_cast<std::size_t>(r) * cols + c;
      dx[i] += y[i] * (dy[i] - dot);
    }
  });
}

void mean_pool_forward(const double* x, double* y, int channels, int cells) {
  for (int c = 0; c < channels; ++c) {
    double acc = 0;
    const double* xc = x + static_cast<std::size_t>(c) * cells;
    for (int i = 0; i < cells; ++i) acc += xc[i];
    y[c] = acc / cells;
  }
}

void mean_pool_backward(const double* dy, double* dx, int channels, int cells) {
  for (int c = 0; c < channels; ++c) {
    const double g = dy[c] / cells;
    double* dxc = dx + static_cast<std::size_t>(c) * cells;
    for (int i = 0; i < cells; ++i) dxc[i] += g;
  }
}

}  // namespace colonpose
