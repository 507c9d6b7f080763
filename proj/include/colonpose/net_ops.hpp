#pragma once

#include "colonpose/tensor.hpp"

namespace colonpose {

// Dense layer kernels. Forward and backward are written as plain loops with
// disjoint parallel writes; gradients accumulate in a fixed order so the
// results are identical for any thread count.

struct ConvDims {
  int c_in, h_in, w_in;
  int c_out, kernel, stride, pad;
  int h_out() const { return (h_in + 2 * pad - kernel) / stride + 1; }
  int w_out() const { return (w_in + 2 * pad - kernel) / stride + 1; }
};

void conv2d_forward(const double* in, const double* w, const double* b, double* out,
                    const ConvDims& d, Exec exec = Exec::parallel);
// d_in may be null when the input gradient is not needed (first layer).
void conv2d_backward(const double* in, const double* w, const double* d_out, double* d_in,
                     double* d_w, double* d_b, const ConvDims& d, Exec exec = Exec::parallel);

void relu_forward(const double* x, double* y, long n, Exec exec = Exec::parallel);
void relu_backward(const double* x, const double* dy, double* dx, long n,
                   Exec exec = Exec::parallel);

void fc_forward(const double* x, const double* w, const double* b, double* y, int n_in, int n_out,
                Exec exec = Exec::parallel);
void fc_backward(const double* x, const double* w, const double* dy, double* dx, double* dw,
                 double* db, int n_in, int n_out, Exec exec = Exec::parallel);

// Inverted dropout: keep with probability 1-p and scale kept units by
// 1/(1-p); mask entries are the applied multipliers.
void dropout_forward(const double* x, double* y, double* mask, long n, double p, Rng& rng);
void dropout_backward(const double* dy, const double* mask, double* dx, long n);

void softmax(const double* x, double* y, int n);
// dx = J_softmax^T dy given y = softmax(x)
void softmax_backward(const double* y, const double* dy, double* dx, int n);

// Correlation volume between two feature grids flattened to cells:
// vol[a, b] = sum_c f1[c, a] * f2[c, b], a and b over the cells of f1 / f2.
void correlation_forward(const double* f1, const double* f2, double* vol, int channels, int cells,
                         Exec exec = Exec::parallel);
void correlation_backward(const double* f1, const double* f2, const double* d_vol, double* d_f1,
                          double* d_f2, int channels, int cells, Exec exec = Exec::parallel);

// Row/column softmax over an [rows, cols] matrix: per-row distributions
// (match dimension = columns) or per-column distributions.
void softmax_rows(const double* x, double* y, int rows, int cols, Exec exec = Exec::parallel);
void softmax_rows_backward(const double* y, const double* dy, double* dx, int rows, int cols,
                           Exec exec = Exec::parallel);
void softmax_cols(const double* x, double* y, int rows, int cols, Exec exec = Exec::parallel);
void softmax_cols_backward(const double* y, const double* dy, double* dx, int rows, int cols,
                           Exec exec = Exec::parallel);

// y[c] = mean over the spatial cells of x[c, :, :]
void mean_pool_forward(const double* x, double* y, int channels, int cells);
void mean_pool_backward(const double* dy, double* dx, int channels, int cells);

}  // namespace colonpose
