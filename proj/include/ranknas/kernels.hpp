#pragma once

#include <cstddef>
#include <vector>

#include "ranknas/matrix.hpp"

namespace ranknas::kernels {

/// Minimum number of output elements before a kernel goes parallel.
/// Below it the OpenMP fork/join overhead dominates at these sizes.
void set_parallel_grain(size_t grain);
size_t parallel_grain();

// All kernels assign each output element to exactly one thread and run the
// inner accumulation in a fixed serial order, so results are bit-identical
// to the serial reference at any thread count.

/// Y += X*W (+ b broadcast over rows). X: n×k, W: k×m, b: m or nullptr, Y: n×m.
void acc_linear(const double* x, int n, int k, const double* w, int m, const double* b,
                double* y);

/// Y = A*B^T. A: n×m, B: k×m, Y: n×k.
void matmul_nt(const double* a, int n, int m, const double* b, int k, double* y);

/// dW += scale * X^T*dY. X: n×k, dY: n×m, dW: k×m.
void acc_matmul_tn(const double* x, int n, int k, const double* dy, int m, double scale,
                   double* dw);

/// db += scale * column sums of dY. dY: n×m, db: m.
void acc_colsum(const double* dy, int n, int m, double scale, double* db);

/// Y += X, elementwise.
void acc_add(const double* x, size_t count, double* y);

/// Y = max(0, X), elementwise.
void relu(const double* x, size_t count, double* y);

/// Y += src where X > 0 (relu backward through pre-activation X).
void acc_relu_mask(const double* src, const double* x, size_t count, double* y);

/// Y += circular moving average of X over columns, window 3. X, Y: n×m.
/// The window is symmetric, so this kernel is its own adjoint.
void acc_avgmix(const double* x, int n, int m, double* y);

/// Mean softmax cross-entropy over the batch. If dlogits is non-null it is
/// overwritten with scale/n * (softmax - onehot), the gradient of
/// scale * mean loss. logits: n×c, labels in [0, c).
double softmax_xent(const double* logits, int n, int c, const int* labels, double* dlogits,
                    double scale);

/// Count of rows whose argmax equals the label; ties break to the lowest
/// class index.
int count_correct(const double* logits, int n, int c, const int* labels);

/// Serial reference implementations, kept for testing and benchmarking the
/// OpenMP kernels against. Same contracts as above.
namespace reference {
void acc_linear(const double* x, int n, int k, const double* w, int m, const double* b,
                double* y);
void matmul_nt(const double* a, int n, int m, const double* b, int k, double* y);
void acc_matmul_tn(const double* x, int n, int k, const double* dy, int m, double scale,
                   double* dw);
void acc_colsum(const double* dy, int n, int m, double scale, double* db);
void acc_add(const double* x, size_t count, double* y);
void relu(const double* x, size_t count, double* y);
void acc_relu_mask(const double* src, const double* x, size_t count, double* y);
void acc_avgmix(const double* x, int n, int m, double* y);
double softmax_xent(const double* logits, int n, int c, const int* labels, double* dlogits,
                    double scale);
int count_correct(const double* logits, int n, int c, const int* labels);
} // namespace reference

} // namespace ranknas::kernels
