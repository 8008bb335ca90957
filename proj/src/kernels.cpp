#include "ranknas/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace ranknas::kernels {

namespace {
std::atomic<size_t> g_grain{65536};

inline double row_loss(const double* z, int c, int label, double* dz, double inv_scale) {
    double mx = z[0];
    for (int j = 1; j < c; ++j) mx = std::max(mx, z[j]);
    double sum = 0.0;
    for (int j = 0; j < c; ++j) sum += std::exp(z[j] - mx);
    const double logsum = std::log(sum);
    if (dz) {
        for (int j = 0; j < c; ++j) {
            double p = std::exp(z[j] - mx) / sum;
            dz[j] = (p - (j == label ? 1.0 : 0.0)) * inv_scale;
        }
    }
    return logsum - (z[label] - mx);
}

inline int row_argmax(const double* z, int c) {
    int best = 0;
    for (int j = 1; j < c; ++j) {
        if (z[j] > z[best]) best = j;
    }
    return best;
}
} // namespace

void set_parallel_grain(size_t grain) { g_grain.store(grain); }
size_t parallel_grain() { return g_grain.load(); }

void acc_linear(const double* x, int n, int k, const double* w, int m, const double* b,
                double* y) {
    const size_t work = static_cast<size_t>(n) * m * k;
#pragma omp parallel for schedule(static) if (work >= parallel_grain())
    for (int i = 0; i < n; ++i) {
        const double* xi = x + static_cast<size_t>(i) * k;
        double* yi = y + static_cast<size_t>(i) * m;
        for (int j = 0; j < m; ++j) {
            double acc = b ? b[j] : 0.0;
            for (int p = 0; p < k; ++p) acc += xi[p] * w[static_cast<size_t>(p) * m + j];
            yi[j] += acc;
        }
    }
}

void matmul_nt(const double* a, int n, int m, const double* b, int k, double* y) {
    const size_t work = static_cast<size_t>(n) * k * m;
#pragma omp parallel for schedule(static) if (work >= parallel_grain())
    for (int i = 0; i < n; ++i) {
        const double* ai = a + static_cast<size_t>(i) * m;
        double* yi = y + static_cast<size_t>(i) * k;
        for (int j = 0; j < k; ++j) {
            const double* bj = b + static_cast<size_t>(j) * m;
            double acc = 0.0;
            for (int p = 0; p < m; ++p) acc += ai[p] * bj[p];
            yi[j] = acc;
        }
    }
}

void acc_matmul_tn(const double* x, int n, int k, const double* dy, int m, double scale,
                   double* dw) {
    // Each (p, j) weight-grad element owns its reduction over the batch, so
    // the summation order never depends on the thread count.
    const size_t work = static_cast<size_t>(k) * m * n;
#pragma omp parallel for schedule(static) if (work >= parallel_grain())
    for (int p = 0; p < k; ++p) {
        double* dwp = dw + static_cast<size_t>(p) * m;
        for (int j = 0; j < m; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += x[static_cast<size_t>(i) * k + p] * dy[static_cast<size_t>(i) * m + j];
            dwp[j] += scale * acc;
        }
    }
}

void acc_colsum(const double* dy, int n, int m, double scale, double* db) {
    const size_t work = static_cast<size_t>(n) * m;
#pragma omp parallel for schedule(static) if (work >= parallel_grain())
    for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += dy[static_cast<size_t>(i) * m + j];
        db[j] += scale * acc;
    }
}

void acc_add(const double* x, size_t count, double* y) {
#pragma omp parallel for schedule(static) if (count >= parallel_grain())
    for (long long i = 0; i < static_cast<long long>(count); ++i) y[i] += x[i];
}

void relu(const double* x, size_t count, double* y) {
#pragma omp parallel for schedule(static) if (count >= parallel_grain())
    for (long long i = 0; i < static_cast<long long>(count); ++i)
        y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void acc_relu_mask(const double* src, const double* x, size_t count, double* y) {
#pragma omp parallel for schedule(static) if (count >= parallel_grain())
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
        if (x[i] > 0.0) y[i] += src[i];
    }
}

void acc_avgmix(const double* x, int n, int m, double* y) {
    const size_t work = static_cast<size_t>(n) * m;
#pragma omp parallel for schedule(static) if (work >= parallel_grain())
    for (int i = 0; i < n; ++i) {
        const double* xi = x + static_cast<size_t>(i) * m;
        double* yi = y + static_cast<size_t>(i) * m;
        for (int j = 0; j < m; ++j) {
            const int l = (j - 1 + m) % m;
            const int r = (j + 1) % m;
            yi[j] += (xi[l] + xi[j] + xi[r]) / 3.0;
        }
    }
}

double softmax_xent(const double* logits, int n, int c, const int* labels, double* dlogits,
                    double scale) {
    std::vector<double> losses(static_cast<size_t>(n));
    const double inv_scale = scale / n;
    const size_t work = static_cast<size_t>(n) * c;
#pragma omp parallel for schedule(static) if (work >= parallel_grain())
    for (int i = 0; i < n; ++i) {
        losses[i] = row_loss(logits + static_cast<size_t>(i) * c, c, labels[i],
                             dlogits ? dlogits + static_cast<size_t>(i) * c : nullptr,
                             inv_scale);
    }
    // Fixed-order reduction keeps the mean independent of the thread count.
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += losses[i];
    return total / n;
}

int count_correct(const double* logits, int n, int c, const int* labels) {
    int correct = 0;
    const size_t work = static_cast<size_t>(n) * c;
#pragma omp parallel for schedule(static) reduction(+ : correct) if (work >= parallel_grain())
    for (int i = 0; i < n; ++i) {
        if (row_argmax(logits + static_cast<size_t>(i) * c, c) == labels[i]) ++correct;
    }
    return correct;
}

namespace reference {

void acc_linear(const double* x, int n, int k, const double* w, int m, const double* b,
                double* y) {
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            double acc = b ? b[j] : 0.0;
            for (int p = 0; p < k; ++p)
                acc += x[static_cast<size_t>(i) * k + p] * w[static_cast<size_t>(p) * m + j];
            y[static_cast<size_t>(i) * m + j] += acc;
        }
    }
}

void matmul_nt(const double* a, int n, int m, const double* b, int k, double* y) {
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) {
            double acc = 0.0;
            for (int p = 0; p < m; ++p)
                acc += a[static_cast<size_t>(i) * m + p] * b[static_cast<size_t>(j) * m + p];
            y[static_cast<size_t>(i) * k + j] = acc;
        }
    }
}

void acc_matmul_tn(const double* x, int n, int k, const double* dy, int m, double scale,
                   double* dw) {
    for (int p = 0; p < k; ++p) {
        for (int j = 0; j < m; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += x[static_cast<size_t>(i) * k + p] * dy[static_cast<size_t>(i) * m + j];
            dw[static_cast<size_t>(p) * m + j] += scale * acc;
        }
    }
}

void acc_colsum(const double* dy, int n, int m, double scale, double* db) {
    for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += dy[static_cast<size_t>(i) * m + j];
        db[j] += scale * acc;
    }
}

void acc_add(const double* x, size_t count, double* y) {
    for (size_t i = 0; i < count; ++i) y[i] += x[i];
}

void relu(const double* x, size_t count, double* y) {
    for (size_t i = 0; i < count; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void acc_relu_mask(const double* src, const double* x, size_t count, double* y) {
    for (size_t i = 0; i < count; ++i) {
        if (x[i] > 0.0) y[i] += src[i];
    }
}

void acc_avgmix(const double* x, int n, int m, double* y) {
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            const int l = (j - 1 + m) % m;
            const int r = (j + 1) % m;
            y[static_cast<size_t>(i) * m + j] +=
                (x[static_cast<size_t>(i) * m + l] + x[static_cast<size_t>(i) * m + j] +
                 x[static_cast<size_t>(i) * m + r]) /
                3.0;
        }
    }
}

double softmax_xent(const double* logits, int n, int c, const int* labels, double* dlogits,
                    double scale) {
    const double inv_scale = scale / n;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        total += row_loss(logits + static_cast<size_t>(i) * c, c, labels[i],
                          dlogits ? dlogits + static_cast<size_t>(i) * c : nullptr, inv_scale);
    }
    return total / n;
}

int count_correct(const double* logits, int n, int c, const int* labels) {
    int correct = 0;
    for (int i = 0; i < n; ++i) {
        if (row_argmax(logits + static_cast<size_t>(i) * c, c) == labels[i]) ++correct;
    }
    return correct;
}

} // namespace reference

} // namespace ranknas::kernels
