// Benchmark of the OpenMP kernels against the serial reference. Verifies
// bit-identical outputs while it runs; mismatches abort with a message.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ranknas/kernels.hpp"
#include "ranknas/rng.hpp"

using namespace ranknas;

namespace {

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::vector<double> random_vec(size_t n, Rng& rng) {
    std::vector<double> v(n);
    for (double& x : v) x = 2.0 * rng.next_real() - 1.0;
    return v;
}

void require_equal(const std::vector<double>& a, const std::vector<double>& b,
                   const char* what) {
    if (a != b) {
        std::fprintf(stderr, "FATAL: %s differs between serial and OpenMP\n", what);
        std::exit(1);
    }
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e30;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_s();
        f();
        best = std::min(best, now_s() - t0);
    }
    return best;
}

void bench_size(int n, int k, int m, int reps) {
    Rng rng(1234);
    const auto x = random_vec(static_cast<size_t>(n) * k, rng);
    const auto w = random_vec(static_cast<size_t>(k) * m, rng);
    const auto b = random_vec(static_cast<size_t>(m), rng);
    const auto dy = random_vec(static_cast<size_t>(n) * m, rng);
    std::vector<int> labels(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        labels[i] = static_cast<int>(rng.next_below(static_cast<uint64_t>(m)));

    std::vector<double> y_ser(static_cast<size_t>(n) * m, 0.0), y_par = y_ser;
    std::vector<double> dw_ser(static_cast<size_t>(k) * m, 0.0), dw_par = dw_ser;
    std::vector<double> dl_ser(static_cast<size_t>(n) * m, 0.0), dl_par = dl_ser;

    const double t_lin_ser = time_best_of(reps, [&] {
        std::fill(y_ser.begin(), y_ser.end(), 0.0);
        kernels::reference::acc_linear(x.data(), n, k, w.data(), m, b.data(), y_ser.data());
    });
    const double t_lin_par = time_best_of(reps, [&] {
        std::fill(y_par.begin(), y_par.end(), 0.0);
        kernels::acc_linear(x.data(), n, k, w.data(), m, b.data(), y_par.data());
    });
    require_equal(y_ser, y_par, "acc_linear");

    const double t_tn_ser = time_best_of(reps, [&] {
        std::fill(dw_ser.begin(), dw_ser.end(), 0.0);
        kernels::reference::acc_matmul_tn(x.data(), n, k, dy.data(), m, 1.0, dw_ser.data());
    });
    const double t_tn_par = time_best_of(reps, [&] {
        std::fill(dw_par.begin(), dw_par.end(), 0.0);
        kernels::acc_matmul_tn(x.data(), n, k, dy.data(), m, 1.0, dw_par.data());
    });
    require_equal(dw_ser, dw_par, "acc_matmul_tn");

    double loss_ser = 0.0, loss_par = 0.0;
    const double t_sm_ser = time_best_of(reps, [&] {
        loss_ser = kernels::reference::softmax_xent(dy.data(), n, m, labels.data(),
                                                    dl_ser.data(), 1.0);
    });
    const double t_sm_par = time_best_of(reps, [&] {
        loss_par = kernels::softmax_xent(dy.data(), n, m, labels.data(), dl_par.data(), 1.0);
    });
    require_equal(dl_ser, dl_par, "softmax_xent grads");
    if (loss_ser != loss_par) {
        std::fprintf(stderr, "FATAL: softmax_xent loss differs\n");
        std::exit(1);
    }

    auto speedup = [](double ser, double par) { return par > 0.0 ? ser / par : 0.0; };
    std::printf("%5d x %4d x %4d | %9.3f %9.3f %5.2fx | %9.3f %9.3f %5.2fx | %9.3f %9.3f %5.2fx\n",
                n, k, m, 1e3 * t_lin_ser, 1e3 * t_lin_par, speedup(t_lin_ser, t_lin_par),
                1e3 * t_tn_ser, 1e3 * t_tn_par, speedup(t_tn_ser, t_tn_par), 1e3 * t_sm_ser,
                1e3 * t_sm_par, speedup(t_sm_ser, t_sm_par));
}

} // namespace

int main(int argc, char** argv) {
    int reps = 5;
    if (argc > 1) reps = std::atoi(argv[1]);
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled (serial build)\n");
#endif
    std::printf("times in ms (best of %d), serial / parallel / speedup\n\n", reps);
    std::printf("%5s x %4s x %4s | %27s | %27s | %27s\n", "n", "k", "m", "acc_linear",
                "acc_matmul_tn", "softmax_xent");
    bench_size(64, 16, 16, reps);
    bench_size(256, 64, 64, reps);
    bench_size(1024, 128, 128, reps);
    bench_size(2048, 256, 256, reps);
    bench_size(4096, 512, 128, reps);
    std::printf("\nall kernel outputs bit-identical between serial and OpenMP\n");
    return 0;
}
