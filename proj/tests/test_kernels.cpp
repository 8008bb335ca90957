#include <cmath>
#include <vector>

#include "doctest.h"
#include "ranknas/kernels.hpp"
#include "ranknas/rng.hpp"

using namespace ranknas;

namespace {

std::vector<double> random_vec(size_t n, Rng& rng) {
    std::vector<double> v(n);
    for (double& x : v) x = 2.0 * rng.next_real() - 1.0;
    return v;
}

struct GrainGuard {
    size_t saved = kernels::parallel_grain();
    explicit GrainGuard(size_t g) { kernels::set_parallel_grain(g); }
    ~GrainGuard() { kernels::set_parallel_grain(saved); }
};

} // namespace

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
    GrainGuard grain(1); // force the parallel path even for tiny shapes
    Rng rng(99);
    for (auto [n, k, m] : {std::tuple{1, 1, 2}, {7, 5, 3}, {64, 16, 16}, {33, 17, 9}}) {
        const auto x = random_vec(static_cast<size_t>(n) * k, rng);
        const auto w = random_vec(static_cast<size_t>(k) * m, rng);
        const auto b = random_vec(static_cast<size_t>(m), rng);
        const auto dy = random_vec(static_cast<size_t>(n) * m, rng);
        std::vector<int> labels(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            labels[i] = static_cast<int>(rng.next_below(static_cast<uint64_t>(m)));

        std::vector<double> a(static_cast<size_t>(n) * m, 0.5), bref = a;
        kernels::acc_linear(x.data(), n, k, w.data(), m, b.data(), a.data());
        kernels::reference::acc_linear(x.data(), n, k, w.data(), m, b.data(), bref.data());
        CHECK(a == bref);

        std::vector<double> y1(static_cast<size_t>(n) * k), y2 = y1;
        kernels::matmul_nt(dy.data(), n, m, w.data(), k, y1.data());
        kernels::reference::matmul_nt(dy.data(), n, m, w.data(), k, y2.data());
        CHECK(y1 == y2);

        std::vector<double> dw1(static_cast<size_t>(k) * m, 0.25), dw2 = dw1;
        kernels::acc_matmul_tn(x.data(), n, k, dy.data(), m, 1.7, dw1.data());
        kernels::reference::acc_matmul_tn(x.data(), n, k, dy.data(), m, 1.7, dw2.data());
        CHECK(dw1 == dw2);

        std::vector<double> db1(static_cast<size_t>(m), -0.5), db2 = db1;
        kernels::acc_colsum(dy.data(), n, m, 0.3, db1.data());
        kernels::reference::acc_colsum(dy.data(), n, m, 0.3, db2.data());
        CHECK(db1 == db2);

        std::vector<double> r1(x.size()), r2(x.size());
        kernels::relu(x.data(), x.size(), r1.data());
        kernels::reference::relu(x.data(), x.size(), r2.data());
        CHECK(r1 == r2);

        std::vector<double> m1(x.size(), 0.1), m2 = m1;
        kernels::acc_relu_mask(w.data(), x.data(), std::min(x.size(), w.size()), m1.data());
        kernels::reference::acc_relu_mask(w.data(), x.data(), std::min(x.size(), w.size()),
                                          m2.data());
        CHECK(m1 == m2);

        std::vector<double> av1(static_cast<size_t>(n) * k, 0.0), av2 = av1;
        kernels::acc_avgmix(x.data(), n, k, av1.data());
        kernels::reference::acc_avgmix(x.data(), n, k, av2.data());
        CHECK(av1 == av2);

        std::vector<double> dl1(static_cast<size_t>(n) * m), dl2(dl1.size());
        const double l1 = kernels::softmax_xent(dy.data(), n, m, labels.data(), dl1.data(), 2.0);
        const double l2 =
            kernels::reference::softmax_xent(dy.data(), n, m, labels.data(), dl2.data(), 2.0);
        CHECK(l1 == l2);
        CHECK(dl1 == dl2);

        CHECK(kernels::count_correct(dy.data(), n, m, labels.data()) ==
              kernels::reference::count_correct(dy.data(), n, m, labels.data()));
    }
}

TEST_CASE("acc_linear matches a hand-computed case") {
    // X = [[1, 2]], W = [[1, 0], [0, 1]], b = [10, 20]
    const std::vector<double> x{1.0, 2.0};
    const std::vector<double> w{1.0, 0.0, 0.0, 1.0};
    const std::vector<double> b{10.0, 20.0};
    std::vector<double> y{100.0, 200.0}; // accumulates
    kernels::acc_linear(x.data(), 1, 2, w.data(), 2, b.data(), y.data());
    CHECK(y[0] == 111.0);
    CHECK(y[1] == 222.0);
}

TEST_CASE("softmax cross-entropy of uniform logits is ln(c)") {
    const int n = 4, c = 5;
    std::vector<double> logits(static_cast<size_t>(n) * c, 0.7);
    std::vector<int> labels{0, 1, 2, 3};
    const double loss = kernels::softmax_xent(logits.data(), n, c, labels.data(), nullptr, 1.0);
    CHECK(loss == doctest::Approx(std::log(5.0)).epsilon(1e-12));
}

TEST_CASE("softmax gradient rows sum to zero and point away from the label") {
    Rng rng(5);
    const int n = 6, c = 4;
    const auto logits = random_vec(static_cast<size_t>(n) * c, rng);
    std::vector<int> labels{0, 1, 2, 3, 0, 1};
    std::vector<double> dl(logits.size());
    kernels::softmax_xent(logits.data(), n, c, labels.data(), dl.data(), 1.0);
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < c; ++j) row += dl[static_cast<size_t>(i) * c + j];
        CHECK(row == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(dl[static_cast<size_t>(i) * c + labels[i]] < 0.0); // label prob below 1
    }
}

TEST_CASE("count_correct breaks argmax ties toward the lowest class") {
    const std::vector<double> logits{1.0, 1.0, 0.5}; // tie between class 0 and 1
    int label0 = 0, label1 = 1;
    CHECK(kernels::count_correct(logits.data(), 1, 3, &label0) == 1);
    CHECK(kernels::count_correct(logits.data(), 1, 3, &label1) == 0);
}

TEST_CASE("avgmix applies a circular window-3 mean over coordinates") {
    // one row, m = 4: y[j] = (x[j-1] + x[j] + x[j+1]) / 3 circularly
    const std::vector<double> x{3.0, 6.0, 9.0, 12.0};
    std::vector<double> y(4, 0.0);
    kernels::acc_avgmix(x.data(), 1, 4, y.data());
    CHECK(y[0] == doctest::Approx((12.0 + 3.0 + 6.0) / 3.0));
    CHECK(y[1] == doctest::Approx((3.0 + 6.0 + 9.0) / 3.0));
    CHECK(y[2] == doctest::Approx((6.0 + 9.0 + 12.0) / 3.0));
    CHECK(y[3] == doctest::Approx((9.0 + 12.0 + 3.0) / 3.0));
}
