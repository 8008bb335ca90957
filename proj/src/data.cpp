#include "ranknas/data.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ranknas/errors.hpp"

namespace ranknas {

Dataset generate_dataset(uint64_t seed, int n_samples, int n_features, int n_classes,
                         double noise) {
    if (n_samples <= 0 || n_classes <= 0)
        throw std::invalid_argument("n_samples and n_classes must be positive");
    if (n_features < 2) throw std::invalid_argument("n_features must be at least 2");
    if (n_samples < n_classes)
        throw std::invalid_argument("need at least one sample per class");
    if (noise < 0.0) throw std::invalid_argument("noise must be non-negative");

    Rng rng(seed, "dataset");

    // Class centers: random directions normalized onto the unit sphere.
    Matrix centers(n_classes, n_features);
    for (int c = 0; c < n_classes; ++c) {
        double norm2 = 0.0;
        for (int j = 0; j < n_features; ++j) {
            const double g = rng.next_gaussian();
            centers(c, j) = g;
            norm2 += g * g;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (int j = 0; j < n_features; ++j) centers(c, j) *= inv;
    }

    Dataset ds;
    ds.features = Matrix(n_samples, n_features);
    ds.labels.resize(n_samples);
    ds.seed = seed;
    ds.n_classes = n_classes;
    ds.noise = noise;
    for (int i = 0; i < n_samples; ++i) {
        const int label = i % n_classes; // round-robin keeps classes balanced ±1
        ds.labels[i] = label;
        for (int j = 0; j < n_features; ++j)
            ds.features(i, j) = centers(label, j) + noise * rng.next_gaussian();
    }
    return ds;
}

SplitSet split_dataset(const Dataset& ds, std::array<double, 3> fractions, uint64_t seed) {
    double sum = 0.0;
    for (double f : fractions) {
        if (f <= 0.0) throw std::invalid_argument("each split fraction must be > 0");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("split fractions must sum to 1");

    const int n = ds.n_samples();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    Rng rng(seed, "split");
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next_below(static_cast<uint64_t>(i + 1)));
        std::swap(perm[i], perm[j]);
    }

    int n_w = static_cast<int>(std::llround(fractions[0] * n));
    int n_r = static_cast<int>(std::llround(fractions[1] * n));
    n_w = std::min(n_w, n - 2);
    n_r = std::min(n_r, n - n_w - 1);
    if (n_w < 1 || n_r < 1 || n - n_w - n_r < 1)
        throw std::invalid_argument("dataset too small for the requested split");

    SplitSet s;
    s.train_w.assign(perm.begin(), perm.begin() + n_w);
    s.train_r.assign(perm.begin() + n_w, perm.begin() + n_w + n_r);
    s.valid.assign(perm.begin() + n_w + n_r, perm.end());
    s.fractions = fractions;
    s.seed = seed;
    return s;
}

Batch gather(const Dataset& ds, const std::vector<int>& idx) {
    Batch b;
    b.X = Matrix(static_cast<int>(idx.size()), ds.n_features());
    b.y.resize(idx.size());
    for (size_t r = 0; r < idx.size(); ++r) {
        const int src = idx[r];
        for (int j = 0; j < ds.n_features(); ++j) b.X(static_cast<int>(r), j) = ds.features(src, j);
        b.y[r] = ds.labels[src];
    }
    return b;
}

std::vector<Batch> batches(const Dataset& ds, const std::vector<int>& idx, int batch_size,
                           Rng& rng) {
    if (batch_size <= 0) throw std::invalid_argument("batch_size must be positive");
    if (idx.empty()) throw std::invalid_argument("index list must be non-empty");

    std::vector<int> order = idx;
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next_below(static_cast<uint64_t>(i + 1)));
        std::swap(order[i], order[j]);
    }

    std::vector<Batch> out;
    for (size_t start = 0; start < order.size(); start += batch_size) {
        const size_t end = std::min(order.size(), start + batch_size);
        std::vector<int> chunk(order.begin() + start, order.begin() + end);
        out.push_back(gather(ds, chunk));
    }
    return out;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot open " + file.string() + " for writing");
    char buf[64];
    out << ds.n_samples() << ' ' << ds.n_features() << ' ' << ds.n_classes << ' ' << ds.seed
        << ' ';
    std::snprintf(buf, sizeof buf, "%.17g", ds.noise);
    out << buf << '\n';
    for (int i = 0; i < ds.n_samples(); ++i) {
        for (int j = 0; j < ds.n_features(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", ds.features(i, j));
            out << buf << ' ';
        }
        out << ds.labels[i] << '\n';
    }
    if (!out) throw IoError("write failed: " + file.string());
}

Dataset load_dataset(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    int n = 0, d = 0, c = 0;
    uint64_t seed = 0;
    double noise = 0.0;
    if (!(in >> n >> d >> c >> seed >> noise))
        throw IoError("bad dataset header in " + file.string());
    Dataset ds;
    ds.features = Matrix(n, d);
    ds.labels.resize(n);
    ds.seed = seed;
    ds.n_classes = c;
    ds.noise = noise;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j)
            if (!(in >> ds.features(i, j))) throw IoError("truncated dataset file");
        if (!(in >> ds.labels[i])) throw IoError("truncated dataset file");
    }
    return ds;
}

} // namespace ranknas
