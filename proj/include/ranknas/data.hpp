#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "ranknas/matrix.hpp"
#include "ranknas/rng.hpp"

namespace ranknas {

/// Seeded Gaussian-blobs classification problem. Regenerating with the same
/// seed and size parameters yields bit-identical features and labels.
struct Dataset {
    Matrix features;          // n_samples × n_features
    std::vector<int> labels;  // class indices in [0, n_classes)
    uint64_t seed = 0;
    int n_classes = 0;
    double noise = 0.0;

    int n_samples() const { return features.rows; }
    int n_features() const { return features.cols; }
};

/// Three-way index split: super-net loss part, regularizer part, stand-alone
/// validation part. Pairwise disjoint, jointly exhaustive, each non-empty.
struct SplitSet {
    std::vector<int> train_w;
    std::vector<int> train_r;
    std::vector<int> valid;
    std::array<double, 3> fractions{};
    uint64_t seed = 0;
};

/// One shuffled minibatch.
struct Batch {
    Matrix X;
    std::vector<int> y;
};

/// n_classes cluster centers placed deterministically from seed on the unit
/// sphere; points drawn with isotropic noise. Labels are round-robin, so
/// per-class counts differ by at most 1.
Dataset generate_dataset(uint64_t seed, int n_samples, int n_features, int n_classes,
                         double noise);

/// Seeded permutation partitioned by the fractions (must sum to 1 within 1e-9).
SplitSet split_dataset(const Dataset& ds, std::array<double, 3> fractions, uint64_t seed);

/// One epoch of shuffled minibatches over idx; the last batch may be smaller.
std::vector<Batch> batches(const Dataset& ds, const std::vector<int>& idx, int batch_size,
                           Rng& rng);

/// Gathers the given rows into a single batch (no shuffling).
Batch gather(const Dataset& ds, const std::vector<int>& idx);

/// Line-delimited text export: header "n d c seed noise", then one line per
/// sample (d reals + label). Round-trips bit-exactly.
void save_dataset(const Dataset& ds, const std::filesystem::path& file);
Dataset load_dataset(const std::filesystem::path& file);

} // namespace ranknas
