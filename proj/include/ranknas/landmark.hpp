#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ranknas/cache.hpp"
#include "ranknas/data.hpp"
#include "ranknas/hparams.hpp"
#include "ranknas/rng.hpp"
#include "ranknas/space.hpp"

namespace ranknas {

struct SuperNet; // supernet.hpp

/// Architectures with known stand-alone performance, kept sorted ascending by
/// validation loss (best first). The sorted index order defines the pair
/// ordering the regularizer enforces.
struct LandmarkSet {
    std::vector<StandaloneResult> entries;

    int size() const { return static_cast<int>(entries.size()); }
    bool sorted() const;
    bool contains(const Architecture& a) const;
};

/// Stable ascending sort by valid_loss; ties keep insertion order.
void sort_landmarks(LandmarkSet& set);

/// Deduplicates by architecture (earlier record wins), merges, re-sorts.
LandmarkSet extend_landmarks(const LandmarkSet& set,
                             const std::vector<StandaloneResult>& fresh);

/// Warm-up + weighting schedule for the regularization coefficient.
/// lambda_at is 0 for t <= t_w in every mode; afterwards the mode shapes the
/// ramp over p = (t - t_w)/(t_total - t_w).
enum class ScheduleMode { CosIncrease, CosDecrease, Constant, StepIncrease, StepDecrease };

struct RegSchedule {
    double lambda_max = 10.0;
    int t_w = 0;      // warm-up epochs
    int t_total = 1;  // total epochs, > t_w
    ScheduleMode mode = ScheduleMode::CosIncrease;
};

const char* schedule_mode_name(ScheduleMode m);
ScheduleMode schedule_mode_from_name(const std::string& name);

double lambda_at(const RegSchedule& sched, int t);

/// Diverse landmark sampling: draws a root uniformly, then chains mutations
/// on fresh copies of the root until the Hamming distance exceeds tau,
/// collecting M distinct candidates (the root itself is not included). The
/// attempt budget counts individual mutation steps.
std::vector<Architecture> sample_landmarks(const SearchSpace& space, int M, int tau, Rng& rng,
                                           int64_t budget_per_landmark = 10000);

/// Budgeted SGD approximation of stand-alone optimal parameters: trains a
/// private single-path net on train_w ∪ train_r, evaluates on valid.
/// Cache-backed; the training rng derives from (hparams.standalone_seed,
/// arch), so results form a reusable benchmark table.
StandaloneResult train_standalone(const SearchSpace& space, const Architecture& arch,
                                  const Dataset& ds, const SplitSet& splits,
                                  const Hparams& hp, BenchmarkCache& cache);

/// Trains a batch of architectures, optionally in parallel (each run owns a
/// private net; the cache serializes writes). Results keep input order.
std::vector<StandaloneResult> train_standalone_batch(const SearchSpace& space,
                                                     const std::vector<Architecture>& archs,
                                                     const Dataset& ds, const SplitSet& splits,
                                                     const Hparams& hp, BenchmarkCache& cache,
                                                     int jobs = 1);

/// Pairwise hinge over losses listed in ground-truth order (best first):
/// Σ_{i<j} max(0, L_i − L_j). Zero iff the losses are non-decreasing.
double hinge_total(std::span<const double> losses);

/// Full pairwise hinge over the sorted landmark set on one batch:
/// R = Σ_{i<j} max(0, L_i − L_j), each landmark's super-net loss evaluated
/// exactly once (M forward passes).
double regularizer_full(const SuperNet& sn, const LandmarkSet& set, const Batch& batch);

/// m pairs drawn uniformly without replacement from the C(M,2) sorted pairs,
/// returned in lexicographic (i, j) order. m larger than C(M,2) clamps with a
/// warning on stderr.
std::vector<std::pair<int, int>> sample_pairs(int M, int m, Rng& rng);

struct SampledReg {
    double value = 0.0;
    std::vector<std::pair<int, int>> pairs;
};

/// Stochastic m-pair approximation of regularizer_full; only the sampled
/// pairs' losses are evaluated. Expectation over the pair draw equals
/// (m / C(M,2)) · regularizer_full.
SampledReg regularizer_sampled(const SuperNet& sn, const LandmarkSet& set, const Batch& batch,
                               int m, Rng& rng);

} // namespace ranknas
