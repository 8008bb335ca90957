#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ranknas/data.hpp"
#include "ranknas/hparams.hpp"
#include "ranknas/landmark.hpp"
#include "ranknas/nn.hpp"
#include "ranknas/rng.hpp"
#include "ranknas/space.hpp"

namespace ranknas {

/// Weight-sharing net over the full (edge, op) grid. Evaluating an
/// architecture activates only its path through the shared parameters.
struct SuperNet {
    CellNet net;
    SearchSpace space;
    int64_t step_counter = 0;
    int64_t epoch_counter = 0;
};

SuperNet make_supernet(const SearchSpace& space, int width, int in_dim, int n_classes,
                       Rng& rng);

/// Uniform single-path sampling (SPOS). Named strategy point so biased
/// samplers can be swapped in later.
Architecture sample_path_uniform(const SearchSpace& space, Rng& rng);

/// Evaluation-only cross-entropy of one path through the shared weights.
double supernet_loss(const SuperNet& sn, const Architecture& arch, const Batch& batch);

struct TrainStepReport {
    double task_loss = 0.0;
    double reg_loss = 0.0; // R before λ weighting, so λ sweeps stay comparable
    double lambda = 0.0;
    Architecture path;
    std::vector<std::pair<int, int>> pair_ids;
};

/// One landmark-regularized training step (task loss on batch_w, sampled
/// hinge pairs on batch_r, one SGD step over the union of touched
/// parameters). Pair-sampling rng draws happen only when λ_t > 0 and the
/// landmark set has at least 2 entries, so a λ_max = 0 run consumes the rng
/// exactly like plain SPOS. batch_r may be null when the regularizer is
/// inactive. The schedule index t is the 1-based current epoch.
TrainStepReport train_step(SuperNet& sn, const Batch& batch_w, const Batch* batch_r,
                           const LandmarkSet& landmarks, const RegSchedule& sched, int m,
                           const Hparams& hp, Rng& rng);

/// Plain SPOS step with no regularizer logic at all; kept as the baseline
/// reference path.
TrainStepReport train_step_plain(SuperNet& sn, const Batch& batch_w, const Hparams& hp,
                                 Rng& rng);

struct EpochSummary {
    int epoch = 0; // 1-based epoch index this summary covers
    double mean_task_loss = 0.0;
    double mean_reg_loss = 0.0;
    double lambda = 0.0;
    int steps = 0;
};

/// Cosine decay of the super-net learning rate from supernet_lr to
/// supernet_lr_min over the t_total epoch budget (t is the 1-based epoch).
double supernet_lr_at(const Hparams& hp, int t, int t_total);

/// One epoch over shuffled train_w batches, each paired with a cycled train_r
/// batch when the regularizer is active. The learning rate follows
/// supernet_lr_at over sched.t_total. Increments the epoch counter.
EpochSummary train_epoch(SuperNet& sn, const Dataset& ds, const SplitSet& splits,
                         const LandmarkSet& landmarks, const RegSchedule& sched, int m,
                         const Hparams& hp, Rng& rng);

/// Epoch loop over train_step_plain with no landmark code path at all; the
/// baseline-equivalence check builds a tool around it. Uses the same lr decay
/// over t_total.
EpochSummary train_epoch_plain(SuperNet& sn, const Dataset& ds, const SplitSet& splits,
                               const Hparams& hp, int t_total, Rng& rng);

} // namespace ranknas
