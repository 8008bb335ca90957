#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ranknas/cache.hpp"
#include "ranknas/data.hpp"
#include "ranknas/hparams.hpp"
#include "ranknas/landmark.hpp"
#include "ranknas/metrics.hpp"
#include "ranknas/space.hpp"
#include "ranknas/supernet.hpp"

namespace ranknas {

struct EvoConfig {
    int population = 32;
    int generations = 10;
    double parent_fraction = 0.25;
    int mutation_per_child = 1;
    int topk = 10;
};

struct ScoredArch {
    Architecture arch;
    double fitness = 0.0; // super-net accuracy on the probe batches
};

/// Evolutionary search over the trained super-net. Fitness is accuracy on a
/// fixed probe batch set; every evaluated architecture enters an archive and
/// the topk distinct ever evaluated come back sorted by fitness descending,
/// ties broken by canonical arch string. `initial` overrides the random
/// initial population (used by the exhaustive oracle tests).
std::vector<ScoredArch> evolutionary_search(const SuperNet& sn,
                                            const std::vector<Batch>& probe_batches,
                                            const EvoConfig& cfg, Rng& rng,
                                            const std::vector<Architecture>* initial = nullptr);

struct PipelineConfig {
    int T = 3;              // outer iterations
    int M = 6;              // landmarks per iteration
    int m = 1;              // hinge pairs per step
    int tau = 2;            // landmark sampling distance threshold
    RegSchedule sched;      // t_total is forced to T * epochs_per_iter
    int epochs_per_iter = 20;
    EvoConfig evo;
    std::vector<uint64_t> seeds{1, 2, 3};
    Hparams hparams;
    int probe_k = 20;       // architectures per S-KdT probe
    double skdt_bin = 0.1;  // percent-point quantization for S-KdT
    int jobs = 1;           // stand-alone training parallelism (results identical)
};

struct IterationStats {
    int iter = 0;
    double skdt = 0.0;
    double mean_landmark_acc = 0.0;
    int landmark_count = 0;
    RankingReport probe;
};

struct PipelineReport {
    std::vector<IterationStats> iterations;
    std::vector<EpochSummary> epoch_log;
    std::vector<ProbeResult> probes; // one per iteration, for ranking.csv
    Architecture final_arch;
    StandaloneResult final_result;
    std::optional<int> final_rank; // exhaustive-oracle rank when available
    std::vector<StandaloneResult> candidates; // the final-choice pool
    LandmarkSet landmarks;
    double standalone_wall_s = 0.0; // informational, not reproducible
};

/// Alternates landmark-regularized super-net training with landmark-set
/// growth: iteration 1 seeds the landmarks by diverse sampling; each
/// iteration trains epochs_per_iter epochs, proposes candidates by
/// evolutionary search, stand-alone-trains the top M new ones and merges
/// them. The final architecture is the ground-truth argmin over the
/// evolution-proposed, stand-alone-trained candidates of all iterations.
PipelineReport run_pipeline(const PipelineConfig& cfg, const SearchSpace& space,
                            const Dataset& ds, const SplitSet& splits, BenchmarkCache& cache,
                            uint64_t seed);

struct ABRow {
    uint64_t seed = 0;
    std::string arm; // "baseline" or "regularized"
    double skdt = 0.0;
    std::string final_arch;
    double final_acc = 0.0;
};

struct ABReport {
    std::vector<ABRow> rows;
    std::vector<PipelineReport> baseline_reports;
    std::vector<PipelineReport> regularized_reports;
    double mean_skdt_baseline = 0.0, std_skdt_baseline = 0.0;
    double mean_skdt_regularized = 0.0, std_skdt_regularized = 0.0;
    double mean_acc_baseline = 0.0, mean_acc_regularized = 0.0;
    int seeds_with_positive_delta = 0;
};

/// Runs the pipeline twice per seed with identical seeds and epoch budgets:
/// once with λ_max forced to 0 and once as configured.
ABReport run_baseline_vs_regularized(const PipelineConfig& cfg, const SearchSpace& space,
                                     const Dataset& ds, const SplitSet& splits,
                                     BenchmarkCache& cache);

} // namespace ranknas
