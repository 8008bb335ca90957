#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ranknas/cache.hpp"
#include "ranknas/data.hpp"
#include "ranknas/hparams.hpp"
#include "ranknas/landmark.hpp"
#include "ranknas/space.hpp"
#include "ranknas/supernet.hpp"

namespace ranknas {

/// Kendall tau-b with tie correction, by direct O(n²) pair enumeration:
/// (C − D) / sqrt((n0 − n_x)(n0 − n_y)). Throws UndefinedStatisticError when
/// either list is all ties.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

/// Sparse Kendall-Tau: ground-truth accuracies (in percent) are rounded to
/// the nearest multiple of `bin` so near-ties stop counting as rank
/// violations, then tau-b of (quantized gt, proxy).
double sparse_kendall_tau(std::span<const double> gt_acc_percent,
                          std::span<const double> proxy_acc, double bin = 0.1);

/// Paired (architecture, ground-truth, proxy) sample; landmark architectures
/// are excluded at construction.
struct RankingSample {
    std::vector<Architecture> archs;
    std::vector<double> gt_acc;    // stand-alone validation accuracy, fraction
    std::vector<double> proxy_acc; // super-net validation accuracy, fraction
};

struct RankingReport {
    double skdt = 0.0;
    double kdt = 0.0;
    int n = 0;
    double mean_acc = 0.0; // mean ground-truth accuracy of the sample
    double best_acc = 0.0; // best ground-truth accuracy of the sample
    // Exhaustive-oracle rank (1 = best) of the sample's best-by-proxy
    // architecture; present when the cache holds the full space table.
    std::optional<int> best_rank;
};

struct ProbeResult {
    RankingSample sample;
    RankingReport report;
};

/// Samples k distinct architectures uniformly (excluding landmarks), obtains
/// ground truth via the cache-backed stand-alone trainer and proxies via
/// super-net accuracy on the valid split.
ProbeResult probe_skdt(const SuperNet& sn, const LandmarkSet& exclude, const Dataset& ds,
                       const SplitSet& splits, const Hparams& hp, BenchmarkCache& cache,
                       int k, double bin, Rng& rng, int jobs = 1);

/// Rank (1 = best ground-truth accuracy) of `arch` in the exhaustive table
/// for the given key, or nullopt when the table is incomplete.
std::optional<int> exhaustive_rank(const BenchmarkCache& cache, const SearchSpace& space,
                                   const Hparams& hp, const Dataset& ds,
                                   const SplitSet& splits, const Architecture& arch);

} // namespace ranknas
