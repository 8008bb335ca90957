#include "ranknas/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "ranknas/errors.hpp"

namespace ranknas {

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    if (n != y.size()) throw std::invalid_argument("lists must have equal length");
    if (n < 2) throw std::invalid_argument("need at least 2 observations");

    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0.0 && dy == 0.0) {
                ++ties_x;
                ++ties_y;
            } else if (dx == 0.0) {
                ++ties_x;
            } else if (dy == 0.0) {
                ++ties_y;
            } else if ((dx > 0.0) == (dy > 0.0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }

    const long long n0 = static_cast<long long>(n) * (n - 1) / 2;
    if (ties_x == n0 || ties_y == n0)
        throw UndefinedStatisticError("tau-b is undefined when a list is all ties");
    const double denom = std::sqrt(static_cast<double>(n0 - ties_x) *
                                   static_cast<double>(n0 - ties_y));
    return static_cast<double>(concordant - discordant) / denom;
}

double sparse_kendall_tau(std::span<const double> gt_acc_percent,
                          std::span<const double> proxy_acc, double bin) {
    if (bin <= 0.0) throw std::invalid_argument("bin must be positive");
    std::vector<double> quantized(gt_acc_percent.size());
    for (size_t i = 0; i < gt_acc_percent.size(); ++i)
        quantized[i] = static_cast<double>(std::llround(gt_acc_percent[i] / bin));
    return kendall_tau_b(quantized, proxy_acc);
}

ProbeResult probe_skdt(const SuperNet& sn, const LandmarkSet& exclude, const Dataset& ds,
                       const SplitSet& splits, const Hparams& hp, BenchmarkCache& cache,
                       int k, double bin, Rng& rng, int jobs) {
    if (k < 2) throw std::invalid_argument("probe needs k >= 2");

    // Rejection-sample k distinct non-landmark architectures.
    std::set<std::string> seen;
    std::vector<Architecture> archs;
    int64_t attempts = 0;
    const int64_t budget = 10000LL * k;
    while (static_cast<int>(archs.size()) < k) {
        if (attempts++ > budget)
            throw std::invalid_argument(
                "cannot sample enough non-landmark architectures for the probe");
        Architecture a = random_architecture(sn.space, rng);
        if (exclude.contains(a)) continue;
        if (seen.insert(a.to_string()).second) archs.push_back(a);
    }

    auto gt = train_standalone_batch(sn.space, archs, ds, splits, hp, cache, jobs);

    ProbeResult out;
    out.sample.archs = archs;
    const Batch vb = gather(ds, splits.valid);
    for (size_t i = 0; i < archs.size(); ++i) {
        out.sample.gt_acc.push_back(gt[i].valid_acc);
        out.sample.proxy_acc.push_back(evaluate(sn.net, archs[i], vb).accuracy);
    }

    std::vector<double> gt_percent(out.sample.gt_acc);
    for (double& v : gt_percent) v *= 100.0;
    out.report.n = k;
    out.report.kdt = kendall_tau_b(out.sample.gt_acc, out.sample.proxy_acc);
    out.report.skdt = sparse_kendall_tau(gt_percent, out.sample.proxy_acc, bin);
    out.report.mean_acc = 0.0;
    out.report.best_acc = 0.0;
    for (double a : out.sample.gt_acc) {
        out.report.mean_acc += a;
        out.report.best_acc = std::max(out.report.best_acc, a);
    }
    out.report.mean_acc /= k;

    // best-by-proxy architecture, ties to the lowest canonical string
    size_t best = 0;
    for (size_t i = 1; i < archs.size(); ++i) {
        if (out.sample.proxy_acc[i] > out.sample.proxy_acc[best] ||
            (out.sample.proxy_acc[i] == out.sample.proxy_acc[best] &&
             archs[i].to_string() < archs[best].to_string()))
            best = i;
    }
    out.report.best_rank = exhaustive_rank(cache, sn.space, hp, ds, splits, archs[best]);
    return out;
}

std::optional<int> exhaustive_rank(const BenchmarkCache& cache, const SearchSpace& space,
                                   const Hparams& hp, const Dataset& ds,
                                   const SplitSet& splits, const Architecture& arch) {
    const uint64_t hp_hash = hparams_hash(hp, ds, splits);
    const uint64_t n = space.num_architectures();
    if (n > 1000000) return std::nullopt;
    const auto table = cache.table_for(space.name, hp_hash, hp.standalone_seed);
    if (table.size() != n) return std::nullopt;

    const auto it = table.find(arch.to_string());
    if (it == table.end()) return std::nullopt;
    const double acc = it->second.valid_acc;
    int rank = 1;
    for (const auto& [key, r] : table) {
        if (r.valid_acc > acc) ++rank;
    }
    return rank;
}

} // namespace ranknas
