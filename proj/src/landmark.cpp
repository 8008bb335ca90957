#include "ranknas/landmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ranknas/errors.hpp"
#include "ranknas/nn.hpp"
#include "ranknas/supernet.hpp"

namespace ranknas {

bool LandmarkSet::sorted() const {
    for (size_t i = 1; i < entries.size(); ++i)
        if (entries[i - 1].valid_loss > entries[i].valid_loss) return false;
    return true;
}

bool LandmarkSet::contains(const Architecture& a) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const StandaloneResult& r) { return r.arch == a; });
}

void sort_landmarks(LandmarkSet& set) {
    std::stable_sort(set.entries.begin(), set.entries.end(),
                     [](const StandaloneResult& a, const StandaloneResult& b) {
                         return a.valid_loss < b.valid_loss;
                     });
}

LandmarkSet extend_landmarks(const LandmarkSet& set,
                             const std::vector<StandaloneResult>& fresh) {
    LandmarkSet out = set;
    for (const StandaloneResult& r : fresh) {
        if (!out.contains(r.arch)) out.entries.push_back(r);
    }
    sort_landmarks(out);
    return out;
}

const char* schedule_mode_name(ScheduleMode m) {
    switch (m) {
    case ScheduleMode::CosIncrease: return "cos_increase";
    case ScheduleMode::CosDecrease: return "cos_decrease";
    case ScheduleMode::Constant: return "constant";
    case ScheduleMode::StepIncrease: return "step_increase";
    case ScheduleMode::StepDecrease: return "step_decrease";
    }
    return "?";
}

ScheduleMode schedule_mode_from_name(const std::string& name) {
    if (name == "cos_increase") return ScheduleMode::CosIncrease;
    if (name == "cos_decrease") return ScheduleMode::CosDecrease;
    if (name == "constant") return ScheduleMode::Constant;
    if (name == "step_increase") return ScheduleMode::StepIncrease;
    if (name == "step_decrease") return ScheduleMode::StepDecrease;
    throw std::invalid_argument("unknown schedule mode: " + name);
}

double lambda_at(const RegSchedule& sched, int t) {
    if (sched.t_w >= sched.t_total)
        throw std::invalid_argument("schedule requires t_w < t_total");
    if (t < 0 || t > sched.t_total)
        throw std::invalid_argument("schedule index out of range");
    if (t <= sched.t_w || sched.lambda_max <= 0.0) return 0.0;

    const double p = static_cast<double>(t - sched.t_w) /
                     static_cast<double>(sched.t_total - sched.t_w);
    double v = 0.0;
    switch (sched.mode) {
    case ScheduleMode::CosIncrease:
        v = sched.lambda_max * (1.0 - std::cos(M_PI * p)) / 2.0;
        break;
    case ScheduleMode::CosDecrease:
        v = sched.lambda_max * (1.0 + std::cos(M_PI * p)) / 2.0;
        break;
    case ScheduleMode::Constant:
        v = sched.lambda_max;
        break;
    case ScheduleMode::StepIncrease:
        v = sched.lambda_max * (std::floor(4.0 * p) + 1.0) / 4.0;
        break;
    case ScheduleMode::StepDecrease:
        v = sched.lambda_max * (4.0 - std::floor(4.0 * p)) / 4.0;
        break;
    }
    return std::clamp(v, 0.0, sched.lambda_max);
}

std::vector<Architecture> sample_landmarks(const SearchSpace& space, int M, int tau, Rng& rng,
                                           int64_t budget_per_landmark) {
    if (M <= 0) throw std::invalid_argument("M must be positive");
    if (tau <= 0) throw std::invalid_argument("tau must be positive");
    if (tau >= space.n_edges()) {
        std::ostringstream msg;
        msg << "tau " << tau << " is infeasible: Hamming distance cannot exceed "
            << space.n_edges();
        throw InfeasibleThresholdError(msg.str());
    }

    const Architecture root = random_architecture(space, rng);
    std::set<std::string> seen;
    std::vector<Architecture> out;
    int64_t budget = budget_per_landmark * M;

    while (static_cast<int>(out.size()) < M) {
        Architecture cand = root;
        while (hamming_distance(cand, root) <= tau) {
            if (budget-- <= 0) {
                std::ostringstream msg;
                msg << "mutation budget exhausted with " << out.size() << "/" << M
                    << " landmarks at tau " << tau << " in space " << space.name;
                throw InfeasibleThresholdError(msg.str());
            }
            cand = mutate(space, cand, rng);
        }
        if (seen.insert(cand.to_string()).second) out.push_back(cand);
    }
    return out;
}

StandaloneResult train_standalone(const SearchSpace& space, const Architecture& arch,
                                  const Dataset& ds, const SplitSet& splits,
                                  const Hparams& hp, BenchmarkCache& cache) {
    const uint64_t hp_hash = hparams_hash(hp, ds, splits);
    if (auto hit = cache.lookup(space.name, arch, hp_hash, hp.standalone_seed)) {
        if (hit->failed())
            throw NumericOverflowError("cached stand-alone run failed for arch " +
                                       arch.to_string());
        return *hit;
    }

    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(derive_seed(hp.standalone_seed, arch.to_string()));

    CellNet net = init_params(space, hp.width, ds.n_features(), ds.n_classes, rng, &arch);

    std::vector<int> train_idx = splits.train_w;
    train_idx.insert(train_idx.end(), splits.train_r.begin(), splits.train_r.end());

    StandaloneResult r;
    r.arch = arch;
    r.seed = hp.standalone_seed;
    r.hparams_hash = hp_hash;
    try {
        for (int epoch = 0; epoch < hp.standalone_epochs; ++epoch) {
            for (const Batch& b : batches(ds, train_idx, hp.batch_size, rng)) {
                loss_grad(net, arch, b.X, b.y);
                sgd_step(net, arch, hp.standalone_lr, hp.standalone_momentum,
                         hp.standalone_weight_decay);
            }
        }
        const Batch vb = gather(ds, splits.valid);
        const EvalResult ev = evaluate(net, arch, vb);
        r.valid_loss = ev.loss;
        r.valid_acc = ev.accuracy;
    } catch (const NumericOverflowError&) {
        r.valid_loss = std::numeric_limits<double>::infinity();
        r.valid_acc = 0.0;
        r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count();
        cache.insert(space.name, r);
        throw;
    }
    r.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    cache.insert(space.name, r);
    return r;
}

std::vector<StandaloneResult> train_standalone_batch(const SearchSpace& space,
                                                     const std::vector<Architecture>& archs,
                                                     const Dataset& ds,
                                                     const SplitSet& splits,
                                                     const Hparams& hp, BenchmarkCache& cache,
                                                     int jobs) {
    std::vector<StandaloneResult> out(archs.size());
    if (jobs <= 1) {
        for (size_t i = 0; i < archs.size(); ++i)
            out[i] = train_standalone(space, archs[i], ds, splits, hp, cache);
        return out;
    }
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (long long i = 0; i < static_cast<long long>(archs.size()); ++i) {
        try {
            out[i] = train_standalone(space, archs[i], ds, splits, hp, cache);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return out;
}

double hinge_total(std::span<const double> losses) {
    const int n = static_cast<int>(losses.size());
    double r = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) r += std::max(0.0, losses[i] - losses[j]);
    return r;
}

double regularizer_full(const SuperNet& sn, const LandmarkSet& set, const Batch& batch) {
    if (set.size() < 2) throw std::invalid_argument("need at least 2 landmarks");
    if (!set.sorted()) throw std::invalid_argument("landmark set must be sorted");

    std::vector<double> losses(set.size());
    for (int i = 0; i < set.size(); ++i)
        losses[i] = supernet_loss(sn, set.entries[i].arch, batch);
    return hinge_total(losses);
}

std::vector<std::pair<int, int>> sample_pairs(int M, int m, Rng& rng) {
    if (M < 2) throw std::invalid_argument("need at least 2 landmarks to form pairs");
    if (m <= 0) throw std::invalid_argument("m must be positive");
    const int total = M * (M - 1) / 2;
    if (m > total) {
        std::cerr << "[ranknas] warning: m=" << m << " exceeds C(" << M << ",2)=" << total
                  << ", clamping\n";
        m = total;
    }

    // Floyd's subset sampling: exactly m rng draws, no rejection loop.
    std::set<int> chosen;
    for (int j = total - m; j < total; ++j) {
        const int t = static_cast<int>(rng.next_below(static_cast<uint64_t>(j) + 1));
        if (!chosen.insert(t).second) chosen.insert(j);
    }

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(chosen.size());
    for (int flat : chosen) {
        // invert flat index over {(i, j) : i < j} in lexicographic order
        int i = 0;
        int remaining = flat;
        while (remaining >= M - 1 - i) {
            remaining -= M - 1 - i;
            ++i;
        }
        pairs.emplace_back(i, i + 1 + remaining);
    }
    return pairs;
}

SampledReg regularizer_sampled(const SuperNet& sn, const LandmarkSet& set, const Batch& batch,
                               int m, Rng& rng) {
    if (set.size() < 2) throw std::invalid_argument("need at least 2 landmarks");
    if (!set.sorted()) throw std::invalid_argument("landmark set must be sorted");

    SampledReg out;
    out.pairs = sample_pairs(set.size(), m, rng);

    std::map<int, double> losses;
    for (auto [i, j] : out.pairs) {
        for (int idx : {i, j}) {
            if (!losses.count(idx))
                losses[idx] = supernet_loss(sn, set.entries[idx].arch, batch);
        }
    }
    for (auto [i, j] : out.pairs) out.value += std::max(0.0, losses[i] - losses[j]);
    return out;
}

} // namespace ranknas
