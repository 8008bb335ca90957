#include "ranknas/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ranknas/errors.hpp"

namespace ranknas {

namespace {

double fitness_of(const SuperNet& sn, const Architecture& a,
                  const std::vector<Batch>& probe_batches) {
    int correct = 0, total = 0;
    for (const Batch& b : probe_batches) {
        const EvalResult ev = evaluate(sn.net, a, b);
        correct += static_cast<int>(std::lround(ev.accuracy * b.X.rows));
        total += b.X.rows;
    }
    return static_cast<double>(correct) / total;
}

bool fitter(const ScoredArch& a, const ScoredArch& b) {
    if (a.fitness != b.fitness) return a.fitness > b.fitness;
    return a.arch.to_string() < b.arch.to_string();
}

} // namespace

std::vector<ScoredArch> evolutionary_search(const SuperNet& sn,
                                            const std::vector<Batch>& probe_batches,
                                            const EvoConfig& cfg, Rng& rng,
                                            const std::vector<Architecture>* initial) {
    if (cfg.population < 1) throw std::invalid_argument("population must be positive");
    if (cfg.parent_fraction <= 0.0 || cfg.parent_fraction > 1.0)
        throw std::invalid_argument("parent_fraction must be in (0, 1]");
    if (probe_batches.empty()) throw std::invalid_argument("need probe batches for fitness");

    std::map<std::string, ScoredArch> archive;
    auto evaluate_arch = [&](const Architecture& a) -> double {
        const std::string key = a.to_string();
        auto it = archive.find(key);
        if (it != archive.end()) return it->second.fitness;
        const double f = fitness_of(sn, a, probe_batches);
        archive.emplace(key, ScoredArch{a, f});
        return f;
    };

    std::vector<Architecture> population;
    if (initial) {
        population = *initial;
    } else {
        population.reserve(cfg.population);
        for (int i = 0; i < cfg.population; ++i)
            population.push_back(random_architecture(sn.space, rng));
    }
    for (const Architecture& a : population) evaluate_arch(a);

    const int n_parents =
        std::max(1, static_cast<int>(std::floor(cfg.parent_fraction * population.size())));

    for (int gen = 0; gen < cfg.generations; ++gen) {
        std::vector<ScoredArch> scored;
        scored.reserve(population.size());
        for (const Architecture& a : population)
            scored.push_back(ScoredArch{a, evaluate_arch(a)});
        std::sort(scored.begin(), scored.end(), fitter);

        std::vector<Architecture> next;
        next.reserve(population.size());
        for (int i = 0; i < n_parents && i < static_cast<int>(scored.size()); ++i)
            next.push_back(scored[i].arch);
        while (next.size() < population.size()) {
            const auto& parent =
                next[static_cast<size_t>(rng.next_below(static_cast<uint64_t>(n_parents)))];
            Architecture child = parent;
            for (int s = 0; s < cfg.mutation_per_child; ++s)
                child = mutate(sn.space, child, rng);
            evaluate_arch(child);
            next.push_back(std::move(child));
        }
        population = std::move(next);
    }

    std::vector<ScoredArch> ranked;
    ranked.reserve(archive.size());
    for (const auto& [key, sa] : archive) ranked.push_back(sa);
    std::sort(ranked.begin(), ranked.end(), fitter);
    if (static_cast<int>(ranked.size()) > cfg.topk) ranked.resize(cfg.topk);
    return ranked;
}

PipelineReport run_pipeline(const PipelineConfig& cfg, const SearchSpace& space,
                            const Dataset& ds, const SplitSet& splits, BenchmarkCache& cache,
                            uint64_t seed) {
    if (cfg.T < 1 || cfg.M < 1 || cfg.m < 1) throw std::invalid_argument("T, M, m must be positive");

    RegSchedule sched = cfg.sched;
    sched.t_total = cfg.T * cfg.epochs_per_iter;
    if (sched.t_w >= sched.t_total)
        throw std::invalid_argument("warm-up must be shorter than the total epoch budget");

    const Hparams& hp = cfg.hparams;
    PipelineReport rep;

    Rng rng_init(seed, "init");
    SuperNet sn = make_supernet(space, hp.width, ds.n_features(), ds.n_classes, rng_init);

    auto timed_standalone = [&](const std::vector<Architecture>& archs) {
        const auto t0 = std::chrono::steady_clock::now();
        auto results = train_standalone_batch(space, archs, ds, splits, hp, cache, cfg.jobs);
        rep.standalone_wall_s +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return results;
    };

    Rng rng_lm(seed, "landmarks");
    const auto lm_archs = sample_landmarks(space, cfg.M, cfg.tau, rng_lm);
    rep.landmarks = extend_landmarks(LandmarkSet{}, timed_standalone(lm_archs));

    // GT-loss argmin over the evolution-proposed candidates of all iterations
    std::map<std::string, StandaloneResult> candidates;

    Rng rng_train(seed, "supernet");
    for (int iter = 1; iter <= cfg.T; ++iter) {
        for (int e = 0; e < cfg.epochs_per_iter; ++e)
            rep.epoch_log.push_back(
                train_epoch(sn, ds, splits, rep.landmarks, sched, cfg.m, hp, rng_train));

        Rng rng_fit(derive_seed(seed, "evofit", static_cast<uint64_t>(iter)));
        auto fit_batches = batches(ds, splits.valid, hp.batch_size, rng_fit);
        if (fit_batches.size() > 4) fit_batches.resize(4);

        EvoConfig evo = cfg.evo;
        evo.topk = std::max(evo.topk, cfg.M + rep.landmarks.size());
        Rng rng_evo(derive_seed(seed, "evo", static_cast<uint64_t>(iter)));
        const auto ranked = evolutionary_search(sn, fit_batches, evo, rng_evo);

        std::vector<Architecture> proposals;
        for (const ScoredArch& sa : ranked) {
            if (static_cast<int>(proposals.size()) >= cfg.M) break;
            if (rep.landmarks.contains(sa.arch)) continue; // skip, take next-ranked
            proposals.push_back(sa.arch);
        }

        const auto results = timed_standalone(proposals);
        for (const StandaloneResult& r : results) candidates.emplace(r.arch.to_string(), r);
        rep.landmarks = extend_landmarks(rep.landmarks, results);

        Rng rng_probe(derive_seed(seed, "probe", static_cast<uint64_t>(iter)));
        const auto t0 = std::chrono::steady_clock::now();
        ProbeResult probe = probe_skdt(sn, rep.landmarks, ds, splits, hp, cache, cfg.probe_k,
                                       cfg.skdt_bin, rng_probe, cfg.jobs);
        rep.standalone_wall_s +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        IterationStats st;
        st.iter = iter;
        st.skdt = probe.report.skdt;
        st.landmark_count = rep.landmarks.size();
        for (const auto& e : rep.landmarks.entries) st.mean_landmark_acc += e.valid_acc;
        st.mean_landmark_acc /= rep.landmarks.size();
        st.probe = probe.report;
        rep.iterations.push_back(st);
        rep.probes.push_back(std::move(probe));
    }

    if (candidates.empty())
        throw std::runtime_error("no stand-alone-trained candidates to choose from");
    const StandaloneResult* best = nullptr;
    for (const auto& [key, r] : candidates) {
        rep.candidates.push_back(r);
        if (!best || r.valid_loss < best->valid_loss) best = &r;
    }
    rep.final_arch = best->arch;
    rep.final_result = *best;
    rep.final_rank = exhaustive_rank(cache, space, hp, ds, splits, best->arch);
    return rep;
}

namespace {
void aggregate(const std::vector<double>& v, double& mean, double& stdev) {
    mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    stdev = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
}
} // namespace

ABReport run_baseline_vs_regularized(const PipelineConfig& cfg, const SearchSpace& space,
                                     const Dataset& ds, const SplitSet& splits,
                                     BenchmarkCache& cache) {
    if (cfg.seeds.empty()) throw std::invalid_argument("seed list must be non-empty");

    ABReport ab;
    std::vector<double> skdt_base, skdt_reg, acc_base, acc_reg;
    for (uint64_t seed : cfg.seeds) {
        PipelineConfig base_cfg = cfg;
        base_cfg.sched.lambda_max = 0.0;
        PipelineReport base = run_pipeline(base_cfg, space, ds, splits, cache, seed);
        PipelineReport reg = run_pipeline(cfg, space, ds, splits, cache, seed);

        const double skdt_b = base.iterations.back().skdt;
        const double skdt_r = reg.iterations.back().skdt;
        ab.rows.push_back({seed, "baseline", skdt_b, base.final_arch.to_string(),
                           base.final_result.valid_acc});
        ab.rows.push_back({seed, "regularized", skdt_r, reg.final_arch.to_string(),
                           reg.final_result.valid_acc});
        skdt_base.push_back(skdt_b);
        skdt_reg.push_back(skdt_r);
        acc_base.push_back(base.final_result.valid_acc);
        acc_reg.push_back(reg.final_result.valid_acc);
        if (skdt_r > skdt_b) ++ab.seeds_with_positive_delta;

        ab.baseline_reports.push_back(std::move(base));
        ab.regularized_reports.push_back(std::move(reg));
    }
    aggregate(skdt_base, ab.mean_skdt_baseline, ab.std_skdt_baseline);
    aggregate(skdt_reg, ab.mean_skdt_regularized, ab.std_skdt_regularized);
    double unused = 0.0;
    aggregate(acc_base, ab.mean_acc_baseline, unused);
    aggregate(acc_reg, ab.mean_acc_regularized, unused);
    return ab;
}

} // namespace ranknas
