#include "ranknas/supernet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ranknas/errors.hpp"

namespace ranknas {

SuperNet make_supernet(const SearchSpace& space, int width, int in_dim, int n_classes,
                       Rng& rng) {
    SuperNet sn;
    sn.space = space;
    sn.net = init_params(space, width, in_dim, n_classes, rng);
    return sn;
}

Architecture sample_path_uniform(const SearchSpace& space, Rng& rng) {
    return random_architecture(space, rng);
}

double supernet_loss(const SuperNet& sn, const Architecture& arch, const Batch& batch) {
    return evaluate(sn.net, arch, batch).loss;
}

namespace {

/// SGD over the union of paths' touched parameters, in canonical order.
void sgd_step_union(SuperNet& sn, const std::vector<const Architecture*>& paths,
                    const Hparams& hp) {
    std::set<std::pair<int, int>> edge_keys;
    for (const Architecture* a : paths)
        for (int e = 0; e < sn.space.n_edges(); ++e)
            if (sn.net.has_edge_params(e, a->codes[e]))
                edge_keys.insert({e, static_cast<int>(a->codes[e])});

    sgd_update_tensor(sn.net.stem_w, hp.supernet_lr, hp.supernet_momentum,
                      hp.supernet_weight_decay);
    sgd_update_tensor(sn.net.stem_b, hp.supernet_lr, hp.supernet_momentum,
                      hp.supernet_weight_decay);
    for (const auto& key : edge_keys) {
        auto& ep = sn.net.edge_params.at(key);
        sgd_update_tensor(ep.w, hp.supernet_lr, hp.supernet_momentum,
                          hp.supernet_weight_decay);
        sgd_update_tensor(ep.b, hp.supernet_lr, hp.supernet_momentum,
                          hp.supernet_weight_decay);
    }
    sgd_update_tensor(sn.net.cls_w, hp.supernet_lr, hp.supernet_momentum,
                      hp.supernet_weight_decay);
    sgd_update_tensor(sn.net.cls_b, hp.supernet_lr, hp.supernet_momentum,
                      hp.supernet_weight_decay);
}

} // namespace

double supernet_lr_at(const Hparams& hp, int t, int t_total) {
    if (t_total <= 1) return hp.supernet_lr;
    const double p = static_cast<double>(t - 1) / static_cast<double>(t_total - 1);
    return hp.supernet_lr_min +
           (hp.supernet_lr - hp.supernet_lr_min) * (1.0 + std::cos(M_PI * p)) / 2.0;
}

TrainStepReport train_step_plain(SuperNet& sn, const Batch& batch_w, const Hparams& hp,
                                 Rng& rng) {
    TrainStepReport rep;
    rep.path = sample_path_uniform(sn.space, rng);
    rep.task_loss = loss_grad(sn.net, rep.path, batch_w.X, batch_w.y);
    sgd_step(sn.net, rep.path, hp.supernet_lr, hp.supernet_momentum,
             hp.supernet_weight_decay);
    ++sn.step_counter;
    return rep;
}

TrainStepReport train_step(SuperNet& sn, const Batch& batch_w, const Batch* batch_r,
                           const LandmarkSet& landmarks, const RegSchedule& sched, int m,
                           const Hparams& hp, Rng& rng) {
    TrainStepReport rep;
    const int t = static_cast<int>(sn.epoch_counter) + 1;
    const double lambda = lambda_at(sched, std::min(t, sched.t_total));

    try {
        rep.path = sample_path_uniform(sn.space, rng);
        rep.task_loss = loss_grad(sn.net, rep.path, batch_w.X, batch_w.y);

        std::vector<const Architecture*> touched_paths{&rep.path};
        if (lambda > 0.0 && landmarks.size() >= 2) {
            if (!batch_r)
                throw std::invalid_argument("regularizer active but batch_r missing");
            rep.lambda = lambda;
            rep.pair_ids = sample_pairs(landmarks.size(), m, rng);

            // One loss per distinct landmark involved, then a hinge
            // (sub)gradient through both terms of every violated pair.
            std::map<int, double> losses;
            for (auto [i, j] : rep.pair_ids) {
                for (int idx : {i, j}) {
                    if (!losses.count(idx))
                        losses[idx] = supernet_loss(
                            sn, landmarks.entries[idx].arch, *batch_r);
                }
            }
            std::map<int, double> coeff; // net backward scale per landmark
            for (auto [i, j] : rep.pair_ids) {
                const double gap = losses[i] - losses[j];
                if (gap > 0.0) {
                    rep.reg_loss += gap;
                    coeff[i] += 1.0;
                    coeff[j] -= 1.0;
                }
            }
            for (const auto& [idx, c] : coeff) {
                if (c == 0.0) continue;
                const Architecture& a = landmarks.entries[idx].arch;
                loss_grad(sn.net, a, batch_r->X, batch_r->y, lambda * c);
                touched_paths.push_back(&a);
            }
        }

        sgd_step_union(sn, touched_paths, hp);
    } catch (const NumericOverflowError& e) {
        std::ostringstream msg;
        msg << e.what() << " at step " << sn.step_counter;
        throw NumericOverflowError(msg.str());
    }
    ++sn.step_counter;
    return rep;
}

EpochSummary train_epoch(SuperNet& sn, const Dataset& ds, const SplitSet& splits,
                         const LandmarkSet& landmarks, const RegSchedule& sched, int m,
                         const Hparams& hp, Rng& rng) {
    const int t = static_cast<int>(sn.epoch_counter) + 1;
    const double lambda = lambda_at(sched, std::min(t, sched.t_total));
    const bool reg_active = lambda > 0.0 && landmarks.size() >= 2;

    EpochSummary s;
    s.epoch = t;
    s.lambda = reg_active ? lambda : 0.0;

    Hparams hp_t = hp;
    hp_t.supernet_lr = supernet_lr_at(hp, t, sched.t_total);

    auto batches_w = batches(ds, splits.train_w, hp.batch_size, rng);

    // The regularizer split cycles on its own stream, derived only when the
    // regularizer is active, so a λ_max = 0 epoch consumes the main rng
    // exactly like the plain loop (baseline equivalence).
    std::vector<Batch> batches_r;
    size_t r_pos = 0;
    std::optional<Rng> rng_r;
    if (reg_active) {
        rng_r.emplace(derive_seed(rng.next_u64(), "regbatch", static_cast<uint64_t>(t)));
        batches_r = batches(ds, splits.train_r, hp.batch_size, *rng_r);
    }

    for (const Batch& bw : batches_w) {
        const Batch* br = nullptr;
        if (reg_active) {
            if (r_pos == batches_r.size()) {
                batches_r = batches(ds, splits.train_r, hp.batch_size, *rng_r);
                r_pos = 0;
            }
            br = &batches_r[r_pos++];
        }
        TrainStepReport rep = train_step(sn, bw, br, landmarks, sched, m, hp_t, rng);
        s.mean_task_loss += rep.task_loss;
        s.mean_reg_loss += rep.reg_loss;
        ++s.steps;
    }
    s.mean_task_loss /= s.steps;
    s.mean_reg_loss /= s.steps;
    ++sn.epoch_counter;
    return s;
}

EpochSummary train_epoch_plain(SuperNet& sn, const Dataset& ds, const SplitSet& splits,
                               const Hparams& hp, int t_total, Rng& rng) {
    EpochSummary s;
    s.epoch = static_cast<int>(sn.epoch_counter) + 1;
    Hparams hp_t = hp;
    hp_t.supernet_lr = supernet_lr_at(hp, s.epoch, t_total);
    auto batches_w = batches(ds, splits.train_w, hp.batch_size, rng);
    for (const Batch& bw : batches_w) {
        TrainStepReport rep = train_step_plain(sn, bw, hp_t, rng);
        s.mean_task_loss += rep.task_loss;
        ++s.steps;
    }
    s.mean_task_loss /= s.steps;
    ++sn.epoch_counter;
    return s;
}

} // namespace ranknas
