// Short deterministic super-net training run that dumps a parameter
// checkpoint and a per-epoch loss log. Compiled twice: the default build
// trains through the regularized path (λ_max configurable, landmark set
// present), the RANKNAS_DISABLE_REG build through an epoch loop with no
// regularizer code. Byte-identical outputs across the two builds at
// λ_max = 0 are the baseline-equivalence check.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>

#include "ranknas/data.hpp"
#include "ranknas/nn.hpp"
#include "ranknas/supernet.hpp"

using namespace ranknas;

int main(int argc, char** argv) {
    uint64_t seed = 1;
    int epochs = 5;
    double lambda_max = 0.0;
    std::string ckpt_path = "trace_ckpt.txt";
    std::string log_path = "trace_log.txt";
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        auto next = [&]() -> const char* {
            if (i + 1 >= argc) {
                std::cerr << "missing value for " << a << "\n";
                std::exit(2);
            }
            return argv[++i];
        };
        if (a == "--seed") seed = std::strtoull(next(), nullptr, 10);
        else if (a == "--epochs") epochs = std::atoi(next());
        else if (a == "--lambda-max") lambda_max = std::atof(next());
        else if (a == "--ckpt") ckpt_path = next();
        else if (a == "--log") log_path = next();
        else {
            std::cerr << "unknown flag " << a << "\n";
            return 2;
        }
    }

    const SearchSpace space = builtin_space("micro");
    const Dataset ds = generate_dataset(7, 600, 8, 3, 0.3);
    const SplitSet splits = split_dataset(ds, {0.5, 0.25, 0.25}, 11);
    Hparams hp;
    hp.width = 8;

    Rng rng_init(seed, "init");
    SuperNet sn = make_supernet(space, hp.width, ds.n_features(), ds.n_classes, rng_init);
    Rng rng_train(seed, "supernet");

    std::ofstream log(log_path);
    char buf[64];

#ifdef RANKNAS_DISABLE_REG
    (void)lambda_max;
    const int t_total = std::max(2, epochs);
    for (int e = 0; e < epochs; ++e) {
        const EpochSummary s = train_epoch_plain(sn, ds, splits, hp, t_total, rng_train);
        std::snprintf(buf, sizeof buf, "%.17g", s.mean_task_loss);
        log << s.epoch << ' ' << buf << '\n';
    }
#else
    // Non-empty landmark set with fabricated ground truth: proves that
    // λ_max = 0 alone suppresses every regularizer side effect.
    LandmarkSet landmarks;
    landmarks.entries.push_back({Architecture::parse("2-2-2"), 0.2, 0.9, 0, 0, 0.0});
    landmarks.entries.push_back({Architecture::parse("1-0-1"), 0.7, 0.5, 0, 0, 0.0});
    RegSchedule sched;
    sched.lambda_max = lambda_max;
    sched.t_w = 1;
    sched.t_total = std::max(2, epochs);
    for (int e = 0; e < epochs; ++e) {
        const EpochSummary s =
            train_epoch(sn, ds, splits, landmarks, sched, /*m=*/1, hp, rng_train);
        std::snprintf(buf, sizeof buf, "%.17g", s.mean_task_loss);
        log << s.epoch << ' ' << buf << '\n';
    }
#endif

    save_checkpoint(sn.net, ckpt_path);
    return 0;
}
