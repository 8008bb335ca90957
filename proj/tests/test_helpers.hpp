#pragma once

#include <filesystem>
#include <string>

#include "ranknas/data.hpp"
#include "ranknas/hparams.hpp"
#include "ranknas/space.hpp"

namespace test_helpers {

/// Small fast fixture shared across suites: 600 samples, 8 features,
/// 3 classes, moderate noise.
struct SmallProblem {
    ranknas::Dataset ds;
    ranknas::SplitSet splits;
    ranknas::Hparams hp;

    SmallProblem() {
        ds = ranknas::generate_dataset(7, 600, 8, 3, 0.3);
        splits = ranknas::split_dataset(ds, {0.5, 0.25, 0.25}, 11);
        hp.width = 8;
        hp.standalone_epochs = 10;
    }
};

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("ranknas_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace test_helpers
