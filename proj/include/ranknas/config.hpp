#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ranknas/landmark.hpp"
#include "ranknas/search.hpp"

namespace ranknas {

struct AblationGrids {
    std::vector<double> lambda{1.0, 10.0, 100.0};
    std::vector<int> pairs{1, 2, 10};
    std::vector<int> iters{1, 3};
    std::vector<int> tau; // empty = auto: 1..n_edges-1, capped at 5
    std::vector<ScheduleMode> schedule{ScheduleMode::Constant, ScheduleMode::CosDecrease,
                                       ScheduleMode::CosIncrease, ScheduleMode::StepDecrease,
                                       ScheduleMode::StepIncrease};
};

/// Fully resolved experiment configuration. The text format is flat
/// `key = value` lines under [section] headers; lists are comma-separated.
/// Every key has a default except space.name.
struct RunConfig {
    std::string space_name;

    uint64_t data_seed = 42;
    int n_samples = 3000;
    int n_features = 16;
    int n_classes = 4;
    double noise = 0.25;
    std::array<double, 3> fractions{0.4, 0.3, 0.3};
    uint64_t split_seed = 77;

    PipelineConfig pipe;

    AblationGrids grids;

    std::string cache_path = "bench_cache.csv";
};

/// Parses and resolves a config file. Throws ConfigError with line/key
/// diagnostics. tau = 0 in the file means "auto" (⌈0.6·|edges|⌉).
RunConfig parse_config(const std::filesystem::path& file);

/// Parses from an already-read string (line numbers refer to it).
RunConfig parse_config_text(const std::string& text);

/// Emits the fully-resolved config in the same format parse_config reads;
/// re-parsing the output yields an identical configuration.
void write_resolved_config(const RunConfig& cfg, std::ostream& out);

/// Builds the search space named by the config and resolves dependent
/// defaults (auto tau). Throws on invalid combinations.
SearchSpace resolve_space(RunConfig& cfg);

} // namespace ranknas
