#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ranknas/config.hpp"
#include "ranknas/search.hpp"

namespace ranknas {

/// Writes ab.csv, iterations.csv, ranking.csv, train_log.csv and report.txt
/// into `dir`. All CSVs are deterministic; report.txt ends with a separate
/// informational timing section.
void write_run_outputs(const std::filesystem::path& dir, const RunConfig& cfg,
                       const ABReport& ab);

struct AblationRow {
    std::string knob;
    std::string value;
    uint64_t seed = 0;
    double skdt = 0.0;
    std::string final_arch;
    double final_acc = 0.0;
};

void write_ablation_csv(const std::filesystem::path& dir, const std::string& knob,
                        const std::vector<AblationRow>& rows);

/// Aggregates the CSVs in `dir` into a human-readable table on `out` and a
/// plot-ready long-format CSV (summary_long.csv). Throws IoError naming the
/// missing file when `dir` holds no known inputs.
void summarize_outputs(const std::filesystem::path& dir, std::ostream& out);

} // namespace ranknas
