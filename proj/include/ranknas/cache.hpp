#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "ranknas/space.hpp"

namespace ranknas {

/// One stand-alone training outcome: the ground truth the super-net should
/// rank-predict.
struct StandaloneResult {
    Architecture arch;
    double valid_loss = 0.0;
    double valid_acc = 0.0;
    uint64_t seed = 0;
    uint64_t hparams_hash = 0;
    double wall_time_s = 0.0;

    bool failed() const { return !std::isfinite(valid_loss); }
};

/// Persistent map from (space, arch, hparams hash, seed) to stand-alone
/// results. Append-only line file, re-read at startup; duplicate keys resolve
/// to the first occurrence. Once filled for a small space it acts as a
/// tabular benchmark. Writes are serialized (single-writer contract).
class BenchmarkCache {
public:
    BenchmarkCache() = default; // in-memory only
    explicit BenchmarkCache(std::filesystem::path file);

    std::optional<StandaloneResult> lookup(const std::string& space_name,
                                           const Architecture& arch, uint64_t hp_hash,
                                           uint64_t seed) const;

    /// Stores and appends to the backing file. A key already present keeps
    /// its first record (the insert is ignored).
    void insert(const std::string& space_name, const StandaloneResult& r);

    size_t size() const;

    /// Number of distinct architectures cached for (space, hash, seed).
    size_t count_for(const std::string& space_name, uint64_t hp_hash, uint64_t seed) const;

    /// All records for (space, hash, seed), keyed by canonical arch string.
    std::map<std::string, StandaloneResult> table_for(const std::string& space_name,
                                                      uint64_t hp_hash, uint64_t seed) const;

    const std::filesystem::path& file() const { return file_; }

private:
    static std::string key_of(const std::string& space_name, const std::string& arch,
                              uint64_t hp_hash, uint64_t seed);
    void append_line(const std::string& space_name, const StandaloneResult& r);

    std::filesystem::path file_;
    std::map<std::string, StandaloneResult> entries_;
    mutable std::mutex mu_;
};

} // namespace ranknas
