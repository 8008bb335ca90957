#include "ranknas/cache.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ranknas/errors.hpp"

namespace ranknas {

namespace {
constexpr const char* kHeader = "space_name,arch_string,hparams_hash,seed,valid_loss,valid_acc,wall_time_s";
}

std::string BenchmarkCache::key_of(const std::string& space_name, const std::string& arch,
                                   uint64_t hp_hash, uint64_t seed) {
    std::ostringstream k;
    k << space_name << '|' << arch << '|' << hp_hash << '|' << seed;
    return k.str();
}

BenchmarkCache::BenchmarkCache(std::filesystem::path file) : file_(std::move(file)) {
    std::ifstream in(file_);
    if (!in) return; // fresh cache; file created on first insert
    std::string line;
    bool first = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line == kHeader) continue;
        }
        std::istringstream ss(line);
        std::string space_name, arch_str, tok;
        StandaloneResult r;
        if (!std::getline(ss, space_name, ',') || !std::getline(ss, arch_str, ','))
            throw IoError("bad cache line " + std::to_string(lineno) + " in " + file_.string());
        auto next = [&](const char* what) {
            if (!std::getline(ss, tok, ','))
                throw IoError(std::string("missing ") + what + " on cache line " +
                              std::to_string(lineno));
            return tok;
        };
        r.hparams_hash = std::stoull(next("hparams_hash"));
        r.seed = std::stoull(next("seed"));
        r.valid_loss = std::stod(next("valid_loss"));
        r.valid_acc = std::stod(next("valid_acc"));
        r.wall_time_s = std::stod(next("wall_time_s"));
        r.arch = Architecture::parse(arch_str);
        // first occurrence wins
        entries_.emplace(key_of(space_name, arch_str, r.hparams_hash, r.seed), r);
    }
}

std::optional<StandaloneResult> BenchmarkCache::lookup(const std::string& space_name,
                                                       const Architecture& arch,
                                                       uint64_t hp_hash,
                                                       uint64_t seed) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key_of(space_name, arch.to_string(), hp_hash, seed));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void BenchmarkCache::append_line(const std::string& space_name, const StandaloneResult& r) {
    if (file_.empty()) return;
    const bool fresh = !std::filesystem::exists(file_);
    std::ofstream out(file_, std::ios::app);
    if (!out) throw IoError("cannot open cache file " + file_.string() + " for append");
    if (fresh) out << kHeader << '\n';
    char loss_buf[64], acc_buf[64], wall_buf[64];
    std::snprintf(loss_buf, sizeof loss_buf, "%.17g", r.valid_loss);
    std::snprintf(acc_buf, sizeof acc_buf, "%.17g", r.valid_acc);
    std::snprintf(wall_buf, sizeof wall_buf, "%.6g", r.wall_time_s);
    out << space_name << ',' << r.arch.to_string() << ',' << r.hparams_hash << ',' << r.seed
        << ',' << loss_buf << ',' << acc_buf << ',' << wall_buf << '\n';
    if (!out) throw IoError("cache write failed: " + file_.string());
}

void BenchmarkCache::insert(const std::string& space_name, const StandaloneResult& r) {
    std::lock_guard lock(mu_);
    const auto key = key_of(space_name, r.arch.to_string(), r.hparams_hash, r.seed);
    if (entries_.count(key)) return;
    entries_.emplace(key, r);
    append_line(space_name, r);
}

size_t BenchmarkCache::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

size_t BenchmarkCache::count_for(const std::string& space_name, uint64_t hp_hash,
                                 uint64_t seed) const {
    std::lock_guard lock(mu_);
    size_t n = 0;
    for (const auto& [k, r] : entries_) {
        if (r.hparams_hash == hp_hash && r.seed == seed &&
            k.rfind(space_name + "|", 0) == 0)
            ++n;
    }
    return n;
}

std::map<std::string, StandaloneResult> BenchmarkCache::table_for(
    const std::string& space_name, uint64_t hp_hash, uint64_t seed) const {
    std::lock_guard lock(mu_);
    std::map<std::string, StandaloneResult> out;
    for (const auto& [k, r] : entries_) {
        if (r.hparams_hash == hp_hash && r.seed == seed &&
            k.rfind(space_name + "|", 0) == 0)
            out.emplace(r.arch.to_string(), r);
    }
    return out;
}

} // namespace ranknas
