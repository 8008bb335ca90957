#include "ranknas/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "ranknas/errors.hpp"

namespace ranknas {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

double parse_double(const std::string& v, int line) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError(line, "expected a number, got '" + v + "'");
    }
}

int64_t parse_int(const std::string& v, int line) {
    try {
        size_t pos = 0;
        int64_t d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError(line, "expected an integer, got '" + v + "'");
    }
}

uint64_t parse_u64(const std::string& v, int line) {
    try {
        size_t pos = 0;
        uint64_t d = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError(line, "expected an unsigned integer, got '" + v + "'");
    }
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    cfg.pipe.tau = 0; // auto unless set; resolve_space fills ⌈0.6·|edges|⌉
    bool saw_space_name = false;

    // handler per (section, key)
    using Handler = std::function<void(const std::string&, int)>;
    std::map<std::string, Handler> handlers;
    auto on = [&](const char* section_key, Handler h) { handlers[section_key] = std::move(h); };

    on("space.name", [&](const std::string& v, int) {
        cfg.space_name = v;
        saw_space_name = true;
    });
    on("data.seed", [&](const std::string& v, int ln) { cfg.data_seed = parse_u64(v, ln); });
    on("data.n_samples",
       [&](const std::string& v, int ln) { cfg.n_samples = static_cast<int>(parse_int(v, ln)); });
    on("data.n_features",
       [&](const std::string& v, int ln) { cfg.n_features = static_cast<int>(parse_int(v, ln)); });
    on("data.n_classes",
       [&](const std::string& v, int ln) { cfg.n_classes = static_cast<int>(parse_int(v, ln)); });
    on("data.noise", [&](const std::string& v, int ln) { cfg.noise = parse_double(v, ln); });
    on("data.split_seed",
       [&](const std::string& v, int ln) { cfg.split_seed = parse_u64(v, ln); });
    on("data.fractions", [&](const std::string& v, int ln) {
        auto parts = split_list(v);
        if (parts.size() != 3) throw ConfigError(ln, "fractions needs exactly 3 values");
        for (int i = 0; i < 3; ++i) cfg.fractions[i] = parse_double(parts[i], ln);
    });

    on("pipeline.T",
       [&](const std::string& v, int ln) { cfg.pipe.T = static_cast<int>(parse_int(v, ln)); });
    on("pipeline.M",
       [&](const std::string& v, int ln) { cfg.pipe.M = static_cast<int>(parse_int(v, ln)); });
    on("pipeline.pairs",
       [&](const std::string& v, int ln) { cfg.pipe.m = static_cast<int>(parse_int(v, ln)); });
    on("pipeline.tau",
       [&](const std::string& v, int ln) { cfg.pipe.tau = static_cast<int>(parse_int(v, ln)); });
    on("pipeline.lambda_max",
       [&](const std::string& v, int ln) { cfg.pipe.sched.lambda_max = parse_double(v, ln); });
    on("pipeline.schedule", [&](const std::string& v, int ln) {
        try {
            cfg.pipe.sched.mode = schedule_mode_from_name(v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(ln, e.what());
        }
    });
    on("pipeline.warmup_epochs",
       [&](const std::string& v, int ln) { cfg.pipe.sched.t_w = static_cast<int>(parse_int(v, ln)); });
    on("pipeline.epochs_per_iter", [&](const std::string& v, int ln) {
        cfg.pipe.epochs_per_iter = static_cast<int>(parse_int(v, ln));
    });
    on("pipeline.seeds", [&](const std::string& v, int ln) {
        cfg.pipe.seeds.clear();
        for (const auto& tok : split_list(v)) cfg.pipe.seeds.push_back(parse_u64(tok, ln));
        if (cfg.pipe.seeds.empty()) throw ConfigError(ln, "seed list must be non-empty");
    });
    on("pipeline.probe_k",
       [&](const std::string& v, int ln) { cfg.pipe.probe_k = static_cast<int>(parse_int(v, ln)); });
    on("pipeline.skdt_bin",
       [&](const std::string& v, int ln) { cfg.pipe.skdt_bin = parse_double(v, ln); });

    on("evo.population", [&](const std::string& v, int ln) {
        cfg.pipe.evo.population = static_cast<int>(parse_int(v, ln));
    });
    on("evo.generations", [&](const std::string& v, int ln) {
        cfg.pipe.evo.generations = static_cast<int>(parse_int(v, ln));
    });
    on("evo.parent_fraction", [&](const std::string& v, int ln) {
        cfg.pipe.evo.parent_fraction = parse_double(v, ln);
    });
    on("evo.mutation_per_child", [&](const std::string& v, int ln) {
        cfg.pipe.evo.mutation_per_child = static_cast<int>(parse_int(v, ln));
    });
    on("evo.topk", [&](const std::string& v, int ln) {
        cfg.pipe.evo.topk = static_cast<int>(parse_int(v, ln));
    });

    Hparams& hp = cfg.pipe.hparams;
    on("hparams.width",
       [&](const std::string& v, int ln) { hp.width = static_cast<int>(parse_int(v, ln)); });
    on("hparams.batch_size",
       [&](const std::string& v, int ln) { hp.batch_size = static_cast<int>(parse_int(v, ln)); });
    on("hparams.supernet_lr",
       [&](const std::string& v, int ln) { hp.supernet_lr = parse_double(v, ln); });
    on("hparams.supernet_momentum",
       [&](const std::string& v, int ln) { hp.supernet_momentum = parse_double(v, ln); });
    on("hparams.supernet_weight_decay",
       [&](const std::string& v, int ln) { hp.supernet_weight_decay = parse_double(v, ln); });
    on("hparams.standalone_epochs", [&](const std::string& v, int ln) {
        hp.standalone_epochs = static_cast<int>(parse_int(v, ln));
    });
    on("hparams.standalone_lr",
       [&](const std::string& v, int ln) { hp.standalone_lr = parse_double(v, ln); });
    on("hparams.standalone_momentum",
       [&](const std::string& v, int ln) { hp.standalone_momentum = parse_double(v, ln); });
    on("hparams.standalone_weight_decay",
       [&](const std::string& v, int ln) { hp.standalone_weight_decay = parse_double(v, ln); });
    on("hparams.standalone_seed",
       [&](const std::string& v, int ln) { hp.standalone_seed = parse_u64(v, ln); });

    on("ablation.lambda_grid", [&](const std::string& v, int ln) {
        cfg.grids.lambda.clear();
        for (const auto& tok : split_list(v)) cfg.grids.lambda.push_back(parse_double(tok, ln));
    });
    on("ablation.pairs_grid", [&](const std::string& v, int ln) {
        cfg.grids.pairs.clear();
        for (const auto& tok : split_list(v))
            cfg.grids.pairs.push_back(static_cast<int>(parse_int(tok, ln)));
    });
    on("ablation.iters_grid", [&](const std::string& v, int ln) {
        cfg.grids.iters.clear();
        for (const auto& tok : split_list(v))
            cfg.grids.iters.push_back(static_cast<int>(parse_int(tok, ln)));
    });
    on("ablation.tau_grid", [&](const std::string& v, int ln) {
        cfg.grids.tau.clear();
        for (const auto& tok : split_list(v))
            cfg.grids.tau.push_back(static_cast<int>(parse_int(tok, ln)));
    });
    on("ablation.schedule_grid", [&](const std::string& v, int ln) {
        cfg.grids.schedule.clear();
        for (const auto& tok : split_list(v)) {
            try {
                cfg.grids.schedule.push_back(schedule_mode_from_name(tok));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(ln, e.what());
            }
        }
    });

    on("output.cache", [&](const std::string& v, int) { cfg.cache_path = v; });

    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(lineno, "empty section name");
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(lineno, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(lineno, "empty key");
        if (section.empty()) throw ConfigError(lineno, "key '" + key + "' outside any section");
        const std::string full = section + "." + key;
        auto it = handlers.find(full);
        if (it == handlers.end()) throw ConfigError(lineno, "unknown key '" + full + "'");
        it->second(value, lineno);
    }

    if (!saw_space_name) throw ConfigError(0, "missing required key 'space.name'");
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError(0, "cannot open config file " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

SearchSpace resolve_space(RunConfig& cfg) {
    SearchSpace space = builtin_space(cfg.space_name);
    if (cfg.pipe.tau == 0)
        cfg.pipe.tau = static_cast<int>(std::ceil(0.6 * space.n_edges()));
    if (cfg.grids.tau.empty()) {
        for (int t = 1; t < space.n_edges() && t <= 5; ++t) cfg.grids.tau.push_back(t);
    }
    return space;
}

namespace {
std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace

void write_resolved_config(const RunConfig& cfg, std::ostream& out) {
    out << "[space]\n";
    out << "name = " << cfg.space_name << "\n\n";

    out << "[data]\n";
    out << "seed = " << cfg.data_seed << "\n";
    out << "n_samples = " << cfg.n_samples << "\n";
    out << "n_features = " << cfg.n_features << "\n";
    out << "n_classes = " << cfg.n_classes << "\n";
    out << "noise = " << fmt(cfg.noise) << "\n";
    out << "split_seed = " << cfg.split_seed << "\n";
    out << "fractions = " << fmt(cfg.fractions[0]) << "," << fmt(cfg.fractions[1]) << ","
        << fmt(cfg.fractions[2]) << "\n\n";

    out << "[pipeline]\n";
    out << "T = " << cfg.pipe.T << "\n";
    out << "M = " << cfg.pipe.M << "\n";
    out << "pairs = " << cfg.pipe.m << "\n";
    out << "tau = " << cfg.pipe.tau << "\n";
    out << "lambda_max = " << fmt(cfg.pipe.sched.lambda_max) << "\n";
    out << "schedule = " << schedule_mode_name(cfg.pipe.sched.mode) << "\n";
    out << "warmup_epochs = " << cfg.pipe.sched.t_w << "\n";
    out << "epochs_per_iter = " << cfg.pipe.epochs_per_iter << "\n";
    out << "seeds = ";
    for (size_t i = 0; i < cfg.pipe.seeds.size(); ++i)
        out << (i ? "," : "") << cfg.pipe.seeds[i];
    out << "\n";
    out << "probe_k = " << cfg.pipe.probe_k << "\n";
    out << "skdt_bin = " << fmt(cfg.pipe.skdt_bin) << "\n\n";

    out << "[evo]\n";
    out << "population = " << cfg.pipe.evo.population << "\n";
    out << "generations = " << cfg.pipe.evo.generations << "\n";
    out << "parent_fraction = " << fmt(cfg.pipe.evo.parent_fraction) << "\n";
    out << "mutation_per_child = " << cfg.pipe.evo.mutation_per_child << "\n";
    out << "topk = " << cfg.pipe.evo.topk << "\n\n";

    const Hparams& hp = cfg.pipe.hparams;
    out << "[hparams]\n";
    out << "width = " << hp.width << "\n";
    out << "batch_size = " << hp.batch_size << "\n";
    out << "supernet_lr = " << fmt(hp.supernet_lr) << "\n";
    out << "supernet_momentum = " << fmt(hp.supernet_momentum) << "\n";
    out << "supernet_weight_decay = " << fmt(hp.supernet_weight_decay) << "\n";
    out << "standalone_epochs = " << hp.standalone_epochs << "\n";
    out << "standalone_lr = " << fmt(hp.standalone_lr) << "\n";
    out << "standalone_momentum = " << fmt(hp.standalone_momentum) << "\n";
    out << "standalone_weight_decay = " << fmt(hp.standalone_weight_decay) << "\n";
    out << "standalone_seed = " << hp.standalone_seed << "\n\n";

    out << "[ablation]\n";
    out << "lambda_grid = ";
    for (size_t i = 0; i < cfg.grids.lambda.size(); ++i)
        out << (i ? "," : "") << fmt(cfg.grids.lambda[i]);
    out << "\n";
    out << "pairs_grid = ";
    for (size_t i = 0; i < cfg.grids.pairs.size(); ++i)
        out << (i ? "," : "") << cfg.grids.pairs[i];
    out << "\n";
    out << "iters_grid = ";
    for (size_t i = 0; i < cfg.grids.iters.size(); ++i)
        out << (i ? "," : "") << cfg.grids.iters[i];
    out << "\n";
    out << "tau_grid = ";
    for (size_t i = 0; i < cfg.grids.tau.size(); ++i) out << (i ? "," : "") << cfg.grids.tau[i];
    out << "\n";
    out << "schedule_grid = ";
    for (size_t i = 0; i < cfg.grids.schedule.size(); ++i)
        out << (i ? "," : "") << schedule_mode_name(cfg.grids.schedule[i]);
    out << "\n\n";

    out << "[output]\n";
    out << "cache = " << cfg.cache_path << "\n";
}

} // namespace ranknas
