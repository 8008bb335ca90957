#include "ranknas/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "ranknas/errors.hpp"

namespace ranknas {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) throw IoError("cannot open " + p.string() + " for writing");
    return out;
}

void write_arm_details(std::ostream& iters, std::ostream& ranking, std::ostream& train_log,
                       uint64_t seed, const std::string& arm, const PipelineReport& rep,
                       int epochs_per_iter) {
    for (const IterationStats& st : rep.iterations) {
        iters << seed << ',' << arm << ',' << st.iter << ',' << fmt(st.skdt) << ','
              << fmt(st.mean_landmark_acc) << '\n';
    }
    for (size_t it = 0; it < rep.probes.size(); ++it) {
        const RankingSample& s = rep.probes[it].sample;
        for (size_t i = 0; i < s.archs.size(); ++i) {
            ranking << seed << ',' << arm << ',' << (it + 1) << ',' << s.archs[i].to_string()
                    << ',' << fmt(s.gt_acc[i]) << ',' << fmt(s.proxy_acc[i]) << '\n';
        }
    }
    for (const EpochSummary& e : rep.epoch_log) {
        train_log << seed << ',' << arm << ',' << e.epoch << ',' << fmt(e.mean_task_loss)
                  << ',' << fmt(e.mean_reg_loss) << ',' << fmt(e.lambda) << ',';
        // the probe runs at iteration boundaries; other epochs leave it empty
        if (e.epoch % epochs_per_iter == 0) {
            const size_t it = static_cast<size_t>(e.epoch / epochs_per_iter) - 1;
            if (it < rep.iterations.size()) train_log << fmt(rep.iterations[it].skdt);
        }
        train_log << '\n';
    }
}

} // namespace

void write_run_outputs(const std::filesystem::path& dir, const RunConfig& cfg,
                       const ABReport& ab) {
    std::filesystem::create_directories(dir);

    auto ab_csv = open_out(dir / "ab.csv");
    ab_csv << "seed,arm,skdt,final_arch,final_acc\n";
    for (const ABRow& r : ab.rows) {
        ab_csv << r.seed << ',' << r.arm << ',' << fmt(r.skdt) << ',' << r.final_arch << ','
               << fmt(r.final_acc) << '\n';
    }

    auto iters = open_out(dir / "iterations.csv");
    auto ranking = open_out(dir / "ranking.csv");
    auto train_log = open_out(dir / "train_log.csv");
    iters << "seed,arm,iter,skdt,mean_landmark_acc\n";
    ranking << "seed,arm,iter,arch,gt_acc,proxy_acc\n";
    train_log << "seed,arm,epoch,mean_task_loss,mean_reg_loss,lambda,skdt_probe\n";
    for (size_t i = 0; i < cfg.pipe.seeds.size(); ++i) {
        write_arm_details(iters, ranking, train_log, cfg.pipe.seeds[i], "baseline",
                          ab.baseline_reports[i], cfg.pipe.epochs_per_iter);
        write_arm_details(iters, ranking, train_log, cfg.pipe.seeds[i], "regularized",
                          ab.regularized_reports[i], cfg.pipe.epochs_per_iter);
    }

    auto rep = open_out(dir / "report.txt");
    rep << "RANKNAS-REPORT 1\n\n";
    rep << "== config ==\n";
    write_resolved_config(cfg, rep);
    rep << "\n== results ==\n";
    rep << "seeds: " << cfg.pipe.seeds.size() << "\n";
    rep << "skdt baseline:    " << fmt(ab.mean_skdt_baseline) << " +- "
        << fmt(ab.std_skdt_baseline) << "\n";
    rep << "skdt regularized: " << fmt(ab.mean_skdt_regularized) << " +- "
        << fmt(ab.std_skdt_regularized) << "\n";
    rep << "skdt delta:       " << fmt(ab.mean_skdt_regularized - ab.mean_skdt_baseline)
        << " (positive on " << ab.seeds_with_positive_delta << "/" << cfg.pipe.seeds.size()
        << " seeds)\n";
    rep << "final acc baseline:    " << fmt(ab.mean_acc_baseline) << "\n";
    rep << "final acc regularized: " << fmt(ab.mean_acc_regularized) << "\n";
    for (size_t i = 0; i < cfg.pipe.seeds.size(); ++i) {
        rep << "seed " << cfg.pipe.seeds[i] << ": baseline "
            << ab.baseline_reports[i].final_arch.to_string();
        if (ab.baseline_reports[i].final_rank)
            rep << " (rank " << *ab.baseline_reports[i].final_rank << ")";
        rep << ", regularized " << ab.regularized_reports[i].final_arch.to_string();
        if (ab.regularized_reports[i].final_rank)
            rep << " (rank " << *ab.regularized_reports[i].final_rank << ")";
        rep << "\n";
    }
    rep << "\n== timing (informational, excluded from reproducibility) ==\n";
    double wall = 0.0;
    for (const auto& r : ab.baseline_reports) wall += r.standalone_wall_s;
    for (const auto& r : ab.regularized_reports) wall += r.standalone_wall_s;
    rep << "stand-alone training wall time: " << fmt(wall) << " s\n";
}

void write_ablation_csv(const std::filesystem::path& dir, const std::string& knob,
                        const std::vector<AblationRow>& rows) {
    std::filesystem::create_directories(dir);
    auto out = open_out(dir / ("ablate_" + knob + ".csv"));
    out << "knob,value,seed,skdt,final_arch,final_acc\n";
    for (const AblationRow& r : rows) {
        out << r.knob << ',' << r.value << ',' << r.seed << ',' << fmt(r.skdt) << ','
            << r.final_arch << ',' << fmt(r.final_acc) << '\n';
    }
}

namespace {

struct Stats {
    std::vector<double> skdt, acc;
};

void aggregate_line(std::ostream& out, std::ofstream& long_csv, const std::string& group,
                    const Stats& s) {
    auto mean_std = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        const double stdev = v.size() > 1 ? std::sqrt(var / (v.size() - 1)) : 0.0;
        return std::pair{mean, stdev};
    };
    const auto [ms, ss] = mean_std(s.skdt);
    const auto [ma, sa] = mean_std(s.acc);
    char line[256];
    std::snprintf(line, sizeof line, "%-28s %3zu  %8.4f +- %.4f  %8.4f +- %.4f\n",
                  group.c_str(), s.skdt.size(), ms, ss, ma, sa);
    out << line;
    long_csv << group << ",skdt," << fmt(ms) << ',' << fmt(ss) << '\n';
    long_csv << group << ",final_acc," << fmt(ma) << ',' << fmt(sa) << '\n';
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw IoError("cannot open " + p.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::istringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) row.push_back(tok);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

void summarize_outputs(const std::filesystem::path& dir, std::ostream& out) {
    const auto ab_path = dir / "ab.csv";
    std::vector<std::filesystem::path> ablation_files;
    if (std::filesystem::is_directory(dir)) {
        for (const auto& e : std::filesystem::directory_iterator(dir)) {
            const std::string name = e.path().filename().string();
            if (name.rfind("ablate_", 0) == 0 && name.size() > 4 &&
                name.substr(name.size() - 4) == ".csv")
                ablation_files.push_back(e.path());
        }
        std::sort(ablation_files.begin(), ablation_files.end());
    }
    const bool have_ab = std::filesystem::exists(ab_path);
    if (!have_ab && ablation_files.empty())
        throw IoError("no ab.csv or ablate_*.csv found in " + dir.string());

    auto long_csv = open_out(dir / "summary_long.csv");
    long_csv << "group,metric,mean,std\n";

    out << "group                          n      skdt (mean+-std)    final_acc (mean+-std)\n";
    if (have_ab) {
        std::map<std::string, Stats> by_arm;
        const auto rows = read_csv(ab_path);
        for (size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].size() < 5) throw IoError("malformed row in ab.csv");
            Stats& s = by_arm[rows[i][1]];
            s.skdt.push_back(std::stod(rows[i][2]));
            s.acc.push_back(std::stod(rows[i][4]));
        }
        for (const auto& [arm, s] : by_arm) aggregate_line(out, long_csv, "ab/" + arm, s);
        if (by_arm.count("baseline") && by_arm.count("regularized")) {
            auto mean = [](const std::vector<double>& v) {
                double m = 0.0;
                for (double x : v) m += x;
                return m / static_cast<double>(v.size());
            };
            out << "delta (regularized - baseline): skdt "
                << fmt(mean(by_arm["regularized"].skdt) - mean(by_arm["baseline"].skdt))
                << ", final_acc "
                << fmt(mean(by_arm["regularized"].acc) - mean(by_arm["baseline"].acc)) << "\n";
        }
    }
    for (const auto& p : ablation_files) {
        std::map<std::string, Stats> by_value;
        const auto rows = read_csv(p);
        for (size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].size() < 6) throw IoError("malformed row in " + p.string());
            Stats& s = by_value[rows[i][0] + "=" + rows[i][1]];
            s.skdt.push_back(std::stod(rows[i][3]));
            s.acc.push_back(std::stod(rows[i][5]));
        }
        for (const auto& [value, s] : by_value) aggregate_line(out, long_csv, value, s);
    }
}

} // namespace ranknas
