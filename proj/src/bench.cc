#include "strprop/bench.hh"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "strprop/errors.hh"

namespace strprop {

namespace fs = std::filesystem;

double GroupSummary::solved_pct() const {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(sat + unsat) / static_cast<double>(total);
}

namespace {

    BenchRecord run_one(const fs::path& dir, const fs::path& file, const BenchOptions& options) {
        BenchRecord rec;
        const fs::path rel = file.lexically_relative(dir);
        rec.file = rel.generic_string();
        rec.group = std::distance(rel.begin(), rel.end()) > 1 ? rel.begin()->generic_string() : ".";

        const auto start = std::chrono::steady_clock::now();
        auto elapsed = [&] {
            return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        };
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            rec.status = "error";
            rec.message = "cannot read file";
            return rec;
        }
        std::stringstream buf;
        buf << in.rdbuf();

        SolverOptions solver = options.solver;
        solver.deadline = start + options.timeout;
        try {
            rec.outcome = solve_script(parse_smt(buf.str()), solver);
            rec.status = rec.outcome.verdict;
        } catch (const ResourceError& e) {
            rec.status = "timeout";
            rec.message = e.what();
        } catch (const UnsupportedError& e) {
            rec.status = "unsupported";
            rec.message = e.what();
        } catch (const std::exception& e) {
            rec.status = "error";
            rec.message = e.what();
        }
        rec.millis = elapsed();
        // the harness clock has the last word
        if (rec.millis > static_cast<double>(options.timeout.count()) &&
            (rec.status == "sat" || rec.status == "unsat" || rec.status == "unknown")) {
            rec.status = "timeout";
            rec.message = "wall-clock timeout";
        }
        if (rec.status != "sat" && rec.status != "unsat" && rec.status != "unknown") {
            rec.outcome = SolveOutcome{};
            rec.outcome.verdict = rec.status;
            rec.outcome.millis = rec.millis;
        }
        return rec;
    }

    void add(GroupSummary& g, const BenchRecord& r, double& time_sum, std::size_t& timed) {
        if (r.status == "unsupported") {
            ++g.unsupported;
            return;
        }
        if (r.status == "error") {
            ++g.errors;
            return;
        }
        ++g.total;
        if (r.status == "timeout") {
            ++g.timeout;
            return;
        }
        if (r.status == "sat") ++g.sat;
        if (r.status == "unsat") ++g.unsat;
        if (r.status == "unknown") ++g.unknown;
        time_sum += r.millis;
        ++timed;
    }

} // namespace

BenchReport run_bench(const fs::path& dir, const BenchOptions& options) {
    if (!fs::is_directory(dir)) throw std::invalid_argument("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_directory() && entry.path().extension() == ".smt2") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    BenchReport report;
    report.records.resize(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
            report.records[i] = run_one(dir, files[i], options);
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(files.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
        worker();
    }
    std::sort(report.records.begin(), report.records.end(),
              [](const BenchRecord& a, const BenchRecord& b) { return a.file < b.file; });

    std::map<std::string, GroupSummary> groups;
    std::map<std::string, std::pair<double, std::size_t>> times;
    double total_time = 0;
    std::size_t total_timed = 0;
    report.overall.group = "total";
    for (const BenchRecord& r : report.records) {
        GroupSummary& g = groups[r.group];
        g.group = r.group;
        auto& [sum, n] = times[r.group];
        add(g, r, sum, n);
        add(report.overall, r, total_time, total_timed);
    }
    for (auto& [name, g] : groups) {
        const auto& [sum, n] = times[name];
        g.avg_millis = n == 0 ? 0.0 : sum / static_cast<double>(n);
        report.groups.push_back(g);
    }
    report.overall.avg_millis = total_timed == 0 ? 0.0 : total_time / static_cast<double>(total_timed);
    return report;
}

std::string format_table(const BenchReport& r) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-24s %7s %7s %7s %7s %8s %12s %8s\n", "group", "total", "sat", "unknown",
                  "unsat", "solved%", "avg-time(ms)", "timeout");
    out += line;
    auto row = [&](const GroupSummary& g) {
        std::snprintf(line, sizeof line, "%-24s %7zu %7zu %7zu %7zu %7.1f%% %12.2f %8zu\n", g.group.c_str(), g.total,
                      g.sat, g.unknown, g.unsat, g.solved_pct(), g.avg_millis, g.timeout);
        out += line;
    };
    for (const GroupSummary& g : r.groups) row(g);
    row(r.overall);
    std::snprintf(line, sizeof line, "excluded: unsupported=%zu error=%zu\n", r.overall.unsupported, r.overall.errors);
    out += line;
    return out;
}

std::string stats_lines(const BenchReport& r) {
    std::string out;
    for (const BenchRecord& rec : r.records) out += stats_record(rec.file, rec.outcome) + "\n";
    return out;
}

} // namespace strprop
