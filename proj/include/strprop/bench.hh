#ifndef STRPROP_BENCH_HH
#define STRPROP_BENCH_HH

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "strprop/smt.hh"
#include "strprop/solver.hh"

namespace strprop {

    struct BenchOptions {
        std::chrono::milliseconds timeout{10'000};
        unsigned jobs = 1;
        SolverOptions solver;  ///< deadline is set per file
    };

    /// status: sat, unsat, unknown, timeout, unsupported or error.
    struct BenchRecord {
        std::string file;   ///< relative to the bench directory
        std::string group;  ///< first path component, "." for top-level files
        std::string status;
        SolveOutcome outcome;
        double millis = 0;
        std::string message;
    };

    struct GroupSummary {
        std::string group;
        std::size_t total = 0;  ///< sat + unknown + unsat + timeout
        std::size_t sat = 0;
        std::size_t unknown = 0;
        std::size_t unsat = 0;
        std::size_t timeout = 0;
        std::size_t unsupported = 0;
        std::size_t errors = 0;
        double avg_millis = 0;  ///< over sat/unknown/unsat files

        /// (sat + unsat) / total, as a percentage; 0 when total is 0.
        double solved_pct() const;
    };

    struct BenchReport {
        std::vector<BenchRecord> records;  ///< sorted by file
        std::vector<GroupSummary> groups;  ///< sorted by name
        GroupSummary overall;
    };

    /// Solves every *.smt2 under `dir` (recursively) on `jobs` threads. A
    /// file whose wall time exceeds the timeout counts as timeout whatever
    /// its verdict; resource errors count as timeout too.
    BenchReport run_bench(const std::filesystem::path& dir, const BenchOptions& options);

    /// Summary table, one row per group plus a "total" row.
    std::string format_table(const BenchReport& r);

    /// One stats_record() line per file, newline-terminated.
    std::string stats_lines(const BenchReport& r);

} // namespace strprop

#endif
