#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "strprop/bench.hh"

using namespace strprop;

namespace {

    namespace fs = std::filesystem;

    const fs::path kCorpus{STRPROP_CORPUS_DIR};

    // Scratch directory removed on scope exit.
    struct TempDir {
        fs::path path;
        explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("strprop-" + name)) {
            fs::remove_all(path);
            fs::create_directories(path);
        }
        ~TempDir() { fs::remove_all(path); }
    };

    const GroupSummary* group(const BenchReport& r, const std::string& name) {
        for (const GroupSummary& g : r.groups) {
            if (g.group == name) return &g;
        }
        return nullptr;
    }

} // namespace

TEST_CASE("golden files", "[bench]") {
    BenchReport r = run_bench(kCorpus / "golden", {});
    CHECK(r.records.size() == 3);
    CHECK(r.overall.total == 3);
    CHECK(r.overall.sat == 1);
    CHECK(r.overall.unsat == 1);
    CHECK(r.overall.unknown == 1);
    CHECK(r.overall.timeout == 0);
    CHECK(r.overall.solved_pct() == Catch::Approx(200.0 / 3));
    REQUIRE(r.groups.size() == 1);
    CHECK(r.groups[0].group == ".");
    CHECK(r.records[0].file == "not_tree.smt2");
}

TEST_CASE("empty directory", "[bench]") {
    TempDir dir("empty");
    BenchReport r = run_bench(dir.path, {});
    CHECK(r.records.empty());
    CHECK(r.groups.empty());
    CHECK(r.overall.total == 0);
    CHECK(r.overall.solved_pct() == 0);
    const std::string table = format_table(r);
    CHECK(table.find("total 0 ") == std::string::npos);
    CHECK(table.starts_with("group"));
    CHECK(stats_lines(r).empty());
}

TEST_CASE("timeouts", "[bench]") {
    TempDir dir("timeout");
    fs::copy_file(kCorpus / "mini/timeout/explosion16.smt2", dir.path / "explosion16.smt2");
    BenchOptions o;
    o.timeout = std::chrono::milliseconds(1);
    BenchReport r = run_bench(dir.path, o);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].status == "timeout");
    CHECK(r.overall.timeout == 1);
    CHECK(r.overall.total == 1);
    CHECK(r.overall.solved_pct() == 0);
}

TEST_CASE("unsupported and broken files are excluded from the totals", "[bench]") {
    BenchReport r = run_bench(kCorpus / "bad", {});
    CHECK(r.overall.total == 0);
    CHECK(r.overall.unsupported == 1);
    CHECK(r.overall.errors == 1);
    REQUIRE(r.records.size() == 2);
    CHECK(r.records[0].status == "unsupported");  // replace.smt2
    CHECK(r.records[1].status == "error");        // unbalanced.smt2
    CHECK(!r.records[1].message.empty());
    CHECK(format_table(r).find("excluded: unsupported=1 error=1") != std::string::npos);
}

TEST_CASE("mini corpus groups", "[bench]") {
    BenchOptions o;
    o.jobs = 3;
    BenchReport r = run_bench(kCorpus / "mini", o);
    CHECK(r.overall.total == 12);
    REQUIRE(r.groups.size() == 4);
    CHECK(group(r, "sat")->sat == 4);
    CHECK(group(r, "unsat")->unsat == 4);
    CHECK(group(r, "unknown")->unknown == 3);
    CHECK(group(r, "timeout")->timeout == 1);
    for (std::size_t i = 1; i < r.records.size(); ++i) CHECK(r.records[i - 1].file < r.records[i].file);

    const std::string lines = stats_lines(r);
    std::size_t n = 0;
    std::istringstream in(lines);
    for (std::string line; std::getline(in, line); ++n) {
        auto j = nlohmann::json::parse(line);
        CHECK(j.contains("verdict"));
        CHECK(j.contains("millis"));
    }
    CHECK(n == 12);
}

TEST_CASE("a deleted file is reported as an error", "[bench]") {
    TempDir dir("unreadable");
    fs::create_directory(dir.path / "sub");
    fs::create_symlink(dir.path / "missing.smt2", dir.path / "sub" / "dangling.smt2");
    std::ofstream(dir.path / "sub" / "ok.smt2") << "(declare-fun x () String)(check-sat)\n";
    BenchReport r = run_bench(dir.path, {});
    REQUIRE(r.records.size() == 2);
    CHECK(r.records[0].status == "error");
    CHECK(r.records[0].group == "sub");
    CHECK(r.records[1].status == "sat");
}
