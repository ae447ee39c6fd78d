// strprop: command-line front end.
//
//   strprop solve FILE [--model] [--stats OUT] [--dump-dot DIR] [--optimize]
//                      [--max-transitions N] [--timeout MS]
//   strprop bench DIR [--timeout MS] [--jobs N] [--stats OUT] [--optimize]
//                     [--max-transitions N]
//   strprop print FILE      re-print the parsed script
//   strprop desugar FILE    one problem dump per disjunct
//
// Exit status: 0 verdict, 1 parse/unsupported/input error, 2 resource error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "strprop/bench.hh"
#include "strprop/errors.hh"
#include "strprop/smt.hh"
#include "strprop/solver.hh"

namespace fs = std::filesystem;
using namespace strprop;

namespace {

    constexpr int kExitInput = 1;
    constexpr int kExitResource = 2;

    std::string read_file(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot read " + path);
        std::stringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    void write_file(const std::string& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << text;
    }

    std::string file_safe(const std::string& name) {
        std::string out = name;
        for (char& c : out) {
            if (c == '/' || c == '\\' || c == ' ' || c == '|') c = '_';
        }
        return out;
    }

    struct Common {
        bool optimize = false;
        std::size_t max_transitions = kDefaultMaxTransitions;
        long timeout_ms = 0;
    };

    SolverOptions solver_options(const Common& c) {
        SolverOptions o;
        o.optimize = c.optimize;
        o.max_transitions = c.max_transitions;
        return o;
    }

    int solve_command(const std::string& file, const Common& common, bool model, const std::string& stats,
                      const std::string& dot_dir) {
        SmtScript script = parse_smt(read_file(file));
        SolverOptions options = solver_options(common);
        if (common.timeout_ms > 0) {
            options.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(common.timeout_ms);
        }
        SolveOutcome o = solve_script(script, options, !dot_dir.empty());
        std::cout << o.verdict << "\n";
        if (model) {
            if (o.model) std::cout << print_model(*o.model);
            if (o.witness) std::cout << "; empty language: " << o.witness->name << "\n";
            if (o.reason) std::cout << "; reason: " << to_string(*o.reason) << "\n";
        }
        if (!stats.empty()) write_file(stats, stats_record(file, o) + "\n");
        if (!dot_dir.empty()) {
            fs::create_directories(dot_dir);
            for (std::size_t i = 0; i < o.automata.size(); ++i) {
                for (const auto& [v, a] : o.automata[i]) {
                    std::string name = file_safe(v.name);
                    if (o.automata.size() > 1) name = "d" + std::to_string(i + 1) + "-" + name;
                    write_file((fs::path(dot_dir) / (name + ".dot")).string(), to_dot(a, v.name));
                }
            }
        }
        return 0;
    }

    int bench_command(const std::string& dir, const Common& common, unsigned jobs, const std::string& stats) {
        BenchOptions options;
        options.solver = solver_options(common);
        options.jobs = jobs;
        if (common.timeout_ms > 0) options.timeout = std::chrono::milliseconds(common.timeout_ms);
        BenchReport report = run_bench(dir, options);
        std::cout << format_table(report);
        for (const BenchRecord& r : report.records) {
            if (r.status == "error" || r.status == "unsupported") {
                std::cerr << r.file << ": " << r.status << ": " << r.message << "\n";
            }
        }
        if (!stats.empty()) write_file(stats, stats_lines(report));
        return 0;
    }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"String constraint solver by forward propagation over symbolic automata"};
    app.require_subcommand(1);

    Common common;
    std::string path, stats, dot_dir;
    bool model = false;
    unsigned jobs = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_flag("--optimize", common.optimize, "Sigma-star absorption rewrites");
        sub->add_option("--max-transitions", common.max_transitions, "Per-automaton transition budget")
            ->check(CLI::PositiveNumber);
        sub->add_option("--timeout", common.timeout_ms, "Timeout in milliseconds")->check(CLI::NonNegativeNumber);
        sub->add_option("--stats", stats, "Write JSON-lines stats to this file");
    };

    CLI::App* solve = app.add_subcommand("solve", "Solve one SMT-LIB file");
    solve->add_option("file", path, "Input .smt2 file")->required();
    solve->add_flag("--model", model, "Print a model for sat results");
    solve->add_option("--dump-dot", dot_dir, "Write refined automata as Graphviz files");
    add_common(solve);

    CLI::App* bench = app.add_subcommand("bench", "Solve every .smt2 file in a directory");
    bench->add_option("dir", path, "Benchmark directory")->required();
    bench->add_option("--jobs", jobs, "Parallel solves")->check(CLI::PositiveNumber);
    add_common(bench);

    CLI::App* print = app.add_subcommand("print", "Parse and re-print an SMT-LIB file");
    print->add_option("file", path, "Input .smt2 file")->required();

    CLI::App* desugar_cmd = app.add_subcommand("desugar", "Dump the core problems of an SMT-LIB file");
    desugar_cmd->add_option("file", path, "Input .smt2 file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return solve_command(path, common, model, stats, dot_dir);
        if (bench->parsed()) return bench_command(path, common, jobs, stats);
        SmtScript script = parse_smt(read_file(path));
        if (print->parsed()) {
            std::cout << print_smt(script);
            return 0;
        }
        const auto problems = desugar(script.assertions, script.declared_vars());
        for (std::size_t i = 0; i < problems.size(); ++i) {
            if (problems.size() > 1) std::cout << "; disjunct " << i + 1 << "\n";
            std::cout << dump(problems[i]);
        }
        return 0;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kExitResource;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitInput;
    } catch (const UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
