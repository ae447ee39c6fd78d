// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <regex>
#include <set>
#include <sstream>
#include <string>

#include "random.hh"
#include "strprop/bench.hh"
#include "strprop/oracle.hh"
#include "strprop/smt.hh"
#include "strprop/solver.hh"

using namespace strprop;
using namespace strprop::testing;

namespace {

    namespace fs = std::filesystem;
    using Clock = std::chrono::steady_clock;

    const fs::path kCorpus{STRPROP_CORPUS_DIR};

    double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

    std::string slurp(const fs::path& p) {
        std::ifstream in(p);
        if (!in) throw std::runtime_error("cannot read " + p.string());
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    struct Result {
        bool pass = true;
        std::string detail;

        void require(bool ok, const std::string& what) {
            if (!ok && pass) {
                pass = false;
                detail = what;
            }
        }
    };

    // Desugars a single-disjunct script file.
    Problem load_problem(const fs::path& file) {
        SmtScript s = parse_smt(slurp(file));
        std::vector<VarId> declared = s.declared_vars();
        std::vector<Problem> ps = desugar(s.assertions, declared);
        if (ps.size() != 1) throw std::runtime_error(file.string() + ": expected one disjunct");
        return ps[0];
    }

    Problem explosion(int k) {
        Problem p;
        p.vars.insert(VarId{"x"});
        p.reg.emplace(VarId{"x"}, sigma_star());
        for (int i = 1; i <= k; ++i) {
            VarId xi{"x" + std::to_string(i)};
            p.vars.insert(xi);
            p.reg.emplace(xi, sigma_star());
            p.concat[VarId{"x"}].insert({xi, xi});
        }
        return p;
    }

    std::size_t pow_of(std::size_t base, int k) {
        std::size_t r = 1;
        for (int i = 0; i < k; ++i) r *= base;
        return r;
    }

    // Iteration counts seen by every solve in this run.
    std::size_t g_solves = 0;
    std::size_t g_iteration_violations = 0;

    Verdict tracked_solve(const Problem& p) {
        Verdict v = solve(p);
        ++g_solves;
        if (v.stats.iterations > p.vars.size()) ++g_iteration_violations;
        return v;
    }

    // 1. URL formula: sat with a checked model; adding the script filter gives unsat at url.
    Result url_pair() {
        Result r;
        for (const char* name : {"sat/url.smt2", "unsat/url_script.smt2"}) {
            const bool want_sat = name[0] == 's';
            const auto t0 = Clock::now();
            const fs::path file = kCorpus / "mini" / name;
            SolveOutcome o = solve_script(parse_smt(slurp(file)));
            Problem p = load_problem(file);
            Verdict v = tracked_solve(p);
            const double secs = seconds_since(t0);
            r.require(secs < 1.0, std::string(name) + " took " + std::to_string(secs) + " s");
            if (want_sat) {
                r.require(o.verdict == "sat" && v.sat(), "url formula not sat");
                if (v.sat()) r.require(sat_str(p, std::get<Sat>(v.kind).model), "model fails sat_str");
            } else {
                r.require(o.verdict == "unsat" && v.unsat(), "url formula with script filter not unsat");
                r.require(o.witness == VarId{"url"}, "witness is not url");
            }
            r.detail += (r.detail.empty() ? "" : ", ") + std::string(name) + " " + o.verdict + " in " +
                        std::to_string(static_cast<int>(secs * 1000)) + " ms";
        }
        return r;
    }

    // 2. y = x + x with y in {ab} and x in {a, b}.
    Result tree_boundary() {
        Result r;
        Problem p = load_problem(kCorpus / "mini/unknown/not_tree.smt2");
        Verdict v = tracked_solve(p);
        r.require(v.unknown() && std::get<Unknown>(v.kind).reason == UnknownReason::NotTree, "verdict is " + std::string(v.name()));
        OracleVerdict o = oracle_sat(p, Bound{4, IntervalSet{Interval('a', 'd')}});
        r.require(std::holds_alternative<UnsatWithin>(o), "oracle found a model");
        if (r.pass) r.detail = "unknown (not-tree), oracle: no model with len <= 4 over [a-d]";
        return r;
    }

    struct Counts {
        std::size_t states, transitions;
        double secs;
    };

    std::vector<Counts> g_explosion;  // index k

    Counts explosion_counts(int k) {
        const auto t0 = Clock::now();
        Propagation prop = forward_prop(explosion(k));
        const SNfa& x = prop.refined().at(VarId{"x"});
        return {x.num_states(), x.num_transitions(), seconds_since(t0)};
    }

    // 3. Exact state and transition counts for k = 11, 12, 13.
    Result explosion_table() {
        Result r;
        g_explosion.assign(14, Counts{0, 0, 0});
        double total = 0;
        for (int k = 11; k <= 13; ++k) {
            Counts c = explosion_counts(k);
            g_explosion[k] = c;
            total += c.secs;
            r.require(c.states == pow_of(2, k) && c.transitions == pow_of(3, k),
                      "k=" + std::to_string(k) + ": " + std::to_string(c.states) + "/" +
                          std::to_string(c.transitions));
            r.detail += (r.detail.empty() ? "" : ", ") + ("k=" + std::to_string(k) + " " + std::to_string(c.states) +
                                                           "/" + std::to_string(c.transitions));
        }
        r.require(total < 30.0, "took " + std::to_string(total) + " s");
        char buf[64];
        std::snprintf(buf, sizeof buf, " in %.2f s", total);
        if (r.pass) r.detail += buf;
        return r;
    }

    // 4. Growth factors 2 and 3 per added equation.
    Result growth_ratios() {
        Result r;
        if (g_explosion.size() < 14) g_explosion.assign(14, Counts{0, 0, 0});
        for (int k = 1; k <= 13; ++k) {
            if (g_explosion[k].states == 0) g_explosion[k] = explosion_counts(k);
        }
        for (int k = 2; k <= 13; ++k) {
            const Counts& a = g_explosion[k - 1];
            const Counts& b = g_explosion[k];
            r.require(b.states == 2 * a.states && b.transitions == 3 * a.transitions,
                      "ratio broken at k=" + std::to_string(k));
        }
        if (r.pass) r.detail = "states x2 and transitions x3 for every k in 2..13";
        return r;
    }

    std::set<Word> concat_words(const std::set<Word>& l1, const std::set<Word>& l2, std::size_t max_len) {
        std::set<Word> out;
        for (const Word& x : l1) {
            for (const Word& y : l2) {
                if (x.size() + y.size() <= max_len) out.insert(x + y);
            }
        }
        return out;
    }

    // 5. Concatenation and product against brute force.
    Result automata_properties() {
        Result r;
        const auto t0 = Clock::now();
        Rng rng(500);
        const Bound b{6, IntervalSet{Interval(97, 100)}};
        std::size_t violations = 0;
        for (int i = 0; i < 500; ++i) {
            SNfa a1 = random_snfa(rng, {5, 97, 100});
            SNfa a2 = random_snfa(rng, {5, 97, 100});
            const auto l1 = oracle_lang(a1, b), l2 = oracle_lang(a2, b);
            std::set<Word> both;
            for (const Word& w : l1) {
                if (l2.contains(w)) both.insert(w);
            }
            SNfa c = concat(a1, a2), p = product(a1, a2);
            if (oracle_lang(c, b) != concat_words(l1, l2, b.max_len)) ++violations;
            if (oracle_lang(p, b) != both) ++violations;
            for (const Word& w : enumerate_words(b)) {
                if (accepts(c, w) != oracle_accepts(c, w) || accepts(p, w) != both.contains(w)) {
                    ++violations;
                    break;
                }
            }
        }
        const double secs = seconds_since(t0);
        r.require(violations == 0, std::to_string(violations) + " violations");
        r.require(secs < 60.0, "took " + std::to_string(secs) + " s");
        char buf[96];
        std::snprintf(buf, sizeof buf, "500 pairs, 0 violations in %.1f s", secs);
        if (r.pass) r.detail = buf;
        return r;
    }

    const Bound kProblemBound{6, IntervalSet{Interval('a', 'c')}};

    // 6. Unsat verdicts confirmed by exhaustive search.
    Result soundness() {
        Result r;
        Rng rng(600);
        ProblemShape shape;
        std::size_t unsat = 0, violations = 0;
        for (int i = 0; i < 300; ++i) {
            Problem p = random_problem(rng, shape);
            Verdict v = tracked_solve(p);
            if (!v.unsat()) continue;
            ++unsat;
            if (!std::holds_alternative<UnsatWithin>(oracle_sat(p, kProblemBound))) ++violations;
        }
        r.require(violations == 0, std::to_string(violations) + " unsat verdicts with an oracle model");
        r.require(unsat > 0, "population produced no unsat verdicts");
        if (r.pass) r.detail = "300 problems, " + std::to_string(unsat) + " unsat, all confirmed within len <= 6";
        return r;
    }

    // 7. Under the tree property, sat exactly when the oracle finds a model.
    Result completeness() {
        Result r;
        Rng rng(700);
        ProblemShape shape;
        shape.tree = true;
        shape.bounded_lhs = true;
        std::size_t sat = 0, unsat = 0, violations = 0;
        for (int i = 0; i < 300; ++i) {
            Problem p = random_problem(rng, shape);
            Verdict v = tracked_solve(p);
            const bool oracle = std::holds_alternative<OracleSat>(oracle_sat(p, kProblemBound));
            if (v.unknown() || v.sat() != oracle) ++violations;
            if (v.sat()) {
                ++sat;
                if (!sat_str(p, std::get<Sat>(v.kind).model)) ++violations;
            } else {
                ++unsat;
            }
        }
        r.require(violations == 0, std::to_string(violations) + " violations");
        r.require(sat > 0 && unsat > 0, "population is one-sided");
        if (r.pass) {
            r.detail = "300 tree problems, " + std::to_string(sat) + " sat / " + std::to_string(unsat) +
                       " unsat, 0 violations";
        }
        return r;
    }

    // 8. Refined languages satisfy the propagation contract word by word.
    Result propagation_contract() {
        Result r;
        Rng rng(800);
        ProblemShape shape;
        const Bound b{5, IntervalSet{Interval('a', 'c')}};
        std::size_t checked = 0, violations = 0;
        for (int i = 0; i < 100; ++i) {
            Problem p = random_problem(rng, shape);
            Propagation prop = forward_prop(p);
            if (prop.cyclic()) {
                ++violations;
                continue;
            }
            const RefinedReg& reg = prop.refined();
            std::map<VarId, std::set<Word>> refined;
            for (const auto& [v, a] : reg) refined.emplace(v, oracle_lang(a, b));
            for (const VarId& v : p.vars) {
                const std::set<Word> original = oracle_lang(p.reg.at(v), b);
                for (const Word& w : enumerate_words(b)) {
                    bool expected = original.contains(w);
                    for (const auto& [v1, v2] : p.equations(v)) {
                        bool split = false;
                        for (std::size_t k = 0; k <= w.size() && !split; ++k) {
                            split = refined.at(v1).contains(w.substr(0, k)) && refined.at(v2).contains(w.substr(k));
                        }
                        expected = expected && split;
                    }
                    if (refined.at(v).contains(w) != expected) ++violations;
                    ++checked;
                }
            }
        }
        r.require(violations == 0, std::to_string(violations) + " violations");
        if (r.pass) r.detail = "100 problems, " + std::to_string(checked) + " (variable, word) pairs";
        return r;
    }

    std::string stable_stats(const std::string& file, const SolveOutcome& o) {
        static const std::regex millis(R"("millis":[^,}]*)");
        return std::regex_replace(stats_record(file, o), millis, "\"millis\":0");
    }

    // 9. Iteration bound over every solve above, and repeatable stats.
    Result termination() {
        Result r;
        std::size_t runs = 0;
        Rng rng(900);
        ProblemShape shape;
        for (int i = 0; i < 100; ++i) {
            Problem p = random_problem(rng, shape);
            Verdict a = tracked_solve(p), b = tracked_solve(p);
            r.require(a.stats.sizes == b.stats.sizes && a.stats.iterations == b.stats.iterations &&
                          a.name() == b.name(),
                      "random problem " + std::to_string(i) + " is not repeatable");
            Propagation pa = forward_prop(p), pb = forward_prop(p);
            if (!pa.cyclic()) r.require(dump(pa.refined()) == dump(pb.refined()), "refined dumps differ");
            ++runs;
        }
        for (const auto& e : fs::recursive_directory_iterator(kCorpus / "mini")) {
            if (e.path().extension() != ".smt2" || e.path().parent_path().filename() == "timeout") continue;
            SmtScript s = parse_smt(slurp(e.path()));
            const std::string name = e.path().filename().string();
            r.require(stable_stats(name, solve_script(s)) == stable_stats(name, solve_script(s)),
                      name + ": stats differ between runs");
            ++runs;
        }
        r.require(g_iteration_violations == 0,
                  std::to_string(g_iteration_violations) + " solves exceeded |vars| iterations");
        if (r.pass) {
            r.detail = std::to_string(g_solves) + " solves within |vars| iterations, " + std::to_string(runs) +
                       " repeated runs identical";
        }
        return r;
    }

    // 10. Bench harness on the bundled mini corpus.
    Result bench_mini() {
        Result r;
        BenchOptions o;
        o.jobs = 2;
        BenchReport rep = run_bench(kCorpus / "mini", o);
        const GroupSummary& t = rep.overall;
        r.require(t.total == 12 && t.sat == 4 && t.unsat == 4 && t.unknown == 3 && t.timeout == 1,
                  "totals " + std::to_string(t.total) + " sat=" + std::to_string(t.sat) + " unsat=" +
                      std::to_string(t.unsat) + " unknown=" + std::to_string(t.unknown) +
                      " timeout=" + std::to_string(t.timeout));
        const std::string table = format_table(rep);
        r.require(table.starts_with("group"), "table has no header");
        if (r.pass) r.detail = "12 files: 4 sat, 4 unsat, 3 unknown, 1 timeout";
        return r;
    }

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
        {"url formula sat/unsat", url_pair},
        {"tree-property boundary", tree_boundary},
        {"explosion counts k=11..13", explosion_table},
        {"explosion growth ratios", growth_ratios},
        {"concat/product vs oracle", automata_properties},
        {"unsat soundness", soundness},
        {"tree completeness", completeness},
        {"propagation contract", propagation_contract},
        {"termination and determinism", termination},
        {"bench mini corpus", bench_mini},
    };
    int failed = 0;
    int n = 0;
    for (const auto& [name, run] : criteria) {
        ++n;
        Result r;
        try {
            r = run();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        if (!r.pass) ++failed;
        std::printf("%s %2d %s: %s\n", r.pass ? "PASS" : "FAIL", n, name.c_str(), r.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", n - failed, n);
    return failed == 0 ? 0 : 1;
}
