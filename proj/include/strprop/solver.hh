#ifndef STRPROP_SOLVER_HH
#define STRPROP_SOLVER_HH

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "strprop/constraints.hh"
#include "strprop/snfa.hh"

namespace strprop {

    inline constexpr std::size_t kDefaultMaxTransitions = 5'000'000;

    struct SolverOptions {
        /// Sigma-star absorption: product(S*, a) -> a, product(a, S*) -> a,
        /// concat(S*, S*) -> S*.
        bool optimize = false;
        /// Per-automaton transition budget.
        std::size_t max_transitions = kDefaultMaxTransitions;
        std::optional<std::chrono::steady_clock::time_point> deadline;

        Budget budget() const { return Budget{max_transitions, deadline}; }
    };

    /// Refined regular constraints, one automaton per variable.
    using RefinedReg = std::map<VarId, SNfa>;

    /// { v in s | every dependency of v is in r }.
    std::set<VarId> ready_set(const std::set<VarId>& s, const Problem& p, const std::set<VarId>& r);

    /// Refines each v in c: reg(v) := reg(v) x concat(reg(v1), reg(v2)) for
    /// every equation v = v1 + v2, in sorted pair order.
    RefinedReg var_lang(const std::set<VarId>& c, const Problem& p, RefinedReg reg,
                        const SolverOptions& options = {});

    struct CyclicDependency {
        std::set<VarId> stuck;
    };

    struct Propagation {
        std::variant<RefinedReg, CyclicDependency> result;
        std::size_t iterations = 0;

        bool cyclic() const { return std::holds_alternative<CyclicDependency>(result); }
        const RefinedReg& refined() const { return std::get<RefinedReg>(result); }
    };

    /// Bottom-up propagation over the dependency graph. Stops with
    /// CyclicDependency when no remaining variable is ready. Throws
    /// ResourceError when the budget is exhausted.
    Propagation forward_prop(const Problem& p, const SolverOptions& options = {});

    struct Sat {
        Assignment model;
    };
    struct Unsat {
        VarId witness;  ///< first variable (by name) whose refined language is empty
    };
    enum class UnknownReason { NotTree, Cyclic };
    struct Unknown {
        UnknownReason reason = UnknownReason::NotTree;
    };

    struct SolveStats {
        struct Size {
            std::size_t states = 0;
            std::size_t transitions = 0;
            bool operator==(const Size&) const = default;
        };
        std::map<VarId, Size> sizes;
        std::size_t iterations = 0;
        double millis = 0;

        std::size_t max_states() const;
        std::size_t max_transitions() const;
    };

    struct Verdict {
        std::variant<Sat, Unsat, Unknown> kind;
        SolveStats stats;

        bool sat() const { return std::holds_alternative<Sat>(kind); }
        bool unsat() const { return std::holds_alternative<Unsat>(kind); }
        bool unknown() const { return std::holds_alternative<Unknown>(kind); }
        /// "sat", "unsat" or "unknown".
        std::string_view name() const;
    };

    std::string_view to_string(UnknownReason r);

    /// Cyclic -> Unknown(cyclic); an empty refined language -> Unsat; tree
    /// shape -> Sat with an extracted model; otherwise Unknown(not-tree).
    /// stats.millis is left at zero.
    Verdict classify(const Problem& p, const Propagation& prop);

    /// Top-down model construction for acyclic tree-shaped problems whose
    /// refined languages are all non-empty. The result is checked with
    /// sat_str; failure throws InternalError.
    Assignment extract_model(const Problem& p, const RefinedReg& reg);

    /// forward_prop followed by classify, timed.
    Verdict solve(const Problem& p, const SolverOptions& options = {});

    /// One dump() block per variable, headed "== name".
    std::string dump(const RefinedReg& reg);

} // namespace strprop

#endif
