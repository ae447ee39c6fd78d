#ifndef STRPROP_SMT_HH
#define STRPROP_SMT_HH

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "strprop/constraints.hh"
#include "strprop/solver.hh"

namespace strprop {

    /// A parsed SMT-LIB script in the supported string fragment
    /// (grammar: docs/smtlib.md).
    struct SmtScript {
        /// (name, sort) in declaration order. Only String is accepted.
        std::vector<std::pair<std::string, std::string>> declarations;
        /// Top-level conjunction; nested `and` is flattened.
        std::vector<SurfaceConstraint> assertions;
        bool has_check_sat = false;

        std::vector<VarId> declared_vars() const;

        bool operator==(const SmtScript&) const = default;
    };

    /// Throws ParseError (with byte offset) on malformed input, undeclared or
    /// redeclared variables; UnsupportedError on operators, sorts or
    /// commands outside the fragment.
    SmtScript parse_smt(std::string_view src);

    /// Prints a script that parse_smt() reads back to an equal value.
    std::string print_smt(const SmtScript& s);

    /// SMT-LIB string literal with 2.6 escapes, quotes included.
    std::string smt_string_literal(const Word& w);

    struct SolveOutcome {
        std::string verdict;  ///< "sat", "unsat" or "unknown"
        std::optional<Assignment> model;       ///< sat: declared variables only
        std::optional<VarId> witness;          ///< unsat: from the first disjunct
        std::optional<UnknownReason> reason;   ///< unknown
        std::size_t disjuncts = 0;
        std::size_t vars = 0;                  ///< summed over disjuncts
        std::size_t max_states = 0;
        std::size_t max_transitions = 0;
        std::size_t iterations = 0;            ///< summed over disjuncts
        double millis = 0;
        /// Refined (or, when cyclic, original) automata per solved disjunct;
        /// filled only when requested.
        std::vector<RefinedReg> automata;
    };

    /// Desugars and solves every disjunct. Any Sat disjunct makes the script
    /// sat; all Unsat makes it unsat; anything else is unknown. A
    /// ResourceError from a disjunct propagates unless another disjunct is Sat.
    SolveOutcome solve_script(const SmtScript& s, const SolverOptions& options = {},
                              bool keep_automata = false);

    /// One JSON object, no trailing newline. Fields in order: file, verdict,
    /// vars, max_states, max_transitions, iterations, millis.
    std::string stats_record(const std::string& file, const SolveOutcome& o);

    /// (define-fun x () String "...") per variable, one per line.
    std::string print_model(const Assignment& m);

} // namespace strprop

#endif
