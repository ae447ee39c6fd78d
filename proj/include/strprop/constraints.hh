#ifndef STRPROP_CONSTRAINTS_HH
#define STRPROP_CONSTRAINTS_HH

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "strprop/regex.hh"
#include "strprop/snfa.hh"

namespace strprop {

    /// A string variable. Names starting with "_t" are reserved for
    /// variables introduced by desugar().
    struct VarId {
        std::string name;

        friend bool operator==(const VarId&, const VarId&) = default;
        friend auto operator<=>(const VarId&, const VarId&) = default;
    };

    inline constexpr std::string_view kFreshPrefix = "_t";

    using VarPair = std::pair<VarId, VarId>;

    /// Core constraint fragment: variables, binary equations v = v1 + v2, and
    /// one regular constraint per variable.
    struct Problem {
        std::set<VarId> vars;
        std::map<VarId, std::set<VarPair>> concat;
        std::map<VarId, SNfa> reg;

        /// All RHS variables of all equations of `v`.
        std::set<VarId> dependencies(const VarId& v) const;
        const std::set<VarPair>& equations(const VarId& v) const;
    };

    /// dom(concat) within vars, dom(reg) == vars, every equation operand in vars.
    bool well_formed(const Problem& p);

    using Assignment = std::map<VarId, Word>;

    // Surface constraints, before desugaring.

    using Term = std::variant<VarId, Word>;

    struct Membership {
        VarId var;
        RegexAst regex;
        bool operator==(const Membership&) const = default;
    };

    /// lhs = rhs[0] + rhs[1] + ... A literal lhs is allowed only when every
    /// rhs term is a literal too; such equations are decided by desugar().
    struct Equation {
        Term lhs;
        std::vector<Term> rhs;
        bool operator==(const Equation&) const = default;
    };

    struct LengthConstraint {
        VarId var;
        LengthOp op = LengthOp::Eq;
        std::uint64_t bound = 0;
        bool operator==(const LengthConstraint&) const = default;
    };

    struct SurfaceConstraint;

    /// Disjunction of conjunctions. No branches means false.
    struct Disjunction {
        std::vector<std::vector<SurfaceConstraint>> branches;
        bool operator==(const Disjunction&) const;
    };

    struct SurfaceConstraint {
        std::variant<Membership, Equation, LengthConstraint, Disjunction> node;
        bool operator==(const SurfaceConstraint&) const = default;
    };

    inline constexpr std::size_t kDefaultDisjunctCap = 64;

    struct DesugarOptions {
        std::size_t max_disjuncts = kDefaultDisjunctCap;
        std::uint64_t max_length_bound = kDefaultLengthCap;
    };

    /// Lowers surface constraints to one Problem per disjunct (cartesian
    /// product over nested disjunctions). `declared` variables are included
    /// even when unconstrained. Fresh variables are numbered _t1, _t2, ... in
    /// input order within each disjunct.
    ///
    /// Throws ResourceError when the disjunct or length caps are exceeded and
    /// UnsupportedError for a literal lhs equated with variables.
    std::vector<Problem> desugar(std::span<const SurfaceConstraint> cs,
                                 std::span<const VarId> declared = {},
                                 const DesugarOptions& options = {});

    /// Every variable's value is in its language and every equation holds.
    /// Throws std::invalid_argument when `m` does not cover p.vars.
    bool sat_str(const Problem& p, const Assignment& m);

    /// Dependency layering, outermost first: each variable's dependencies lie
    /// strictly in later layers. On a cycle, `layers` is empty and `stuck`
    /// holds the variables that could not be placed.
    struct Layering {
        std::vector<std::set<VarId>> layers;
        std::set<VarId> stuck;

        bool acyclic() const { return stuck.empty(); }
    };

    Layering layering(const Problem& p);

    /// The RHS operands of all equations are pairwise distinct. Implies the
    /// three-clause tree predicate on Concat.
    bool check_tree(const Problem& p);

    /// One line per variable: "v : states=.. transitions=.. initial=.. accepting=.. ; deps: (a,b),(c,d)".
    std::string dump(const Problem& p);

} // namespace strprop

#endif
