#ifndef STRPROP_ORACLE_HH
#define STRPROP_ORACLE_HH

#include <cstddef>
#include <set>
#include <variant>

#include "strprop/constraints.hh"
#include "strprop/interval.hh"
#include "strprop/snfa.hh"

namespace strprop {

    // Bounded brute-force checkers for differential testing. They share no
    // code with accepts() or the solver.

    inline constexpr std::size_t kMaxOracleLength = 8;
    inline constexpr std::size_t kMaxOracleAlphabet = 8;
    inline constexpr std::size_t kDefaultOracleCap = 10'000'000;

    struct Bound {
        std::size_t max_len = 4;
        IntervalSet alphabet;

        /// Throws std::invalid_argument when max_len > 8 or the alphabet has
        /// more than 8 characters.
        void validate() const;
    };

    /// All words over b.alphabet of length <= b.max_len, shortest first and
    /// lexicographic within a length.
    std::vector<Word> enumerate_words(const Bound& b);

    /// Membership by recursive search over paths. Independent of accepts().
    bool oracle_accepts(const SNfa& a, const Word& w);

    /// { w : |w| <= max_len, w over the alphabet, oracle_accepts(a, w) }.
    std::set<Word> oracle_lang(const SNfa& a, const Bound& b, std::size_t cap = kDefaultOracleCap);

    struct OracleSat {
        Assignment model;
    };
    struct UnsatWithin {
        Bound bound;
    };
    using OracleVerdict = std::variant<OracleSat, UnsatWithin>;

    /// Exhaustive search for an assignment satisfying p with every word in
    /// the bound. Variables are assigned one at a time; candidates are the
    /// variable's bounded language in shortlex order, narrowed to the values
    /// an equation allows once its other side is assigned. The first model
    /// found in this order is returned. Throws std::length_error after `cap`
    /// candidate assignments.
    OracleVerdict oracle_sat(const Problem& p, const Bound& b, std::size_t cap = kDefaultOracleCap);

} // namespace strprop

#endif
