#ifndef STRPROP_SNFA_HH
#define STRPROP_SNFA_HH

#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "strprop/interval.hh"

namespace strprop {

    using Word = std::u32string;

    /// A state: an opaque number plus a provenance tag. Renaming an automaton
    /// retags all of its states, so two automata renamed with different tags
    /// have disjoint state sets.
    struct StateId {
        std::uint32_t id = 0;
        std::uint32_t tag = 0;

        friend bool operator==(const StateId&, const StateId&) = default;
        // tag-major, so the states of one renamed operand stay contiguous
        friend std::strong_ordering operator<=>(const StateId& a, const StateId& b) {
            if (auto c = a.tag <=> b.tag; c != 0) return c;
            return a.id <=> b.id;
        }
    };

    struct Transition {
        StateId src;
        Interval label;
        StateId dst;

        friend bool operator==(const Transition&, const Transition&) = default;
        friend auto operator<=>(const Transition&, const Transition&) = default;
    };

    /// Limits checked while automata are constructed. Exhaustion throws ResourceError.
    struct Budget {
        std::size_t max_transitions = std::numeric_limits<std::size_t>::max();
        std::optional<std::chrono::steady_clock::time_point> deadline;

        void check_transitions(std::size_t count) const;
        void check_deadline() const;

        static const Budget& unlimited();
    };

    namespace detail { struct SNfaBuilder; }

    /// Symbolic NFA (Q, Delta, I, F) with interval labels and no epsilon moves.
    ///
    /// All four collections are kept sorted and duplicate-free, which makes
    /// every construction below deterministic. Values are immutable.
    class SNfa {
    public:
        /// The automaton with no states.
        SNfa() : out_offsets_{0} {}

        /// Sorts and deduplicates its arguments. Throws std::invalid_argument
        /// when the result would not be well-formed (I or F not in Q, a
        /// transition endpoint not in Q, or an empty label).
        SNfa(std::vector<StateId> states, std::vector<Transition> transitions,
             std::vector<StateId> initial, std::vector<StateId> accepting);

        const std::vector<StateId>& states() const { return states_; }
        const std::vector<Transition>& transitions() const { return transitions_; }
        const std::vector<StateId>& initial() const { return initial_; }
        const std::vector<StateId>& accepting() const { return accepting_; }

        std::size_t num_states() const { return states_.size(); }
        std::size_t num_transitions() const { return transitions_.size(); }

        /// Every state is reachable from an initial state.
        bool is_trim() const { return trim_; }

        /// Position of `q` in states(), if present.
        std::optional<std::size_t> index_of(StateId q) const;
        /// Outgoing transitions of the state at `index`, sorted by (label, dst).
        std::span<const Transition> out(std::size_t index) const;
        bool is_initial(std::size_t index) const { return flags_[index] & kInitial; }
        bool is_accepting(std::size_t index) const { return flags_[index] & kAccepting; }

        friend bool operator==(const SNfa& a, const SNfa& b) {
            return a.states_ == b.states_ && a.transitions_ == b.transitions_ &&
                   a.initial_ == b.initial_ && a.accepting_ == b.accepting_;
        }

    private:
        friend struct detail::SNfaBuilder;
        static constexpr unsigned char kInitial = 1;
        static constexpr unsigned char kAccepting = 2;

        void index();
        bool compute_trim() const;

        std::vector<StateId> states_;
        std::vector<Transition> transitions_;
        std::vector<StateId> initial_;
        std::vector<StateId> accepting_;
        std::vector<std::size_t> out_offsets_;
        std::vector<unsigned char> flags_;
        bool trim_ = true;
    };

    /// Structural validity; every operation below preserves it.
    bool well_formed(const SNfa& a);

    bool accepts(const SNfa& a, const Word& w);

    /// Isomorphic copy whose states are (position in states(), tag).
    SNfa rename(const SNfa& a, std::uint32_t tag);

    /// L = L(a1) . L(a2). Worklist construction over the renamed operands
    /// (tags 1 and 2): bridging transitions go from every a1 transition
    /// entering an accepting state to every initial state of a2, and only
    /// states reachable from the initial set are generated.
    SNfa concat(const SNfa& a1, const SNfa& a2, const Budget& budget = Budget::unlimited());

    /// L = L(a1) & L(a2). Pair states are numbered 0.. in breadth-first
    /// discovery order with tag 0; transitions with an empty label
    /// intersection are dropped. The result is trim.
    SNfa product(const SNfa& a1, const SNfa& a2, const Budget& budget = Budget::unlimited());

    /// Drops states not reachable from I. Surviving states keep their ids.
    SNfa remove_unreachable(const SNfa& a);

    bool is_empty(const SNfa& a);

    /// A breadth-first shortest accepted word, reading the lower bound of each
    /// label; nullopt iff the language is empty.
    std::optional<Word> some_word(const SNfa& a);

    /// A split w = w1 . w2 with w1 in L(a1) and w2 in L(a2), shortest w1
    /// first. `c` must be concat(a1, a2); it is used to reject w early.
    std::optional<std::pair<Word, Word>> split_word(const SNfa& a1, const SNfa& a2,
                                                     const SNfa& c, const Word& w);

    inline constexpr std::size_t kDefaultIsomorphismCap = 12;

    /// Whether some bijection of states maps a1 exactly onto a2, labels
    /// included. Backtracking; throws std::length_error above `cap` states.
    bool isomorphic(const SNfa& a1, const SNfa& a2, std::size_t cap = kDefaultIsomorphismCap);

    /// One state, initial and accepting, with a single self-loop over the
    /// whole alphabet: the canonical universal automaton (see sigma_star()).
    bool is_sigma_star(const SNfa& a);

    std::string to_string(StateId q);
    /// Graphviz rendering, edge labels "lo-hi".
    std::string to_dot(const SNfa& a, const std::string& name = "snfa");
    /// Line-based dump; grammar in docs/formats.md.
    std::string dump(const SNfa& a);
    std::ostream& operator<<(std::ostream& os, const SNfa& a);

} // namespace strprop

#endif
