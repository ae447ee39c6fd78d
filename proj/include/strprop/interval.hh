#ifndef STRPROP_INTERVAL_HH
#define STRPROP_INTERVAL_HH

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace strprop {

    /// A character. The alphabet is the integer range [0, kMaxCodePoint];
    /// surrogates are ordinary members.
    using CodePoint = char32_t;
    inline constexpr CodePoint kMaxCodePoint = 0x10FFFF;

    /// Closed range [lo, hi] of code points, the transition-label algebra.
    ///
    /// An interval with lo > hi is empty. Every empty interval is stored as
    /// [1, 0] so that equality is semantic.
    class Interval {
    public:
        constexpr Interval() : lo_(1), hi_(0) {}
        /// Throws std::out_of_range for bounds above kMaxCodePoint.
        Interval(CodePoint lo, CodePoint hi);

        static Interval single(CodePoint c) { return {c, c}; }
        static Interval all() { return {0, kMaxCodePoint}; }
        static constexpr Interval empty() { return {}; }

        CodePoint lo() const { return lo_; }
        CodePoint hi() const { return hi_; }

        /// Number of members; 0 when empty.
        std::uint64_t size() const;

        friend bool operator==(const Interval&, const Interval&) = default;
        friend auto operator<=>(const Interval&, const Interval&) = default;

    private:
        CodePoint lo_;
        CodePoint hi_;
    };

    Interval intersection(const Interval& a, const Interval& b);
    bool nonempty(const Interval& a);
    bool mem(CodePoint e, const Interval& a);

    inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 16;

    /// The members of `a` in ascending order. Throws std::length_error if
    /// there are more than `cap`; meant for tests on small alphabets.
    std::vector<CodePoint> sem(const Interval& a, std::size_t cap = kDefaultEnumerationCap);

    /// "[lo,hi]" with decimal bounds.
    std::string to_string(const Interval& a);
    std::ostream& operator<<(std::ostream& os, const Interval& a);

    /// Sorted, disjoint, non-adjacent, non-empty intervals. Used by the regex
    /// front-end for character classes; automata only ever carry single Intervals.
    class IntervalSet {
    public:
        IntervalSet() = default;
        IntervalSet(std::initializer_list<Interval> parts);

        /// Accepts arbitrary (unsorted, overlapping, empty) input.
        static IntervalSet normalize(std::vector<Interval> raw);
        static IntervalSet all() { return IntervalSet{Interval::all()}; }

        const std::vector<Interval>& parts() const { return parts_; }
        bool empty() const { return parts_.empty(); }
        bool contains(CodePoint e) const;
        std::uint64_t size() const;

        friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

    private:
        std::vector<Interval> parts_;
    };

    IntervalSet iset_union(const IntervalSet& x, const IntervalSet& y);
    /// Complement relative to [0, kMaxCodePoint].
    IntervalSet iset_complement(const IntervalSet& x);
    IntervalSet iset_intersection(const IntervalSet& x, const IntervalSet& y);

    std::string to_string(const IntervalSet& s);
    std::ostream& operator<<(std::ostream& os, const IntervalSet& s);

} // namespace strprop

#endif
