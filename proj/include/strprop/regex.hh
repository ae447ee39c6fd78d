#ifndef STRPROP_REGEX_HH
#define STRPROP_REGEX_HH

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "strprop/interval.hh"
#include "strprop/snfa.hh"

namespace strprop {

    /// Regular expression syntax tree. Membership is full-match: a word is in
    /// the language iff the whole word matches.
    struct RegexAst {
        enum class Kind {
            Literal,  ///< `ch`
            Class,    ///< `cls`, normalized and non-empty
            AnyChar,
            Epsilon,
            Nothing,  ///< the empty language (SMT-LIB re.none)
            Concat,   ///< `children`, non-empty
            Union,    ///< `children`, non-empty
            Star,     ///< `children[0]`
            Plus,     ///< `children[0]`
            Opt,      ///< `children[0]`
        };

        Kind kind = Kind::Epsilon;
        CodePoint ch = 0;
        IntervalSet cls;
        std::vector<RegexAst> children;

        static RegexAst literal(CodePoint c);
        /// A Class node, or Nothing when `s` is empty.
        static RegexAst char_class(IntervalSet s);
        static RegexAst any_char();
        static RegexAst epsilon();
        static RegexAst nothing();
        /// Single-element lists collapse to the element; an empty Concat is Epsilon
        /// and an empty Union is Nothing.
        static RegexAst concat(std::vector<RegexAst> parts);
        static RegexAst alternation(std::vector<RegexAst> parts);
        static RegexAst star(RegexAst r);
        static RegexAst plus(RegexAst r);
        static RegexAst opt(RegexAst r);
        /// Concat of the literals of `w` (Epsilon for the empty word).
        static RegexAst word(const Word& w);

        bool operator==(const RegexAst&) const = default;
    };

    /// Debug rendering in regex syntax.
    std::string to_string(const RegexAst& r);

    /// Parses a PCRE-style pattern (UTF-8). Grammar: docs/regex.md.
    /// Throws ParseError on malformed input and UnsupportedError on
    /// backreferences, lookaround, anchors, lazy/possessive and bounded quantifiers.
    RegexAst parse_regex(std::string_view src);

    /// Glushkov position automaton: one initial state plus one state per
    /// literal/class position, one transition per class part. Epsilon-free
    /// and trim.
    SNfa compile(const RegexAst& ast);

    /// Canonical universal automaton: one state, initial and accepting, one
    /// self-loop labeled [0, 0x10FFFF].
    SNfa sigma_star();

    /// |w| + 1 chained states accepting exactly w.
    SNfa word_automaton(const Word& w);

    enum class LengthOp { Less, LessEq, Eq, GreaterEq, Greater };
    inline constexpr std::uint64_t kDefaultLengthCap = 10000;

    /// Accepts { w : |w| op n }. Throws ResourceError when n exceeds `cap`.
    SNfa length_automaton(LengthOp op, std::uint64_t n, std::uint64_t cap = kDefaultLengthCap);

    std::string to_string(LengthOp op);

} // namespace strprop

#endif
