#include "strprop/regex.hh"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

#include "strprop/errors.hh"
#include "strprop/text.hh"

namespace strprop {

RegexAst RegexAst::literal(CodePoint c) {
    RegexAst r;
    r.kind = Kind::Literal;
    r.ch = c;
    return r;
}

RegexAst RegexAst::char_class(IntervalSet s) {
    if (s.empty()) return nothing();
    RegexAst r;
    r.kind = Kind::Class;
    r.cls = std::move(s);
    return r;
}

RegexAst RegexAst::any_char() {
    RegexAst r;
    r.kind = Kind::AnyChar;
    return r;
}

RegexAst RegexAst::epsilon() { return RegexAst{}; }

RegexAst RegexAst::nothing() {
    RegexAst r;
    r.kind = Kind::Nothing;
    return r;
}

RegexAst RegexAst::concat(std::vector<RegexAst> parts) {
    if (parts.empty()) return epsilon();
    if (parts.size() == 1) return std::move(parts.front());
    RegexAst r;
    r.kind = Kind::Concat;
    r.children = std::move(parts);
    return r;
}

RegexAst RegexAst::alternation(std::vector<RegexAst> parts) {
    if (parts.empty()) return nothing();
    if (parts.size() == 1) return std::move(parts.front());
    RegexAst r;
    r.kind = Kind::Union;
    r.children = std::move(parts);
    return r;
}

namespace {

    RegexAst unary(RegexAst::Kind kind, RegexAst child) {
        RegexAst r;
        r.kind = kind;
        r.children.push_back(std::move(child));
        return r;
    }

} // namespace

RegexAst RegexAst::star(RegexAst r) { return unary(Kind::Star, std::move(r)); }
RegexAst RegexAst::plus(RegexAst r) { return unary(Kind::Plus, std::move(r)); }
RegexAst RegexAst::opt(RegexAst r) { return unary(Kind::Opt, std::move(r)); }

RegexAst RegexAst::word(const Word& w) {
    std::vector<RegexAst> parts;
    for (CodePoint c : w) parts.push_back(literal(c));
    return concat(std::move(parts));
}

namespace {

    bool is_meta(CodePoint c) {
        static const std::u32string meta = U"\\.|*+?()[]{}^$/-";
        return meta.find(c) != std::u32string::npos;
    }

    void append_char(std::string& out, CodePoint c, bool in_class) {
        if (c == '\n') {
            out += "\\n";
        } else if (c == '\t') {
            out += "\\t";
        } else if (c < 0x20 || c == 0x7F || c > 0x7E) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "\\u{%X}", static_cast<unsigned>(c));
            out += buf;
        } else if (is_meta(c) && (!in_class || c == ']' || c == '\\' || c == '-' || c == '^')) {
            out += '\\';
            out += static_cast<char>(c);
        } else {
            out += static_cast<char>(c);
        }
    }

    void render(const RegexAst& r, std::string& out) {
        using K = RegexAst::Kind;
        switch (r.kind) {
        case K::Literal: append_char(out, r.ch, false); break;
        case K::Class:
            out += '[';
            for (const Interval& i : r.cls.parts()) {
                append_char(out, i.lo(), true);
                if (i.hi() != i.lo()) {
                    out += '-';
                    append_char(out, i.hi(), true);
                }
            }
            out += ']';
            break;
        case K::AnyChar: out += '.'; break;
        case K::Epsilon: out += "()"; break;
        case K::Nothing: out += "[^\\u{0}-\\u{10FFFF}]"; break;
        case K::Concat:
            for (const RegexAst& c : r.children) {
                const bool group = c.kind == K::Union;
                if (group) out += '(';
                render(c, out);
                if (group) out += ')';
            }
            break;
        case K::Union:
            for (std::size_t i = 0; i < r.children.size(); ++i) {
                if (i) out += '|';
                render(r.children[i], out);
            }
            break;
        case K::Star:
        case K::Plus:
        case K::Opt: {
            const RegexAst& c = r.children.front();
            const bool group = c.kind == K::Concat || c.kind == K::Union || c.kind == K::Star ||
                               c.kind == K::Plus || c.kind == K::Opt;
            if (group) out += '(';
            render(c, out);
            if (group) out += ')';
            out += r.kind == K::Star ? '*' : r.kind == K::Plus ? '+' : '?';
            break;
        }
        }
    }

    class RegexParser {
    public:
        explicit RegexParser(std::string_view src) : src_(src) {}

        RegexAst parse() {
            RegexAst r = alternation();
            if (pos_ < src_.size()) fail("unbalanced ')'");
            return r;
        }

    private:
        [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
        [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
            throw ParseError("regex: " + msg, at);
        }
        [[noreturn]] void unsupported(const std::string& what) const {
            throw UnsupportedError("regex: " + what + " is not supported (at byte " + std::to_string(pos_) + ")");
        }

        bool at_end() const { return pos_ >= src_.size(); }
        char peek() const { return src_[pos_]; }

        CodePoint next_char() {
            if (at_end()) fail("unexpected end of pattern");
            return utf8_next(src_, pos_);
        }

        RegexAst alternation() {
            std::vector<RegexAst> alts;
            alts.push_back(sequence());
            while (!at_end() && peek() == '|') {
                ++pos_;
                alts.push_back(sequence());
            }
            return RegexAst::alternation(std::move(alts));
        }

        RegexAst sequence() {
            std::vector<RegexAst> parts;
            while (!at_end() && peek() != '|' && peek() != ')') parts.push_back(repetition());
            return RegexAst::concat(std::move(parts));
        }

        bool bounded_quantifier_ahead() const {
            // {n}, {n,}, {n,m}; anything else after '{' is a literal brace
            std::size_t p = pos_ + 1;
            auto digits = [&] {
                std::size_t start = p;
                while (p < src_.size() && src_[p] >= '0' && src_[p] <= '9') ++p;
                return p > start;
            };
            if (!digits()) return false;
            if (p < src_.size() && src_[p] == ',') {
                ++p;
                digits();
            }
            return p < src_.size() && src_[p] == '}';
        }

        RegexAst repetition() {
            RegexAst r = atom();
            bool quantified = false;
            while (!at_end()) {
                const char c = peek();
                if (c == '{' && bounded_quantifier_ahead()) unsupported("bounded repetition {m,n}");
                if (c != '*' && c != '+' && c != '?') break;
                if (quantified) {
                    if (c == '?') unsupported("lazy quantifier");
                    if (c == '+') unsupported("possessive quantifier");
                    fail("nothing to repeat");
                }
                ++pos_;
                r = c == '*' ? RegexAst::star(std::move(r))
                  : c == '+' ? RegexAst::plus(std::move(r))
                             : RegexAst::opt(std::move(r));
                quantified = true;
            }
            return r;
        }

        RegexAst atom() {
            const char c = peek();
            switch (c) {
            case '(': {
                const std::size_t open = pos_++;
                if (!at_end() && peek() == '?') {
                    if (pos_ + 1 < src_.size() && src_[pos_ + 1] == ':') {
                        pos_ += 2;
                    } else {
                        unsupported("lookaround or group modifier");
                    }
                }
                RegexAst r = alternation();
                if (at_end() || peek() != ')') fail_at("missing ')'", open);
                ++pos_;
                return r;
            }
            case '[': return char_class();
            case '.': ++pos_; return RegexAst::any_char();
            case '*':
            case '+':
            case '?': fail("nothing to repeat");
            case '^':
            case '$': unsupported("anchor");
            case '\\': return escape_atom();
            default: return RegexAst::literal(next_char());
            }
        }

        std::uint32_t hex_digits(std::size_t min, std::size_t max) {
            std::uint32_t v = 0;
            std::size_t n = 0;
            while (n < max && !at_end() && std::isxdigit(static_cast<unsigned char>(peek()))) {
                const char d = peek();
                v = v * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(d))
                                                            ? d - '0'
                                                            : std::tolower(static_cast<unsigned char>(d)) - 'a' + 10);
                ++pos_;
                ++n;
                if (v > kMaxCodePoint) fail("code point out of range");
            }
            if (n < min) fail("expected hex digits");
            return v;
        }

        CodePoint braced_or_fixed_hex(std::size_t fixed) {
            if (!at_end() && peek() == '{') {
                ++pos_;
                const CodePoint v = hex_digits(1, 6);
                if (at_end() || peek() != '}') fail("expected '}'");
                ++pos_;
                return v;
            }
            return hex_digits(fixed, fixed);
        }

        static IntervalSet shorthand_class(char c) {
            IntervalSet s;
            switch (std::tolower(static_cast<unsigned char>(c))) {
            case 'd': s = IntervalSet{Interval('0', '9')}; break;
            case 'w': s = IntervalSet{Interval('0', '9'), Interval('A', 'Z'), Interval('_', '_'), Interval('a', 'z')}; break;
            default: s = IntervalSet{Interval('\t', '\r'), Interval(' ', ' ')}; break;
            }
            return std::isupper(static_cast<unsigned char>(c)) ? iset_complement(s) : s;
        }

        // After a backslash. Returns either a single code point or a class.
        struct Escaped {
            bool is_class = false;
            CodePoint ch = 0;
            IntervalSet cls;
        };

        Escaped escape(bool in_class) {
            const std::size_t start = pos_++;
            if (at_end()) fail_at("trailing backslash", start);
            const char c = peek();
            switch (c) {
            case 'n': ++pos_; return {false, '\n', {}};
            case 't': ++pos_; return {false, '\t', {}};
            case 'r': ++pos_; return {false, '\r', {}};
            case 'f': ++pos_; return {false, '\f', {}};
            case 'v': ++pos_; return {false, '\v', {}};
            case 'x': ++pos_; return {false, braced_or_fixed_hex(2), {}};
            case 'u': ++pos_; return {false, braced_or_fixed_hex(4), {}};
            case 'd': case 'D': case 'w': case 'W': case 's': case 'S':
                ++pos_;
                return {true, 0, shorthand_class(c)};
            case 'b':
                if (in_class) {
                    ++pos_;
                    return {false, '\b', {}};
                }
                unsupported("anchor");
            case 'B': case 'A': case 'z': case 'Z': case 'G': unsupported("anchor");
            case 'k': unsupported("backreference");
            default: break;
            }
            if (c >= '1' && c <= '9') unsupported("backreference");
            if (c == '0') {
                ++pos_;
                return {false, 0, {}};
            }
            if (std::isalnum(static_cast<unsigned char>(c))) fail_at(std::string("unknown escape \\") + c, start);
            return {false, next_char(), {}};
        }

        RegexAst escape_atom() {
            Escaped e = escape(false);
            return e.is_class ? RegexAst::char_class(std::move(e.cls)) : RegexAst::literal(e.ch);
        }

        RegexAst char_class() {
            const std::size_t open = pos_;
            ++pos_;
            bool negated = false;
            if (!at_end() && peek() == '^') {
                negated = true;
                ++pos_;
            }
            std::vector<Interval> raw;
            bool first = true;
            while (true) {
                if (at_end()) {
                    pos_ = open;
                    fail("unterminated character class");
                }
                if (peek() == ']' && !first) {
                    ++pos_;
                    break;
                }
                first = false;
                const std::size_t member = pos_;
                Escaped lo = class_member();
                if (lo.is_class) {
                    raw.insert(raw.end(), lo.cls.parts().begin(), lo.cls.parts().end());
                    continue;
                }
                if (pos_ + 1 < src_.size() && peek() == '-' && src_[pos_ + 1] != ']') {
                    ++pos_;
                    Escaped hi = class_member();
                    if (hi.is_class) fail_at("class shorthand as range bound", member);
                    if (hi.ch < lo.ch) fail_at("range out of order in character class", member);
                    raw.emplace_back(lo.ch, hi.ch);
                } else {
                    raw.push_back(Interval::single(lo.ch));
                }
            }
            IntervalSet s = IntervalSet::normalize(std::move(raw));
            return RegexAst::char_class(negated ? iset_complement(s) : s);
        }

        Escaped class_member() {
            if (peek() == '\\') return escape(true);
            return {false, next_char(), {}};
        }

        std::string_view src_;
        std::size_t pos_ = 0;
    };

    // Glushkov construction.
    struct Linearized {
        bool nullable = false;
        std::vector<std::uint32_t> first, last;
    };

    class Glushkov {
    public:
        SNfa build(const RegexAst& ast) {
            labels_.push_back({});  // position 0 is the initial state
            follow_.emplace_back();
            const Linearized top = visit(ast);

            std::vector<StateId> states;
            for (std::uint32_t p = 0; p < labels_.size(); ++p) states.push_back({p, 0});
            std::vector<Transition> transitions;
            auto connect = [&](std::uint32_t from, std::uint32_t to) {
                for (const Interval& i : labels_[to].parts()) transitions.push_back({{from, 0}, i, {to, 0}});
            };
            for (std::uint32_t p : top.first) connect(0, p);
            for (std::uint32_t q = 1; q < follow_.size(); ++q) {
                for (std::uint32_t p : follow_[q]) connect(q, p);
            }
            std::vector<StateId> accepting;
            for (std::uint32_t p : top.last) accepting.push_back({p, 0});
            if (top.nullable) accepting.push_back({0, 0});
            return remove_unreachable(SNfa(std::move(states), std::move(transitions), {{0, 0}}, std::move(accepting)));
        }

    private:
        std::uint32_t position(IntervalSet label) {
            labels_.push_back(std::move(label));
            follow_.emplace_back();
            return static_cast<std::uint32_t>(labels_.size() - 1);
        }

        static std::vector<std::uint32_t> merged(std::vector<std::uint32_t> a, const std::vector<std::uint32_t>& b) {
            a.insert(a.end(), b.begin(), b.end());
            std::sort(a.begin(), a.end());
            a.erase(std::unique(a.begin(), a.end()), a.end());
            return a;
        }

        void link(const std::vector<std::uint32_t>& from, const std::vector<std::uint32_t>& to) {
            for (std::uint32_t q : from) follow_[q].insert(to.begin(), to.end());
        }

        Linearized visit(const RegexAst& r) {
            using K = RegexAst::Kind;
            switch (r.kind) {
            case K::Literal: {
                const std::uint32_t p = position(IntervalSet{Interval::single(r.ch)});
                return {false, {p}, {p}};
            }
            case K::Class: {
                const std::uint32_t p = position(r.cls);
                return {false, {p}, {p}};
            }
            case K::AnyChar: {
                const std::uint32_t p = position(IntervalSet::all());
                return {false, {p}, {p}};
            }
            case K::Epsilon: return {true, {}, {}};
            case K::Nothing: return {false, {}, {}};
            case K::Concat: {
                Linearized acc = visit(r.children.front());
                for (std::size_t i = 1; i < r.children.size(); ++i) {
                    Linearized next = visit(r.children[i]);
                    link(acc.last, next.first);
                    Linearized joined;
                    joined.nullable = acc.nullable && next.nullable;
                    joined.first = acc.nullable ? merged(acc.first, next.first) : acc.first;
                    joined.last = next.nullable ? merged(next.last, acc.last) : next.last;
                    acc = std::move(joined);
                }
                return acc;
            }
            case K::Union: {
                Linearized acc{false, {}, {}};
                for (const RegexAst& c : r.children) {
                    Linearized l = visit(c);
                    acc.nullable = acc.nullable || l.nullable;
                    acc.first = merged(std::move(acc.first), l.first);
                    acc.last = merged(std::move(acc.last), l.last);
                }
                return acc;
            }
            case K::Star:
            case K::Plus:
            case K::Opt: {
                Linearized l = visit(r.children.front());
                if (r.kind != K::Opt) link(l.last, l.first);
                if (r.kind != K::Plus) l.nullable = true;
                return l;
            }
            }
            return {};
        }

        std::vector<IntervalSet> labels_;
        std::vector<std::set<std::uint32_t>> follow_;
    };

    SNfa chain(std::uint64_t n, bool loop_at_end, bool all_accepting) {
        std::vector<StateId> states, accepting;
        std::vector<Transition> transitions;
        for (std::uint32_t i = 0; i <= n; ++i) {
            states.push_back({i, 0});
            if (all_accepting || i == n) accepting.push_back({i, 0});
            if (i < n) transitions.push_back({{i, 0}, Interval::all(), {i + 1, 0}});
        }
        if (loop_at_end) {
            const auto last = static_cast<std::uint32_t>(n);
            transitions.push_back({{last, 0}, Interval::all(), {last, 0}});
        }
        return SNfa(std::move(states), std::move(transitions), {{0, 0}}, std::move(accepting));
    }

} // namespace

std::string to_string(const RegexAst& r) {
    std::string out;
    render(r, out);
    return out;
}

RegexAst parse_regex(std::string_view src) { return RegexParser(src).parse(); }

SNfa compile(const RegexAst& ast) { return Glushkov().build(ast); }

SNfa sigma_star() { return SNfa({{0, 0}}, {{{0, 0}, Interval::all(), {0, 0}}}, {{0, 0}}, {{0, 0}}); }

SNfa word_automaton(const Word& w) {
    std::vector<StateId> states;
    std::vector<Transition> transitions;
    for (std::uint32_t i = 0; i <= w.size(); ++i) {
        states.push_back({i, 0});
        if (i < w.size()) transitions.push_back({{i, 0}, Interval::single(w[i]), {i + 1, 0}});
    }
    const auto last = static_cast<std::uint32_t>(w.size());
    return SNfa(std::move(states), std::move(transitions), {{0, 0}}, {{last, 0}});
}

SNfa length_automaton(LengthOp op, std::uint64_t n, std::uint64_t cap) {
    if (n > cap) {
        throw ResourceError("length bound too large: " + std::to_string(n) + " exceeds " + std::to_string(cap));
    }
    switch (op) {
    case LengthOp::LessEq: return chain(n, false, true);
    case LengthOp::Less:
        if (n == 0) return SNfa({{0, 0}}, {}, {{0, 0}}, {});
        return chain(n - 1, false, true);
    case LengthOp::Eq: return chain(n, false, false);
    case LengthOp::GreaterEq: return chain(n, true, false);
    case LengthOp::Greater: return chain(n + 1, true, false);
    }
    return {};
}

std::string to_string(LengthOp op) {
    switch (op) {
    case LengthOp::Less: return "<";
    case LengthOp::LessEq: return "<=";
    case LengthOp::Eq: return "=";
    case LengthOp::GreaterEq: return ">=";
    case LengthOp::Greater: return ">";
    }
    return "?";
}

} // namespace strprop
