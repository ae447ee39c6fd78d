#include "strprop/smt.hh"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "strprop/errors.hh"
#include "strprop/text.hh"

namespace strprop {

namespace {

    struct Sexp {
        enum class Kind { Symbol, String, Numeral, List };
        Kind kind = Kind::List;
        std::string text;  // symbol name or numeral digits
        Word str;          // decoded string literal
        std::vector<Sexp> items;
        std::size_t offset = 0;

        bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
        bool is_list() const { return kind == Kind::List; }
        std::string_view head() const {
            if (kind != Kind::List || items.empty() || items[0].kind != Kind::Symbol) return {};
            return items[0].text;
        }
    };

    int hex_value(char c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    }

    // SMT-LIB 2.6 string literal escapes: \u{d..d} (1-5 hex digits) and \udddd.
    // Any other backslash stands for itself.
    Word unescape(std::string_view raw) {
        Word decoded = utf8_decode(raw);
        Word out;
        for (std::size_t i = 0; i < decoded.size(); ++i) {
            if (decoded[i] == U'\\' && i + 1 < decoded.size() && decoded[i + 1] == U'u') {
                auto hex = [&](std::size_t k) { return decoded[k] < 128 ? hex_value(static_cast<char>(decoded[k])) : -1; };
                if (i + 2 < decoded.size() && decoded[i + 2] == U'{') {
                    std::size_t j = i + 3;
                    std::uint32_t v = 0;
                    while (j < decoded.size() && j - (i + 3) < 5 && hex(j) >= 0) v = v * 16 + hex(j++);
                    if (j > i + 3 && j < decoded.size() && decoded[j] == U'}' && v <= kMaxCodePoint) {
                        out.push_back(v);
                        i = j;
                        continue;
                    }
                } else if (i + 5 < decoded.size() && hex(i + 2) >= 0 && hex(i + 3) >= 0 && hex(i + 4) >= 0 &&
                           hex(i + 5) >= 0) {
                    out.push_back((hex(i + 2) << 12) | (hex(i + 3) << 8) | (hex(i + 4) << 4) | hex(i + 5));
                    i += 5;
                    continue;
                }
            }
            out.push_back(decoded[i]);
        }
        return out;
    }

    class Reader {
    public:
        explicit Reader(std::string_view src) : src_(src) {}

        std::vector<Sexp> read_all() {
            std::vector<Sexp> out;
            for (skip(); pos_ < src_.size(); skip()) out.push_back(read());
            return out;
        }

    private:
        void skip() {
            while (pos_ < src_.size()) {
                const char c = src_[pos_];
                if (std::isspace(static_cast<unsigned char>(c))) {
                    ++pos_;
                } else if (c == ';') {
                    while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
                } else {
                    break;
                }
            }
        }

        Sexp read() {
            Sexp s;
            s.offset = pos_;
            const char c = src_[pos_];
            if (c == '(') {
                ++pos_;
                for (skip(); pos_ < src_.size() && src_[pos_] != ')'; skip()) s.items.push_back(read());
                if (pos_ >= src_.size()) throw ParseError("unbalanced '('", s.offset);
                ++pos_;
                return s;
            }
            if (c == ')') throw ParseError("unexpected ')'", pos_);
            if (c == '"') {
                std::string raw;
                ++pos_;
                while (true) {
                    if (pos_ >= src_.size()) throw ParseError("unterminated string literal", s.offset);
                    if (src_[pos_] == '"') {
                        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '"') {
                            raw.push_back('"');
                            pos_ += 2;
                            continue;
                        }
                        ++pos_;
                        break;
                    }
                    raw.push_back(src_[pos_++]);
                }
                s.kind = Sexp::Kind::String;
                s.str = unescape(raw);
                return s;
            }
            if (c == '|') {
                const std::size_t end = src_.find('|', pos_ + 1);
                if (end == std::string_view::npos) throw ParseError("unterminated quoted symbol", s.offset);
                s.kind = Sexp::Kind::Symbol;
                s.text = std::string(src_.substr(pos_ + 1, end - pos_ - 1));
                pos_ = end + 1;
                return s;
            }
            const std::size_t start = pos_;
            while (pos_ < src_.size()) {
                const char d = src_[pos_];
                if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == '"' || d == ';') break;
                ++pos_;
            }
            s.text = std::string(src_.substr(start, pos_ - start));
            const bool numeral = std::all_of(s.text.begin(), s.text.end(), [](char d) { return d >= '0' && d <= '9'; });
            s.kind = numeral ? Sexp::Kind::Numeral : Sexp::Kind::Symbol;
            return s;
        }

        std::string_view src_;
        std::size_t pos_ = 0;
    };

    class ScriptBuilder {
    public:
        SmtScript build(const std::vector<Sexp>& commands) {
            for (const Sexp& cmd : commands) command(cmd);
            return std::move(script_);
        }

    private:
        [[noreturn]] static void fail(const Sexp& s, const std::string& msg) { throw ParseError(msg, s.offset); }

        void command(const Sexp& cmd) {
            const std::string_view h = cmd.head();
            if (h.empty()) fail(cmd, "expected a command");
            if (h == "declare-fun") {
                if (cmd.items.size() != 4 || !cmd.items[2].is_list() || !cmd.items[2].items.empty()) {
                    if (cmd.items.size() == 4 && cmd.items[2].is_list()) {
                        throw UnsupportedError("declare-fun with arguments");
                    }
                    fail(cmd, "malformed declare-fun");
                }
                declare(cmd.items[1], cmd.items[3]);
            } else if (h == "declare-const") {
                if (cmd.items.size() != 3) fail(cmd, "malformed declare-const");
                declare(cmd.items[1], cmd.items[2]);
            } else if (h == "assert") {
                if (cmd.items.size() != 2) fail(cmd, "malformed assert");
                auto cs = boolean(cmd.items[1]);
                script_.assertions.insert(script_.assertions.end(), cs.begin(), cs.end());
            } else if (h == "check-sat") {
                script_.has_check_sat = true;
            } else if (h == "set-logic" || h == "set-option" || h == "set-info" || h == "exit" || h == "get-model") {
                // accepted and ignored
            } else {
                throw UnsupportedError("command " + std::string(h));
            }
        }

        void declare(const Sexp& name, const Sexp& sort) {
            if (name.kind != Sexp::Kind::Symbol) fail(name, "expected a symbol");
            if (sort.kind != Sexp::Kind::Symbol) throw UnsupportedError("non-String sort");
            if (sort.text != "String") throw UnsupportedError("sort " + sort.text);
            if (declared_.contains(name.text)) fail(name, "duplicate declaration of " + name.text);
            declared_.insert(name.text);
            script_.declarations.emplace_back(name.text, sort.text);
        }

        VarId variable(const Sexp& s) {
            if (!declared_.contains(s.text)) fail(s, "undeclared variable " + s.text);
            return VarId{s.text};
        }

        std::vector<SurfaceConstraint> boolean(const Sexp& t) {
            if (t.is_symbol("true")) return {};
            if (t.is_symbol("false")) return {SurfaceConstraint{Disjunction{}}};
            const std::string_view h = t.head();
            if (h.empty()) {
                if (t.kind == Sexp::Kind::Symbol) throw UnsupportedError("boolean variable " + t.text);
                fail(t, "expected a boolean term");
            }
            const auto& args = t.items;
            if (h == "and") {
                std::vector<SurfaceConstraint> out;
                for (std::size_t i = 1; i < args.size(); ++i) {
                    auto sub = boolean(args[i]);
                    out.insert(out.end(), sub.begin(), sub.end());
                }
                return out;
            }
            if (h == "or") {
                Disjunction d;
                for (std::size_t i = 1; i < args.size(); ++i) d.branches.push_back(boolean(args[i]));
                return {SurfaceConstraint{std::move(d)}};
            }
            if (h == "str.in_re" || h == "str.in.re") {
                if (args.size() != 3) fail(t, std::string(h) + " takes two arguments");
                if (args[1].kind != Sexp::Kind::Symbol) throw UnsupportedError("membership of a non-variable term");
                VarId v = variable(args[1]);
                return {SurfaceConstraint{Membership{std::move(v), regex(args[2])}}};
            }
            if (auto op = comparison(h)) {
                if (args.size() != 3) fail(t, std::string(h) + " takes two arguments");
                if (is_length(args[1]) && args[2].kind == Sexp::Kind::Numeral) {
                    return {SurfaceConstraint{length(args[1], *op, args[2])}};
                }
                if (args[1].kind == Sexp::Kind::Numeral && is_length(args[2])) {
                    return {SurfaceConstraint{length(args[2], flip(*op), args[1])}};
                }
                if (h != "=") throw UnsupportedError(std::string(h) + " outside monadic length constraints");
                return {SurfaceConstraint{equation(args[1], args[2])}};
            }
            throw UnsupportedError("operator " + std::string(h));
        }

        static std::optional<LengthOp> comparison(std::string_view h) {
            if (h == "<") return LengthOp::Less;
            if (h == "<=") return LengthOp::LessEq;
            if (h == "=") return LengthOp::Eq;
            if (h == ">=") return LengthOp::GreaterEq;
            if (h == ">") return LengthOp::Greater;
            return std::nullopt;
        }

        static LengthOp flip(LengthOp op) {
            switch (op) {
                case LengthOp::Less: return LengthOp::Greater;
                case LengthOp::LessEq: return LengthOp::GreaterEq;
                case LengthOp::GreaterEq: return LengthOp::LessEq;
                case LengthOp::Greater: return LengthOp::Less;
                case LengthOp::Eq: break;
            }
            return LengthOp::Eq;
        }

        static bool is_length(const Sexp& s) { return s.head() == "str.len"; }

        LengthConstraint length(const Sexp& len, LengthOp op, const Sexp& n) {
            if (len.items.size() != 2 || len.items[1].kind != Sexp::Kind::Symbol) {
                throw UnsupportedError("str.len of a non-variable term");
            }
            std::uint64_t bound = 0;
            auto [p, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), bound);
            if (ec != std::errc()) throw ResourceError("length bound too large");
            return LengthConstraint{variable(len.items[1]), op, bound};
        }

        Equation equation(const Sexp& lhs, const Sexp& rhs) {
            Equation e;
            if (lhs.kind == Sexp::Kind::Symbol) {
                e.lhs = variable(lhs);
            } else if (lhs.kind == Sexp::Kind::String) {
                e.lhs = lhs.str;
            } else {
                throw UnsupportedError("equation whose left-hand side is not a variable");
            }
            string_terms(rhs, e.rhs);
            if (std::holds_alternative<Word>(e.lhs)) {
                bool literal = std::all_of(e.rhs.begin(), e.rhs.end(),
                                           [](const Term& x) { return std::holds_alternative<Word>(x); });
                if (!literal) throw UnsupportedError("equation whose left-hand side is not a variable");
            }
            return e;
        }

        void string_terms(const Sexp& t, std::vector<Term>& out) {
            if (t.kind == Sexp::Kind::Symbol) {
                out.emplace_back(variable(t));
            } else if (t.kind == Sexp::Kind::String) {
                out.emplace_back(t.str);
            } else if (t.head() == "str.++") {
                for (std::size_t i = 1; i < t.items.size(); ++i) string_terms(t.items[i], out);
            } else if (t.kind == Sexp::Kind::Numeral) {
                fail(t, "expected a string term");
            } else {
                if (t.head().empty()) fail(t, "expected a string term");
                throw UnsupportedError("operator " + std::string(t.head()));
            }
        }

        static const Word& literal_arg(const Sexp& s, std::string_view op) {
            if (s.kind != Sexp::Kind::String) throw UnsupportedError(std::string(op) + " of a non-literal term");
            return s.str;
        }

        RegexAst regex(const Sexp& t) {
            if (t.kind != Sexp::Kind::List) {
                if (t.is_symbol("re.allchar")) return RegexAst::any_char();
                if (t.is_symbol("re.all")) return RegexAst::star(RegexAst::any_char());
                if (t.is_symbol("re.none") || t.is_symbol("re.nostr")) return RegexAst::nothing();
                if (t.kind == Sexp::Kind::Symbol) throw UnsupportedError("regex " + t.text);
                fail(t, "expected a regular expression");
            }
            const std::string_view h = t.head();
            if (h.empty()) throw UnsupportedError("indexed regex operator");
            const auto& args = t.items;
            auto arity = [&](std::size_t n) {
                if (args.size() != n + 1) fail(t, std::string(h) + " takes " + std::to_string(n) + " argument(s)");
            };
            if (h == "str.to_re" || h == "str.to.re") {
                arity(1);
                return RegexAst::word(literal_arg(args[1], h));
            }
            if (h == "re.range") {
                arity(2);
                const Word& lo = literal_arg(args[1], h);
                const Word& hi = literal_arg(args[2], h);
                if (lo.size() != 1 || hi.size() != 1 || lo[0] > hi[0]) return RegexAst::nothing();
                return RegexAst::char_class(IntervalSet{Interval(lo[0], hi[0])});
            }
            if (h == "re.++" || h == "re.union") {
                if (args.size() < 2) fail(t, std::string(h) + " needs arguments");
                std::vector<RegexAst> parts;
                for (std::size_t i = 1; i < args.size(); ++i) parts.push_back(regex(args[i]));
                if (h == "re.++") return RegexAst::concat(std::move(parts));
                const bool classes = std::all_of(parts.begin(), parts.end(),
                                                 [](const RegexAst& r) { return r.kind == RegexAst::Kind::Class; });
                if (classes && parts.size() > 1) {
                    std::vector<Interval> all;
                    for (const RegexAst& r : parts) all.insert(all.end(), r.cls.parts().begin(), r.cls.parts().end());
                    return RegexAst::char_class(IntervalSet::normalize(std::move(all)));
                }
                return RegexAst::alternation(std::move(parts));
            }
            if (h == "re.*") {
                arity(1);
                return RegexAst::star(regex(args[1]));
            }
            if (h == "re.+") {
                arity(1);
                return RegexAst::plus(regex(args[1]));
            }
            if (h == "re.opt") {
                arity(1);
                return RegexAst::opt(regex(args[1]));
            }
            throw UnsupportedError("regex operator " + std::string(h));
        }

        SmtScript script_;
        std::set<std::string> declared_;
    };

    bool simple_symbol(const std::string& s) {
        if (s.empty() || (s[0] >= '0' && s[0] <= '9')) return false;
        static const std::string_view extra = "~!@$%^&*_-+=<>.?/";
        return std::all_of(s.begin(), s.end(), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || extra.find(c) != std::string_view::npos;
        });
    }

    std::string symbol(const std::string& s) { return simple_symbol(s) ? s : "|" + s + "|"; }

    std::string print_term(const Term& t) {
        if (const auto* v = std::get_if<VarId>(&t)) return symbol(v->name);
        return smt_string_literal(std::get<Word>(t));
    }

    bool all_literals(const RegexAst& r) {
        return r.kind == RegexAst::Kind::Concat &&
               std::all_of(r.children.begin(), r.children.end(),
                           [](const RegexAst& c) { return c.kind == RegexAst::Kind::Literal; });
    }

    std::string print_regex(const RegexAst& r) {
        using K = RegexAst::Kind;
        switch (r.kind) {
            case K::Literal: return "(str.to_re " + smt_string_literal(Word(1, r.ch)) + ")";
            case K::Epsilon: return "(str.to_re \"\")";
            case K::Nothing: return "re.none";
            case K::AnyChar: return "re.allchar";
            case K::Class: {
                auto range = [](const Interval& i) {
                    return "(re.range " + smt_string_literal(Word(1, i.lo())) + " " + smt_string_literal(Word(1, i.hi())) + ")";
                };
                if (r.cls.parts().size() == 1) return range(r.cls.parts()[0]);
                std::string out = "(re.union";
                for (const Interval& i : r.cls.parts()) out += " " + range(i);
                return out + ")";
            }
            case K::Concat: {
                if (all_literals(r)) {
                    Word w;
                    for (const RegexAst& c : r.children) w.push_back(c.ch);
                    return "(str.to_re " + smt_string_literal(w) + ")";
                }
                std::string out = "(re.++";
                for (const RegexAst& c : r.children) out += " " + print_regex(c);
                return out + ")";
            }
            case K::Union: {
                std::string out = "(re.union";
                for (const RegexAst& c : r.children) out += " " + print_regex(c);
                return out + ")";
            }
            case K::Star: return "(re.* " + print_regex(r.children[0]) + ")";
            case K::Plus: return "(re.+ " + print_regex(r.children[0]) + ")";
            case K::Opt: return "(re.opt " + print_regex(r.children[0]) + ")";
        }
        return "re.none";
    }

    std::string print_constraint(const SurfaceConstraint& c);

    std::string print_conjunction(const std::vector<SurfaceConstraint>& cs) {
        if (cs.empty()) return "true";
        if (cs.size() == 1) return print_constraint(cs[0]);
        std::string out = "(and";
        for (const auto& c : cs) out += " " + print_constraint(c);
        return out + ")";
    }

    std::string print_constraint(const SurfaceConstraint& c) {
        return std::visit([](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Membership>) {
                return "(str.in_re " + symbol(n.var.name) + " " + print_regex(n.regex) + ")";
            } else if constexpr (std::is_same_v<T, Equation>) {
                std::string rhs;
                if (n.rhs.size() == 1) {
                    rhs = print_term(n.rhs[0]);
                } else {
                    rhs = "(str.++";
                    for (const Term& t : n.rhs) rhs += " " + print_term(t);
                    rhs += ")";
                }
                return "(= " + print_term(n.lhs) + " " + rhs + ")";
            } else if constexpr (std::is_same_v<T, LengthConstraint>) {
                return "(" + to_string(n.op) + " (str.len " + symbol(n.var.name) + ") " + std::to_string(n.bound) + ")";
            } else {
                if (n.branches.empty()) return "false";
                std::string out = "(or";
                for (const auto& b : n.branches) out += " " + print_conjunction(b);
                return out + ")";
            }
        }, c.node);
    }

} // namespace

std::vector<VarId> SmtScript::declared_vars() const {
    std::vector<VarId> out;
    for (const auto& [name, sort] : declarations) out.push_back(VarId{name});
    return out;
}

SmtScript parse_smt(std::string_view src) {
    Reader reader(src);
    return ScriptBuilder().build(reader.read_all());
}

std::string smt_string_literal(const Word& w) {
    std::string out = "\"";
    for (CodePoint c : w) {
        if (c == U'"') {
            out += "\"\"";
        } else if (c == U'\\' || c < 0x20 || c > 0x7E) {
            char buf[16];
            std::snprintf(buf, sizeof buf, "\\u{%x}", static_cast<unsigned>(c));
            out += buf;
        } else {
            out.push_back(static_cast<char>(c));
        }
    }
    return out + "\"";
}

std::string print_smt(const SmtScript& s) {
    std::string out;
    for (const auto& [name, sort] : s.declarations) out += "(declare-fun " + symbol(name) + " () " + sort + ")\n";
    for (const auto& c : s.assertions) out += "(assert " + print_constraint(c) + ")\n";
    if (s.has_check_sat) out += "(check-sat)\n";
    return out;
}

SolveOutcome solve_script(const SmtScript& s, const SolverOptions& options, bool keep_automata) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<VarId> declared = s.declared_vars();
    const std::vector<Problem> problems = desugar(s.assertions, declared);

    SolveOutcome out;
    out.disjuncts = problems.size();
    std::optional<ResourceError> resource;
    std::optional<Verdict> first_unsat, first_unknown;
    bool all_unsat = true;
    for (const Problem& p : problems) {
        out.vars += p.vars.size();
        try {
            Propagation prop = forward_prop(p, options);
            Verdict v = classify(p, prop);
            if (keep_automata) out.automata.push_back(prop.cyclic() ? p.reg : prop.refined());
            out.max_states = std::max(out.max_states, v.stats.max_states());
            out.max_transitions = std::max(out.max_transitions, v.stats.max_transitions());
            out.iterations += v.stats.iterations;
            if (const auto* sat = std::get_if<Sat>(&v.kind)) {
                Assignment visible;
                for (const VarId& d : declared) visible.emplace(d, sat->model.at(d));
                out.verdict = "sat";
                out.model = std::move(visible);
                resource.reset();
                break;
            }
            if (v.unsat()) {
                if (!first_unsat) first_unsat = std::move(v);
            } else {
                all_unsat = false;
                if (!first_unknown) first_unknown = std::move(v);
            }
        } catch (const ResourceError& e) {
            all_unsat = false;
            if (!resource) resource = e;
        }
    }
    if (out.verdict.empty()) {
        if (resource) throw *resource;
        if (all_unsat) {
            out.verdict = "unsat";
            out.witness = std::get<Unsat>(first_unsat->kind).witness;
        } else {
            out.verdict = "unknown";
            out.reason = std::get<Unknown>(first_unknown->kind).reason;
        }
    }
    out.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::string stats_record(const std::string& file, const SolveOutcome& o) {
    nlohmann::ordered_json j;
    j["file"] = file;
    j["verdict"] = o.verdict;
    j["vars"] = o.vars;
    j["max_states"] = o.max_states;
    j["max_transitions"] = o.max_transitions;
    j["iterations"] = o.iterations;
    j["millis"] = o.millis;
    return j.dump();
}

std::string print_model(const Assignment& m) {
    std::string out;
    for (const auto& [v, w] : m) out += "(define-fun " + symbol(v.name) + " () String " + smt_string_literal(w) + ")\n";
    return out;
}

} // namespace strprop
