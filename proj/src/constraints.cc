#include "strprop/constraints.hh"

#include <algorithm>
#include <stdexcept>

#include "strprop/errors.hh"

namespace strprop {

bool Disjunction::operator==(const Disjunction& other) const { return branches == other.branches; }

std::set<VarId> Problem::dependencies(const VarId& v) const {
    std::set<VarId> out;
    for (const auto& [a, b] : equations(v)) {
        out.insert(a);
        out.insert(b);
    }
    return out;
}

const std::set<VarPair>& Problem::equations(const VarId& v) const {
    static const std::set<VarPair> none;
    auto it = concat.find(v);
    return it == concat.end() ? none : it->second;
}

bool well_formed(const Problem& p) {
    for (const auto& [v, pairs] : p.concat) {
        if (!p.vars.contains(v)) return false;
        for (const auto& [a, b] : pairs) {
            if (!p.vars.contains(a) || !p.vars.contains(b)) return false;
        }
    }
    if (p.reg.size() != p.vars.size()) return false;
    return std::all_of(p.vars.begin(), p.vars.end(), [&](const VarId& v) { return p.reg.contains(v); });
}

namespace {

    using Atoms = std::vector<const SurfaceConstraint*>;

    std::vector<Atoms> expand(std::span<const SurfaceConstraint> cs, std::size_t cap) {
        std::vector<Atoms> result{Atoms{}};
        for (const SurfaceConstraint& c : cs) {
            const auto* dis = std::get_if<Disjunction>(&c.node);
            if (!dis) {
                for (Atoms& a : result) a.push_back(&c);
                continue;
            }
            std::vector<Atoms> alternatives;
            for (const auto& branch : dis->branches) {
                auto sub = expand(branch, cap);
                alternatives.insert(alternatives.end(), sub.begin(), sub.end());
                if (alternatives.size() > cap) break;
            }
            std::vector<Atoms> next;
            for (const Atoms& prefix : result) {
                for (const Atoms& alt : alternatives) {
                    if (next.size() == cap) {
                        throw ResourceError("more than " + std::to_string(cap) + " disjuncts");
                    }
                    Atoms joined = prefix;
                    joined.insert(joined.end(), alt.begin(), alt.end());
                    next.push_back(std::move(joined));
                }
            }
            result = std::move(next);
        }
        return result;
    }

    void collect_names(std::span<const SurfaceConstraint> cs, std::set<std::string>& names) {
        auto term = [&](const Term& t) {
            if (const auto* v = std::get_if<VarId>(&t)) names.insert(v->name);
        };
        for (const SurfaceConstraint& c : cs) {
            std::visit([&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Membership> || std::is_same_v<T, LengthConstraint>) {
                    names.insert(n.var.name);
                } else if constexpr (std::is_same_v<T, Equation>) {
                    term(n.lhs);
                    for (const Term& t : n.rhs) term(t);
                } else {
                    for (const auto& b : n.branches) collect_names(b, names);
                }
            }, c.node);
        }
    }

    class ProblemBuilder {
    public:
        ProblemBuilder(const std::set<std::string>& surface, const DesugarOptions& options)
            : surface_(surface), options_(options) {}

        void add(const SurfaceConstraint& c) {
            std::visit([this](const auto& n) { add(n); }, c.node);
        }

        void declare(const VarId& v) { p_.vars.insert(v); }

        Problem finish() {
            for (const VarId& v : p_.vars) {
                auto it = memberships_.find(v);
                if (it == memberships_.end()) {
                    p_.reg.emplace(v, sigma_star());
                    continue;
                }
                SNfa a = it->second.front();
                for (std::size_t i = 1; i < it->second.size(); ++i) a = product(a, it->second[i]);
                p_.reg.emplace(v, std::move(a));
            }
            return std::move(p_);
        }

    private:
        VarId fresh() {
            std::string name;
            do {
                name = std::string(kFreshPrefix) + std::to_string(++counter_);
            } while (surface_.contains(name));
            VarId v{name};
            p_.vars.insert(v);
            return v;
        }

        VarId constrained_fresh(SNfa a) {
            VarId v = fresh();
            memberships_[v].push_back(std::move(a));
            return v;
        }

        VarId operand(const Term& t) {
            if (const auto* v = std::get_if<VarId>(&t)) {
                p_.vars.insert(*v);
                return *v;
            }
            return constrained_fresh(word_automaton(std::get<Word>(t)));
        }

        void add(const Membership& m) {
            p_.vars.insert(m.var);
            memberships_[m.var].push_back(compile(m.regex));
        }

        void add(const LengthConstraint& l) {
            p_.vars.insert(l.var);
            memberships_[l.var].push_back(length_automaton(l.op, l.bound, options_.max_length_bound));
        }

        void add(const Equation& e) {
            if (e.rhs.empty()) throw std::invalid_argument("equation with an empty right-hand side");
            if (const auto* lit = std::get_if<Word>(&e.lhs)) {
                Word joined;
                for (const Term& t : e.rhs) {
                    const auto* w = std::get_if<Word>(&t);
                    if (!w) throw UnsupportedError("equation with a literal left-hand side and variables on the right");
                    joined += *w;
                }
                // decided now; a false one becomes a variable with an empty language
                if (joined != *lit) constrained_fresh(SNfa());
                return;
            }
            const VarId lhs = std::get<VarId>(e.lhs);
            p_.vars.insert(lhs);
            if (e.rhs.size() == 1) {
                VarId only = operand(e.rhs.front());
                VarId empty_word = constrained_fresh(word_automaton(Word{}));
                p_.concat[lhs].insert({std::move(only), std::move(empty_word)});
                return;
            }
            VarId acc = operand(e.rhs.front());
            for (std::size_t i = 1; i < e.rhs.size(); ++i) {
                VarId next = operand(e.rhs[i]);
                VarId target = i + 1 == e.rhs.size() ? lhs : fresh();
                p_.concat[target].insert({acc, next});
                acc = target;
            }
        }

        void add(const Disjunction&) { throw InternalError("disjunction left after expansion"); }

        const std::set<std::string>& surface_;
        const DesugarOptions& options_;
        Problem p_;
        std::map<VarId, std::vector<SNfa>> memberships_;
        unsigned counter_ = 0;
    };

} // namespace

std::vector<Problem> desugar(std::span<const SurfaceConstraint> cs, std::span<const VarId> declared,
                             const DesugarOptions& options) {
    std::set<std::string> surface;
    collect_names(cs, surface);
    for (const VarId& v : declared) surface.insert(v.name);

    std::vector<Atoms> disjuncts = expand(cs, options.max_disjuncts);
    std::vector<Problem> out;
    if (disjuncts.empty()) {
        // an empty disjunction: unsatisfiable
        ProblemBuilder b(surface, options);
        for (const VarId& v : declared) b.declare(v);
        b.add(SurfaceConstraint{Equation{Word(U"a"), {Word(U"b")}}});
        out.push_back(b.finish());
        return out;
    }
    for (const Atoms& atoms : disjuncts) {
        ProblemBuilder b(surface, options);
        for (const VarId& v : declared) b.declare(v);
        for (const SurfaceConstraint* c : atoms) b.add(*c);
        out.push_back(b.finish());
    }
    return out;
}

bool sat_str(const Problem& p, const Assignment& m) {
    for (const VarId& v : p.vars) {
        if (!m.contains(v)) throw std::invalid_argument("assignment does not cover variable " + v.name);
    }
    for (const VarId& v : p.vars) {
        if (!accepts(p.reg.at(v), m.at(v))) return false;
    }
    for (const auto& [v, pairs] : p.concat) {
        for (const auto& [a, b] : pairs) {
            if (m.at(v) != m.at(a) + m.at(b)) return false;
        }
    }
    return true;
}

Layering layering(const Problem& p) {
    Layering out;
    std::set<VarId> remaining = p.vars, placed;
    std::vector<std::set<VarId>> bottom_up;
    while (!remaining.empty()) {
        std::set<VarId> level;
        for (const VarId& v : remaining) {
            const auto deps = p.dependencies(v);
            if (std::includes(placed.begin(), placed.end(), deps.begin(), deps.end())) level.insert(v);
        }
        if (level.empty()) {
            out.stuck = std::move(remaining);
            return out;
        }
        for (const VarId& v : level) remaining.erase(v);
        placed.insert(level.begin(), level.end());
        bottom_up.push_back(std::move(level));
    }
    out.layers.assign(std::make_move_iterator(bottom_up.rbegin()), std::make_move_iterator(bottom_up.rend()));
    return out;
}

bool check_tree(const Problem& p) {
    std::vector<VarId> operands;
    for (const VarId& v : p.vars) {
        for (const auto& [a, b] : p.equations(v)) {
            operands.push_back(a);
            operands.push_back(b);
        }
    }
    std::sort(operands.begin(), operands.end());
    return std::adjacent_find(operands.begin(), operands.end()) == operands.end();
}

std::string dump(const Problem& p) {
    std::string out;
    for (const VarId& v : p.vars) {
        const SNfa& a = p.reg.at(v);
        out += v.name + " : states=" + std::to_string(a.num_states()) +
               " transitions=" + std::to_string(a.num_transitions()) +
               " initial=" + std::to_string(a.initial().size()) +
               " accepting=" + std::to_string(a.accepting().size()) + " ; deps:";
        bool first = true;
        for (const auto& [x, y] : p.equations(v)) {
            out += first ? " " : ",";
            out += "(" + x.name + "," + y.name + ")";
            first = false;
        }
        out += "\n";
    }
    return out;
}

} // namespace strprop
