#include "strprop/solver.hh"

#include <algorithm>

#include "strprop/errors.hh"
#include "strprop/regex.hh"

namespace strprop {

std::set<VarId> ready_set(const std::set<VarId>& s, const Problem& p, const std::set<VarId>& r) {
    std::set<VarId> out;
    for (const VarId& v : s) {
        const auto& eqs = p.equations(v);
        bool ready = std::all_of(eqs.begin(), eqs.end(), [&](const VarPair& e) {
            return r.contains(e.first) && r.contains(e.second);
        });
        if (ready) out.insert(v);
    }
    return out;
}

namespace {

    SNfa concat_step(const SNfa& a1, const SNfa& a2, const SolverOptions& options, const Budget& budget) {
        if (options.optimize && is_sigma_star(a1) && is_sigma_star(a2)) return sigma_star();
        return concat(a1, a2, budget);
    }

    SNfa product_step(const SNfa& a1, const SNfa& a2, const SolverOptions& options, const Budget& budget) {
        if (options.optimize) {
            if (is_sigma_star(a1)) return a2;
            if (is_sigma_star(a2)) return a1;
        }
        return product(a1, a2, budget);
    }

} // namespace

RefinedReg var_lang(const std::set<VarId>& c, const Problem& p, RefinedReg reg, const SolverOptions& options) {
    const Budget budget = options.budget();
    for (const VarId& v : c) {
        SNfa a = reg.at(v);
        for (const auto& [v1, v2] : p.equations(v)) {
            budget.check_deadline();
            a = product_step(a, concat_step(reg.at(v1), reg.at(v2), options, budget), options, budget);
        }
        reg.insert_or_assign(v, std::move(a));
    }
    return reg;
}

Propagation forward_prop(const Problem& p, const SolverOptions& options) {
    Propagation out;
    RefinedReg reg = p.reg;
    std::set<VarId> s = p.vars, r;
    while (!s.empty()) {
        std::set<VarId> c = ready_set(s, p, r);
        if (c.empty()) {
            out.result = CyclicDependency{std::move(s)};
            return out;
        }
        ++out.iterations;
        reg = var_lang(c, p, std::move(reg), options);
        for (const VarId& v : c) s.erase(v);
        r.insert(c.begin(), c.end());
    }
    out.result = std::move(reg);
    return out;
}

std::size_t SolveStats::max_states() const {
    std::size_t m = 0;
    for (const auto& [v, s] : sizes) m = std::max(m, s.states);
    return m;
}

std::size_t SolveStats::max_transitions() const {
    std::size_t m = 0;
    for (const auto& [v, s] : sizes) m = std::max(m, s.transitions);
    return m;
}

std::string_view Verdict::name() const {
    if (sat()) return "sat";
    if (unsat()) return "unsat";
    return "unknown";
}

std::string_view to_string(UnknownReason r) { return r == UnknownReason::Cyclic ? "cyclic" : "not-tree"; }

Verdict classify(const Problem& p, const Propagation& prop) {
    Verdict out;
    out.stats.iterations = prop.iterations;
    const RefinedReg& sizes_from = prop.cyclic() ? p.reg : prop.refined();
    for (const auto& [v, a] : sizes_from) out.stats.sizes[v] = {a.num_states(), a.num_transitions()};

    if (prop.cyclic()) {
        out.kind = Unknown{UnknownReason::Cyclic};
        return out;
    }
    const RefinedReg& reg = prop.refined();
    for (const auto& [v, a] : reg) {
        if (is_empty(a)) {
            out.kind = Unsat{v};
            return out;
        }
    }
    if (check_tree(p)) {
        out.kind = Sat{extract_model(p, reg)};
    } else {
        out.kind = Unknown{UnknownReason::NotTree};
    }
    return out;
}

Assignment extract_model(const Problem& p, const RefinedReg& reg) {
    const Layering l = layering(p);
    if (!l.acyclic()) throw InternalError("model extraction on a cyclic problem");
    Assignment m;
    for (const auto& layer : l.layers) {
        for (const VarId& v : layer) {
            if (!m.contains(v)) {
                auto w = some_word(reg.at(v));
                if (!w) throw InternalError("model extraction: empty language for " + v.name);
                m.emplace(v, std::move(*w));
            }
            for (const auto& [v1, v2] : p.equations(v)) {
                const SNfa& a1 = reg.at(v1);
                const SNfa& a2 = reg.at(v2);
                auto parts = split_word(a1, a2, concat(a1, a2), m.at(v));
                if (!parts) throw InternalError("model extraction: no split for " + v.name);
                if (m.contains(v1) || m.contains(v2)) {
                    throw InternalError("model extraction: operand assigned twice under " + v.name);
                }
                m.emplace(v1, std::move(parts->first));
                m.emplace(v2, std::move(parts->second));
            }
        }
    }
    if (!sat_str(p, m)) throw InternalError("model extraction produced an invalid assignment");
    return m;
}

Verdict solve(const Problem& p, const SolverOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v = classify(p, forward_prop(p, options));
    v.stats.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return v;
}

std::string dump(const RefinedReg& reg) {
    std::string out;
    for (const auto& [v, a] : reg) {
        out += "== " + v.name + "\n";
        out += dump(a);
    }
    return out;
}

} // namespace strprop
