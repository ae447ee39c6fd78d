#include "strprop/oracle.hh"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace strprop {

void Bound::validate() const {
    if (max_len > kMaxOracleLength) throw std::invalid_argument("oracle bound: max_len above 8");
    if (alphabet.size() > kMaxOracleAlphabet) throw std::invalid_argument("oracle bound: alphabet above 8 characters");
}

std::vector<Word> enumerate_words(const Bound& b) {
    b.validate();
    std::vector<CodePoint> letters;
    for (const Interval& part : b.alphabet.parts()) {
        for (CodePoint c = part.lo(); c <= part.hi(); ++c) letters.push_back(c);
    }
    std::vector<Word> out{Word{}};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= b.max_len; ++len) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            for (CodePoint c : letters) out.push_back(out[i] + c);
        }
        begin = end;
    }
    return out;
}

namespace {

    struct PathSearch {
        const SNfa& a;
        const Word& w;
        std::set<std::pair<std::size_t, std::size_t>> dead;

        bool is(const std::vector<StateId>& set, StateId q) const {
            for (const StateId& s : set) {
                if (s == q) return true;
            }
            return false;
        }

        bool from(StateId q, std::size_t i) {
            if (i == w.size()) return is(a.accepting(), q);
            if (dead.contains({q.id + (std::size_t{q.tag} << 32), i})) return false;
            for (const Transition& t : a.transitions()) {
                if (t.src == q && t.label.lo() <= w[i] && w[i] <= t.label.hi() && from(t.dst, i + 1)) return true;
            }
            dead.insert({q.id + (std::size_t{q.tag} << 32), i});
            return false;
        }
    };

} // namespace

bool oracle_accepts(const SNfa& a, const Word& w) {
    PathSearch search{a, w, {}};
    for (const StateId& q : a.initial()) {
        if (search.from(q, 0)) return true;
    }
    return false;
}

std::set<Word> oracle_lang(const SNfa& a, const Bound& b, std::size_t cap) {
    std::vector<Word> words = enumerate_words(b);
    if (words.size() > cap) throw std::length_error("oracle_lang: more than cap candidate words");
    std::set<Word> out;
    for (Word& w : words) {
        if (oracle_accepts(a, w)) out.insert(std::move(w));
    }
    return out;
}

namespace {

    struct Eq {
        std::size_t lhs, left, right;
    };

    class Search {
    public:
        Search(const Problem& p, const Bound& b, std::size_t cap) : cap_(cap) {
            for (const VarId& v : p.vars) {
                index_.emplace(v, names_.size());
                names_.push_back(v);
            }
            touching_.resize(names_.size());
            for (const auto& [v, pairs] : p.concat) {
                for (const auto& [x, y] : pairs) {
                    Eq e{index_.at(v), index_.at(x), index_.at(y)};
                    for (std::size_t k : {e.lhs, e.left, e.right}) touching_[k].push_back(eqs_.size());
                    eqs_.push_back(e);
                }
            }
            for (const VarId& v : p.vars) {
                lang_.push_back(oracle_lang(p.reg.at(v), b, cap));
                std::vector<Word> sorted(lang_.back().begin(), lang_.back().end());
                std::stable_sort(sorted.begin(), sorted.end(),
                                 [](const Word& x, const Word& y) { return x.size() < y.size(); });
                candidates_.push_back(std::move(sorted));
            }
            value_.resize(names_.size());
            assigned_.assign(names_.size(), false);
        }

        bool run(Assignment& out) {
            for (const auto& c : candidates_) {
                if (c.empty()) return false;
            }
            std::vector<bool> seen(names_.size(), false);
            for (std::size_t start = 0; start < names_.size(); ++start) {
                if (seen[start]) continue;
                std::vector<std::size_t> order = component_order(start, seen);
                if (!assign(order, 0)) return false;
            }
            for (std::size_t i = 0; i < names_.size(); ++i) out.emplace(names_[i], value_[i]);
            return true;
        }

    private:
        // Greedy order starting from a variable that is on no right-hand
        // side, if any. Next comes the unplaced variable with the best
        // score: an equation whose lhs is placed counts 2 for each operand,
        // any other placed neighbour counts 1. Ties go to the smaller name.
        std::vector<std::size_t> component_order(std::size_t start, std::vector<bool>& seen) {
            std::vector<std::size_t> member{start};
            seen[start] = true;
            for (std::size_t i = 0; i < member.size(); ++i) {
                for (std::size_t e : touching_[member[i]]) {
                    for (std::size_t k : {eqs_[e].lhs, eqs_[e].left, eqs_[e].right}) {
                        if (!seen[k]) {
                            seen[k] = true;
                            member.push_back(k);
                        }
                    }
                }
            }
            std::sort(member.begin(), member.end());
            std::vector<bool> operand(names_.size(), false);
            for (const Eq& q : eqs_) operand[q.left] = operand[q.right] = true;

            std::vector<std::size_t> order;
            std::vector<bool> placed(names_.size(), false);
            auto place = [&](std::size_t k) {
                placed[k] = true;
                order.push_back(k);
            };
            auto root = std::find_if(member.begin(), member.end(), [&](std::size_t k) { return !operand[k]; });
            place(root != member.end() ? *root : member.front());
            while (order.size() < member.size()) {
                std::size_t best = names_.size();
                int best_score = -1;
                for (std::size_t k : member) {
                    if (placed[k]) continue;
                    int score = 0;
                    for (std::size_t e : touching_[k]) {
                        const Eq& q = eqs_[e];
                        if (q.lhs != k && placed[q.lhs]) score += 2;
                        for (std::size_t o : {q.lhs, q.left, q.right}) score += (o != k && placed[o]) ? 1 : 0;
                    }
                    if (score > best_score) {
                        best = k;
                        best_score = score;
                    }
                }
                place(best);
            }
            return order;
        }

        bool consistent(std::size_t k) const {
            for (std::size_t e : touching_[k]) {
                const Eq& q = eqs_[e];
                const bool l = assigned_[q.lhs], a = assigned_[q.left], b = assigned_[q.right];
                const Word& v = value_[q.lhs];
                if (l && a && b) {
                    if (v.size() != value_[q.left].size() + value_[q.right].size()) return false;
                    if (v.compare(0, value_[q.left].size(), value_[q.left]) != 0) return false;
                    if (v.compare(value_[q.left].size(), Word::npos, value_[q.right]) != 0) return false;
                } else if (l && a) {
                    if (!v.starts_with(value_[q.left])) return false;
                } else if (l && b) {
                    if (!v.ends_with(value_[q.right])) return false;
                }
            }
            return true;
        }

        // Candidates for k implied by an equation whose other side is
        // already assigned, shortest first; nullopt when none applies.
        std::optional<std::vector<Word>> derived(std::size_t k) const {
            std::optional<std::vector<Word>> best;
            for (std::size_t e : touching_[k]) {
                const Eq& q = eqs_[e];
                const bool l = assigned_[q.lhs], a = assigned_[q.left], b = assigned_[q.right];
                const Word& v = value_[q.lhs];
                std::vector<Word> c;
                if (k == q.lhs && a && b && q.left != k && q.right != k) {
                    c.push_back(value_[q.left] + value_[q.right]);
                } else if (k == q.left && k != q.lhs && l && b && q.right != k) {
                    if (v.ends_with(value_[q.right])) c.push_back(v.substr(0, v.size() - value_[q.right].size()));
                } else if (k == q.right && k != q.lhs && l && a && q.left != k) {
                    if (v.starts_with(value_[q.left])) c.push_back(v.substr(value_[q.left].size()));
                } else if (k == q.left && k != q.lhs && l) {
                    for (std::size_t n = 0; n <= v.size(); ++n) c.push_back(v.substr(0, n));
                } else if (k == q.right && k != q.lhs && l) {
                    for (std::size_t n = 0; n <= v.size(); ++n) c.push_back(v.substr(v.size() - n));
                } else {
                    continue;
                }
                if (!best || c.size() < best->size()) best = std::move(c);
            }
            return best;
        }

        bool assign(const std::vector<std::size_t>& order, std::size_t pos) {
            if (pos == order.size()) return true;
            const std::size_t k = order[pos];
            const auto implied = derived(k);
            const std::vector<Word>& pool = implied ? *implied : candidates_[k];
            assigned_[k] = true;
            for (const Word& w : pool) {
                if (++steps_ > cap_) throw std::length_error("oracle_sat: search cap exceeded");
                if (implied && !lang_[k].contains(w)) continue;
                value_[k] = w;
                if (consistent(k) && assign(order, pos + 1)) return true;
            }
            assigned_[k] = false;
            return false;
        }

        std::size_t cap_;
        std::size_t steps_ = 0;
        std::vector<VarId> names_;
        std::map<VarId, std::size_t> index_;
        std::vector<Eq> eqs_;
        std::vector<std::vector<std::size_t>> touching_;
        std::vector<std::set<Word>> lang_;
        std::vector<std::vector<Word>> candidates_;
        std::vector<Word> value_;
        std::vector<bool> assigned_;
    };

} // namespace

OracleVerdict oracle_sat(const Problem& p, const Bound& b, std::size_t cap) {
    b.validate();
    Search search(p, b, cap);
    Assignment m;
    if (search.run(m)) return OracleSat{std::move(m)};
    return UnsatWithin{b};
}

} // namespace strprop
