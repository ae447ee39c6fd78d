#include "strprop/snfa.hh"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "strprop/errors.hh"

namespace strprop {

namespace detail {

    struct SNfaBuilder {
        // Inputs must already be sorted and duplicate-free.
        static SNfa make(std::vector<StateId> states, std::vector<Transition> transitions,
                         std::vector<StateId> initial, std::vector<StateId> accepting, bool trim) {
            SNfa a;
            a.states_ = std::move(states);
            a.transitions_ = std::move(transitions);
            a.initial_ = std::move(initial);
            a.accepting_ = std::move(accepting);
            a.index();
            a.trim_ = trim;
            assert(well_formed(a));
            assert(!trim || a.compute_trim());
            return a;
        }
    };

} // namespace detail

namespace {

    template <class T>
    void sort_unique(std::vector<T>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

    // Index of the destination state of every transition, in transitions() order.
    std::vector<std::uint32_t> destination_indices(const SNfa& a) {
        std::vector<std::uint32_t> out;
        out.reserve(a.num_transitions());
        for (const Transition& t : a.transitions()) {
            out.push_back(static_cast<std::uint32_t>(*a.index_of(t.dst)));
        }
        return out;
    }

    std::size_t offset_of(const SNfa& a, std::span<const Transition> ts) {
        return static_cast<std::size_t>(ts.data() - a.transitions().data());
    }

    std::vector<std::uint32_t> initial_indices(const SNfa& a) {
        std::vector<std::uint32_t> out;
        for (std::size_t i = 0; i < a.num_states(); ++i) {
            if (a.is_initial(i)) out.push_back(static_cast<std::uint32_t>(i));
        }
        return out;
    }

} // namespace

void Budget::check_transitions(std::size_t count) const {
    if (count > max_transitions) {
        throw ResourceError("automaton exceeds the budget of " + std::to_string(max_transitions) +
                            " transitions");
    }
}

void Budget::check_deadline() const {
    if (deadline && std::chrono::steady_clock::now() > *deadline) {
        throw ResourceError("deadline exceeded");
    }
}

const Budget& Budget::unlimited() {
    static const Budget b;
    return b;
}

SNfa::SNfa(std::vector<StateId> states, std::vector<Transition> transitions,
           std::vector<StateId> initial, std::vector<StateId> accepting)
    : states_(std::move(states)), transitions_(std::move(transitions)),
      initial_(std::move(initial)), accepting_(std::move(accepting)) {
    sort_unique(states_);
    sort_unique(transitions_);
    sort_unique(initial_);
    sort_unique(accepting_);
    auto in_q = [this](StateId q) { return std::binary_search(states_.begin(), states_.end(), q); };
    for (const Transition& t : transitions_) {
        if (!nonempty(t.label)) throw std::invalid_argument("transition with an empty label");
        if (!in_q(t.src) || !in_q(t.dst)) {
            throw std::invalid_argument("transition endpoint " + to_string(in_q(t.src) ? t.dst : t.src) +
                                        " is not a state");
        }
    }
    for (StateId q : initial_) {
        if (!in_q(q)) throw std::invalid_argument("initial state " + to_string(q) + " is not a state");
    }
    for (StateId q : accepting_) {
        if (!in_q(q)) throw std::invalid_argument("accepting state " + to_string(q) + " is not a state");
    }
    index();
    trim_ = compute_trim();
}

void SNfa::index() {
    out_offsets_.assign(states_.size() + 1, 0);
    flags_.assign(states_.size(), 0);
    std::size_t t = 0;
    for (std::size_t i = 0; i < states_.size(); ++i) {
        out_offsets_[i] = t;
        while (t < transitions_.size() && transitions_[t].src == states_[i]) ++t;
    }
    out_offsets_[states_.size()] = t;
    for (StateId q : initial_) flags_[*index_of(q)] |= kInitial;
    for (StateId q : accepting_) flags_[*index_of(q)] |= kAccepting;
}

bool SNfa::compute_trim() const {
    std::vector<char> seen(states_.size(), 0);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < states_.size(); ++i) {
        if (is_initial(i)) {
            seen[i] = 1;
            stack.push_back(i);
        }
    }
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        for (const Transition& t : out(i)) {
            std::size_t d = *index_of(t.dst);
            if (!seen[d]) {
                seen[d] = 1;
                stack.push_back(d);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

std::optional<std::size_t> SNfa::index_of(StateId q) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), q);
    if (it == states_.end() || *it != q) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
}

std::span<const Transition> SNfa::out(std::size_t index) const {
    return {transitions_.data() + out_offsets_[index], out_offsets_[index + 1] - out_offsets_[index]};
}

bool well_formed(const SNfa& a) {
    auto in_q = [&](StateId q) { return a.index_of(q).has_value(); };
    if (!std::is_sorted(a.states().begin(), a.states().end()) ||
        std::adjacent_find(a.states().begin(), a.states().end()) != a.states().end()) {
        return false;
    }
    if (!std::is_sorted(a.transitions().begin(), a.transitions().end()) ||
        std::adjacent_find(a.transitions().begin(), a.transitions().end()) != a.transitions().end()) {
        return false;
    }
    for (const Transition& t : a.transitions()) {
        if (!nonempty(t.label) || !in_q(t.src) || !in_q(t.dst)) return false;
    }
    return std::all_of(a.initial().begin(), a.initial().end(), in_q) &&
           std::all_of(a.accepting().begin(), a.accepting().end(), in_q);
}

bool accepts(const SNfa& a, const Word& w) {
    const std::size_t n = a.num_states();
    std::vector<char> current(n, 0), next(n, 0);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
        current[i] = a.is_initial(i);
        any |= current[i] != 0;
    }
    for (CodePoint c : w) {
        if (!any) return false;
        std::fill(next.begin(), next.end(), 0);
        any = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!current[i]) continue;
            for (const Transition& t : a.out(i)) {
                if (mem(c, t.label)) {
                    next[*a.index_of(t.dst)] = 1;
                    any = true;
                }
            }
        }
        current.swap(next);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (current[i] && a.is_accepting(i)) return true;
    }
    return false;
}

SNfa rename(const SNfa& a, std::uint32_t tag) {
    auto re = [&](StateId q) { return StateId{static_cast<std::uint32_t>(*a.index_of(q)), tag}; };
    std::vector<StateId> states, initial, accepting;
    std::vector<Transition> transitions;
    states.reserve(a.num_states());
    for (std::size_t i = 0; i < a.num_states(); ++i) states.push_back({static_cast<std::uint32_t>(i), tag});
    transitions.reserve(a.num_transitions());
    for (const Transition& t : a.transitions()) transitions.push_back({re(t.src), t.label, re(t.dst)});
    for (StateId q : a.initial()) initial.push_back(re(q));
    for (StateId q : a.accepting()) accepting.push_back(re(q));
    // the map is monotone, so every collection is still sorted
    return detail::SNfaBuilder::make(std::move(states), std::move(transitions), std::move(initial),
                                     std::move(accepting), a.is_trim());
}

SNfa concat(const SNfa& a1, const SNfa& a2, const Budget& budget) {
    // Operand states live in one index space: [0, n1) for a1 (tag 1) and
    // [n1, n1 + n2) for a2 (tag 2). Tag-major StateId order matches it.
    const auto n1 = static_cast<std::uint32_t>(a1.num_states());
    const auto n2 = static_cast<std::uint32_t>(a2.num_states());
    const auto dst1 = destination_indices(a1);
    const auto dst2 = destination_indices(a2);
    const auto init2 = initial_indices(a2);
    auto sid = [n1](std::uint32_t k) { return k < n1 ? StateId{k, 1} : StateId{k - n1, 2}; };

    bool a1_accepts_empty = false;
    for (std::uint32_t i = 0; i < n1; ++i) a1_accepts_empty |= a1.is_initial(i) && a1.is_accepting(i);

    std::vector<std::uint32_t> start = initial_indices(a1);
    if (a1_accepts_empty) {
        for (std::uint32_t j : init2) start.push_back(n1 + j);
    }

    std::vector<char> seen(std::size_t{n1} + n2, 0);
    std::vector<std::uint32_t> worklist;
    auto visit = [&](std::uint32_t k) {
        if (!seen[k]) {
            seen[k] = 1;
            worklist.push_back(k);
        }
    };
    for (std::uint32_t k : start) visit(k);

    std::vector<Transition> transitions;
    for (std::size_t head = 0; head < worklist.size(); ++head) {
        budget.check_deadline();
        const std::uint32_t k = worklist[head];
        if (k < n1) {
            auto ts = a1.out(k);
            const std::size_t base = offset_of(a1, ts);
            for (std::size_t x = 0; x < ts.size(); ++x) {
                const Transition& t = ts[x];
                if (!nonempty(t.label)) continue;
                const std::uint32_t d = dst1[base + x];
                transitions.push_back({sid(k), t.label, sid(d)});
                visit(d);
                if (a1.is_accepting(d)) {
                    for (std::uint32_t j : init2) {
                        transitions.push_back({sid(k), t.label, sid(n1 + j)});
                        visit(n1 + j);
                    }
                }
            }
        } else {
            auto ts = a2.out(k - n1);
            const std::size_t base = offset_of(a2, ts);
            for (std::size_t x = 0; x < ts.size(); ++x) {
                if (!nonempty(ts[x].label)) continue;
                const std::uint32_t d = n1 + dst2[base + x];
                transitions.push_back({sid(k), ts[x].label, sid(d)});
                visit(d);
            }
        }
        budget.check_transitions(transitions.size());
    }
    sort_unique(transitions);
    budget.check_transitions(transitions.size());

    std::vector<StateId> states, initial, accepting;
    for (std::uint32_t k = 0; k < n1 + n2; ++k) {
        if (!seen[k]) continue;
        states.push_back(sid(k));
        if (k >= n1 && a2.is_accepting(k - n1)) accepting.push_back(sid(k));
    }
    for (std::uint32_t k : start) initial.push_back(sid(k));
    sort_unique(initial);
    return detail::SNfaBuilder::make(std::move(states), std::move(transitions), std::move(initial),
                                     std::move(accepting), true);
}

SNfa product(const SNfa& a1, const SNfa& a2, const Budget& budget) {
    const std::uint64_t n1 = a1.num_states(), n2 = a2.num_states();
    const auto dst1 = destination_indices(a1);
    const auto dst2 = destination_indices(a2);

    // pair -> product state number; dense table when it is small enough
    constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 24;
    const bool dense = n1 * n2 <= kDenseLimit;
    std::vector<std::uint32_t> dense_ids(dense ? n1 * n2 : 0, kUnset);
    std::unordered_map<std::uint64_t, std::uint32_t> sparse_ids;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;

    auto id_of = [&](std::uint32_t i, std::uint32_t j) -> std::uint32_t {
        const std::uint64_t key = i * n2 + j;
        std::uint32_t* slot;
        if (dense) {
            slot = &dense_ids[key];
        } else {
            auto [it, fresh] = sparse_ids.try_emplace(key, kUnset);
            slot = &it->second;
        }
        if (*slot == kUnset) {
            *slot = static_cast<std::uint32_t>(pairs.size());
            pairs.emplace_back(i, j);
        }
        return *slot;
    };

    const auto init1 = initial_indices(a1);
    const auto init2 = initial_indices(a2);
    for (std::uint32_t i : init1) {
        for (std::uint32_t j : init2) id_of(i, j);
    }
    const std::size_t num_initial = pairs.size();

    std::vector<Transition> transitions;
    for (std::uint32_t head = 0; head < pairs.size(); ++head) {
        if ((head & 0xFF) == 0) budget.check_deadline();
        const auto [i, j] = pairs[head];
        const auto ts1 = a1.out(i);
        const auto ts2 = a2.out(j);
        const std::size_t base1 = offset_of(a1, ts1), base2 = offset_of(a2, ts2);
        const std::size_t group = transitions.size();
        for (std::size_t x = 0; x < ts1.size(); ++x) {
            for (std::size_t y = 0; y < ts2.size(); ++y) {
                const Interval label = intersection(ts1[x].label, ts2[y].label);
                if (!nonempty(label)) continue;
                const std::uint32_t d = id_of(dst1[base1 + x], dst2[base2 + y]);
                transitions.push_back({StateId{head, 0}, label, StateId{d, 0}});
            }
        }
        // sources are numbered in processing order, so only the group needs sorting
        std::sort(transitions.begin() + static_cast<std::ptrdiff_t>(group), transitions.end());
        transitions.erase(std::unique(transitions.begin() + static_cast<std::ptrdiff_t>(group), transitions.end()),
                          transitions.end());
        budget.check_transitions(transitions.size());
    }

    std::vector<StateId> states, initial, accepting;
    states.reserve(pairs.size());
    for (std::uint32_t k = 0; k < pairs.size(); ++k) {
        states.push_back({k, 0});
        if (k < num_initial) initial.push_back({k, 0});
        if (a1.is_accepting(pairs[k].first) && a2.is_accepting(pairs[k].second)) accepting.push_back({k, 0});
    }
    return detail::SNfaBuilder::make(std::move(states), std::move(transitions), std::move(initial),
                                     std::move(accepting), true);
}

namespace {

    std::vector<char> reachable_mask(const SNfa& a) {
        std::vector<char> seen(a.num_states(), 0);
        std::vector<std::size_t> stack;
        for (std::size_t i = 0; i < a.num_states(); ++i) {
            if (a.is_initial(i)) {
                seen[i] = 1;
                stack.push_back(i);
            }
        }
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            for (const Transition& t : a.out(i)) {
                std::size_t d = *a.index_of(t.dst);
                if (!seen[d]) {
                    seen[d] = 1;
                    stack.push_back(d);
                }
            }
        }
        return seen;
    }

} // namespace

SNfa remove_unreachable(const SNfa& a) {
    if (a.is_trim()) return a;
    const auto seen = reachable_mask(a);
    std::vector<StateId> states, accepting;
    std::vector<Transition> transitions;
    for (std::size_t i = 0; i < a.num_states(); ++i) {
        if (!seen[i]) continue;
        states.push_back(a.states()[i]);
        if (a.is_accepting(i)) accepting.push_back(a.states()[i]);
        for (const Transition& t : a.out(i)) transitions.push_back(t);
    }
    std::vector<StateId> initial = a.initial();
    return detail::SNfaBuilder::make(std::move(states), std::move(transitions), std::move(initial),
                                     std::move(accepting), true);
}

bool is_empty(const SNfa& a) {
    if (a.is_trim()) return a.accepting().empty();
    const auto seen = reachable_mask(a);
    for (std::size_t i = 0; i < a.num_states(); ++i) {
        if (seen[i] && a.is_accepting(i)) return false;
    }
    return true;
}

std::optional<Word> some_word(const SNfa& a) {
    const std::size_t n = a.num_states();
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> parent(n, kNone);
    std::vector<CodePoint> via(n, 0);
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i) {
        if (a.is_initial(i)) {
            seen[i] = 1;
            queue.push_back(i);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::size_t i = queue[head];
        if (a.is_accepting(i)) {
            Word w;
            for (std::size_t k = i; parent[k] != kNone; k = parent[k]) w.push_back(via[k]);
            std::reverse(w.begin(), w.end());
            return w;
        }
        for (const Transition& t : a.out(i)) {
            const std::size_t d = *a.index_of(t.dst);
            if (seen[d]) continue;
            seen[d] = 1;
            parent[d] = i;
            via[d] = t.label.lo();
            queue.push_back(d);
        }
    }
    return std::nullopt;
}

std::optional<std::pair<Word, Word>> split_word(const SNfa& a1, const SNfa& a2, const SNfa& c,
                                                 const Word& w) {
    if (!accepts(c, w)) return std::nullopt;
    const std::size_t len = w.size();

    // prefix_ok[i]: a1 accepts w[0, i)
    std::vector<char> prefix_ok(len + 1, 0);
    {
        const std::size_t n = a1.num_states();
        std::vector<char> cur(n, 0), next(n, 0);
        for (std::size_t q = 0; q < n; ++q) cur[q] = a1.is_initial(q);
        for (std::size_t i = 0;; ++i) {
            for (std::size_t q = 0; q < n; ++q) prefix_ok[i] |= cur[q] && a1.is_accepting(q);
            if (i == len) break;
            std::fill(next.begin(), next.end(), 0);
            for (std::size_t q = 0; q < n; ++q) {
                if (!cur[q]) continue;
                for (const Transition& t : a1.out(q)) {
                    if (mem(w[i], t.label)) next[*a1.index_of(t.dst)] = 1;
                }
            }
            cur.swap(next);
        }
    }

    // suffix_ok[i]: a2 accepts w[i, len)
    std::vector<char> suffix_ok(len + 1, 0);
    {
        const std::size_t n = a2.num_states();
        const auto dst = destination_indices(a2);
        std::vector<char> live(n, 0), prev(n, 0);
        for (std::size_t q = 0; q < n; ++q) live[q] = a2.is_accepting(q);
        for (std::size_t i = len + 1; i-- > 0;) {
            for (std::size_t q = 0; q < n; ++q) suffix_ok[i] |= live[q] && a2.is_initial(q);
            if (i == 0) break;
            std::fill(prev.begin(), prev.end(), 0);
            for (std::size_t q = 0; q < n; ++q) {
                auto ts = a2.out(q);
                const std::size_t base = offset_of(a2, ts);
                for (std::size_t x = 0; x < ts.size(); ++x) {
                    if (live[dst[base + x]] && mem(w[i - 1], ts[x].label)) prev[q] = 1;
                }
            }
            live.swap(prev);
        }
    }

    for (std::size_t i = 0; i <= len; ++i) {
        if (prefix_ok[i] && suffix_ok[i]) return std::make_pair(w.substr(0, i), w.substr(i));
    }
    return std::nullopt;
}

bool isomorphic(const SNfa& a1, const SNfa& a2, std::size_t cap) {
    if (a1.num_states() > cap || a2.num_states() > cap) {
        throw std::length_error("isomorphism check limited to " + std::to_string(cap) + " states");
    }
    const std::size_t n = a1.num_states();
    if (n != a2.num_states() || a1.num_transitions() != a2.num_transitions() ||
        a1.initial().size() != a2.initial().size() || a1.accepting().size() != a2.accepting().size()) {
        return false;
    }

    struct Signature {
        bool initial, accepting;
        std::size_t out_degree, in_degree;
        bool operator==(const Signature&) const = default;
    };
    auto signatures = [n](const SNfa& a) {
        std::vector<Signature> s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = {a.is_initial(i), a.is_accepting(i), a.out(i).size(), 0};
        for (const Transition& t : a.transitions()) ++s[*a.index_of(t.dst)].in_degree;
        return s;
    };
    const auto sig1 = signatures(a1), sig2 = signatures(a2);

    // transitions of a1 touching each state, as (src index, label, dst index)
    struct Edge { std::size_t src; Interval label; std::size_t dst; };
    std::vector<std::vector<Edge>> incident(n);
    for (const Transition& t : a1.transitions()) {
        Edge e{*a1.index_of(t.src), t.label, *a1.index_of(t.dst)};
        incident[e.src].push_back(e);
        if (e.dst != e.src) incident[e.dst].push_back(e);
    }

    std::vector<std::size_t> map(n, n);
    std::vector<char> used(n, 0);
    auto consistent = [&](std::size_t i) {
        for (const Edge& e : incident[i]) {
            if (map[e.src] == n || map[e.dst] == n) continue;
            Transition image{a2.states()[map[e.src]], e.label, a2.states()[map[e.dst]]};
            if (!std::binary_search(a2.transitions().begin(), a2.transitions().end(), image)) return false;
        }
        return true;
    };
    auto search = [&](auto& self, std::size_t i) -> bool {
        if (i == n) return true;
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j] || !(sig1[i] == sig2[j])) continue;
            map[i] = j;
            used[j] = 1;
            if (consistent(i) && self(self, i + 1)) return true;
            used[j] = 0;
            map[i] = n;
        }
        return false;
    };
    // Every a1 transition has an image in a2 and the counts agree, so the
    // image is all of a2's transitions.
    return search(search, 0);
}

bool is_sigma_star(const SNfa& a) {
    if (a.num_states() != 1 || a.num_transitions() != 1) return false;
    const Transition& t = a.transitions().front();
    return a.is_initial(0) && a.is_accepting(0) && t.src == t.dst && t.label == Interval::all();
}

std::string to_string(StateId q) { return std::to_string(q.id) + "." + std::to_string(q.tag); }

std::string to_dot(const SNfa& a, const std::string& name) {
    std::ostringstream os;
    os << "digraph \"" << name << "\" {\n  rankdir=LR;\n";
    for (std::size_t i = 0; i < a.num_states(); ++i) {
        const std::string q = to_string(a.states()[i]);
        os << "  \"" << q << "\" [shape=" << (a.is_accepting(i) ? "doublecircle" : "circle") << "];\n";
        if (a.is_initial(i)) {
            os << "  \"init " << q << "\" [shape=point];\n";
            os << "  \"init " << q << "\" -> \"" << q << "\";\n";
        }
    }
    for (const Transition& t : a.transitions()) {
        os << "  \"" << to_string(t.src) << "\" -> \"" << to_string(t.dst) << "\" [label=\""
           << static_cast<std::uint32_t>(t.label.lo()) << "-" << static_cast<std::uint32_t>(t.label.hi()) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

std::string dump(const SNfa& a) {
    std::ostringstream os;
    os << "snfa states=" << a.num_states() << " transitions=" << a.num_transitions() << "\n";
    os << "initial";
    for (StateId q : a.initial()) os << " " << to_string(q);
    os << "\naccepting";
    for (StateId q : a.accepting()) os << " " << to_string(q);
    os << "\n";
    for (const Transition& t : a.transitions()) {
        os << to_string(t.src) << " " << to_string(t.label) << " " << to_string(t.dst) << "\n";
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const SNfa& a) { return os << dump(a); }

} // namespace strprop
