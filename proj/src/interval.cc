#include "strprop/interval.hh"

#include <algorithm>
#include <stdexcept>

namespace strprop {

Interval::Interval(CodePoint lo, CodePoint hi) : lo_(lo), hi_(hi) {
    if (lo > kMaxCodePoint || hi > kMaxCodePoint) {
        throw std::out_of_range("code point above U+10FFFF in interval");
    }
    if (lo > hi) {
        lo_ = 1;
        hi_ = 0;
    }
}

std::uint64_t Interval::size() const {
    return nonempty(*this) ? std::uint64_t{hi_} - lo_ + 1 : 0;
}

Interval intersection(const Interval& a, const Interval& b) {
    return {std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

bool nonempty(const Interval& a) { return a.lo() <= a.hi(); }

bool mem(CodePoint e, const Interval& a) { return a.lo() <= e && e <= a.hi(); }

std::vector<CodePoint> sem(const Interval& a, std::size_t cap) {
    if (a.size() > cap) {
        throw std::length_error("interval " + to_string(a) + " too large to enumerate");
    }
    std::vector<CodePoint> out;
    if (!nonempty(a)) return out;
    out.reserve(a.size());
    for (CodePoint c = a.lo();; ++c) {
        out.push_back(c);
        if (c == a.hi()) break;
    }
    return out;
}

std::string to_string(const Interval& a) {
    return "[" + std::to_string(a.lo()) + "," + std::to_string(a.hi()) + "]";
}

std::ostream& operator<<(std::ostream& os, const Interval& a) { return os << to_string(a); }

IntervalSet::IntervalSet(std::initializer_list<Interval> parts)
    : IntervalSet(normalize(std::vector<Interval>(parts))) {}

IntervalSet IntervalSet::normalize(std::vector<Interval> raw) {
    std::erase_if(raw, [](const Interval& i) { return !nonempty(i); });
    std::sort(raw.begin(), raw.end());
    IntervalSet out;
    for (const Interval& i : raw) {
        if (!out.parts_.empty()) {
            Interval& last = out.parts_.back();
            // merge overlapping and adjacent parts
            if (std::uint64_t{i.lo()} <= std::uint64_t{last.hi()} + 1) {
                last = Interval(last.lo(), std::max(last.hi(), i.hi()));
                continue;
            }
        }
        out.parts_.push_back(i);
    }
    return out;
}

bool IntervalSet::contains(CodePoint e) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), e,
                               [](CodePoint v, const Interval& i) { return v < i.lo(); });
    return it != parts_.begin() && mem(e, *std::prev(it));
}

std::uint64_t IntervalSet::size() const {
    std::uint64_t n = 0;
    for (const Interval& i : parts_) n += i.size();
    return n;
}

IntervalSet iset_union(const IntervalSet& x, const IntervalSet& y) {
    std::vector<Interval> raw(x.parts());
    raw.insert(raw.end(), y.parts().begin(), y.parts().end());
    return IntervalSet::normalize(std::move(raw));
}

IntervalSet iset_complement(const IntervalSet& x) {
    std::vector<Interval> gaps;
    std::uint64_t next = 0;
    for (const Interval& i : x.parts()) {
        if (i.lo() > next) gaps.emplace_back(static_cast<CodePoint>(next), i.lo() - 1);
        next = std::uint64_t{i.hi()} + 1;
    }
    if (next <= kMaxCodePoint) gaps.emplace_back(static_cast<CodePoint>(next), kMaxCodePoint);
    return IntervalSet::normalize(std::move(gaps));
}

IntervalSet iset_intersection(const IntervalSet& x, const IntervalSet& y) {
    std::vector<Interval> raw;
    for (const Interval& a : x.parts()) {
        for (const Interval& b : y.parts()) {
            Interval c = intersection(a, b);
            if (nonempty(c)) raw.push_back(c);
        }
    }
    return IntervalSet::normalize(std::move(raw));
}

std::string to_string(const IntervalSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.parts().size(); ++i) {
        if (i) out += ",";
        out += to_string(s.parts()[i]);
    }
    return out + "}";
}

std::ostream& operator<<(std::ostream& os, const IntervalSet& s) { return os << to_string(s); }

} // namespace strprop
