#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace schlumprecht {

using index_t = std::int64_t;

// Indices are 1-based and must fit in a signed 32-bit integer.
inline constexpr index_t index_limit = 2147483647;

// Closed interval [lo, hi] of basis indices.
struct IndexInterval {
    index_t lo = 1;
    index_t hi = 1;

    IndexInterval() = default;
    IndexInterval(index_t lo_, index_t hi_) : lo(lo_), hi(hi_) {
        if (lo < 1 || hi < lo) {
            throw std::invalid_argument("IndexInterval requires 1 <= lo <= hi");
        }
    }

    bool contains(index_t i) const { return lo <= i && i <= hi; }
    index_t length() const { return hi - lo + 1; }

    friend bool operator==(const IndexInterval&, const IndexInterval&) = default;
};

// Finitely supported sequence: sorted (index, value) entries, no zeros stored.
// Immutable after construction.
class SparseVector {
public:
    struct Entry {
        index_t index;
        double value;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    SparseVector() = default;

    // Sorts, drops exact zeros, validates index range and uniqueness.
    static SparseVector from_pairs(std::vector<Entry> pairs) {
        std::vector<Entry> kept;
        kept.reserve(pairs.size());
        for (const Entry& e : pairs) {
            if (e.index < 1 || e.index > index_limit) {
                throw std::invalid_argument("vector index out of range: " + std::to_string(e.index));
            }
            if (!std::isfinite(e.value)) {
                throw std::invalid_argument("vector value must be finite");
            }
            if (e.value != 0.0) kept.push_back(e);
        }
        std::sort(kept.begin(), kept.end(),
                  [](const Entry& a, const Entry& b) { return a.index < b.index; });
        for (std::size_t t = 1; t < kept.size(); ++t) {
            if (kept[t].index == kept[t - 1].index) {
                throw std::invalid_argument("duplicate index " + std::to_string(kept[t].index));
            }
        }
        SparseVector x;
        x.entries_ = std::move(kept);
        return x;
    }

    static SparseVector single(index_t i, double v) { return from_pairs({{i, v}}); }

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }

    index_t min_index() const {
        require_nonempty();
        return entries_.front().index;
    }
    index_t max_index() const {
        require_nonempty();
        return entries_.back().index;
    }
    IndexInterval support_hull() const { return {min_index(), max_index()}; }

    // 0.0 for indices outside the support.
    double value_at(index_t i) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                                   [](const Entry& e, index_t k) { return e.index < k; });
        if (it != entries_.end() && it->index == i) return it->value;
        return 0.0;
    }

    double sup_norm() const {
        double m = 0.0;
        for (const Entry& e : entries_) m = std::max(m, std::abs(e.value));
        return m;
    }
    double l1_norm() const {
        double s = 0.0;
        for (const Entry& e : entries_) s += std::abs(e.value);
        return s;
    }

    SparseVector scaled(double c) const {
        std::vector<Entry> out;
        if (c != 0.0) {
            out.reserve(entries_.size());
            for (const Entry& e : entries_) out.push_back({e.index, e.value * c});
        }
        SparseVector x;
        x.entries_ = std::move(out);
        return x;
    }

    friend bool operator==(const SparseVector&, const SparseVector&) = default;

private:
    void require_nonempty() const {
        if (entries_.empty()) throw std::logic_error("empty vector has no support");
    }

    std::vector<Entry> entries_;
};

// Coordinatewise sum; overlapping entries may cancel to zero and are dropped.
inline SparseVector add(const SparseVector& a, const SparseVector& b) {
    std::vector<SparseVector::Entry> out;
    out.reserve(a.support_size() + b.support_size());
    auto ia = a.entries().begin(), ea = a.entries().end();
    auto ib = b.entries().begin(), eb = b.entries().end();
    while (ia != ea || ib != eb) {
        if (ib == eb || (ia != ea && ia->index < ib->index)) {
            out.push_back(*ia++);
        } else if (ia == ea || ib->index < ia->index) {
            out.push_back(*ib++);
        } else {
            double v = ia->value + ib->value;
            if (v != 0.0) out.push_back({ia->index, v});
            ++ia;
            ++ib;
        }
    }
    return SparseVector::from_pairs(std::move(out));
}

// Ex: keep the entries with lo <= index <= hi.
inline SparseVector restrict(const SparseVector& x, const IndexInterval& e) {
    std::vector<SparseVector::Entry> out;
    for (const auto& entry : x.entries()) {
        if (e.contains(entry.index)) out.push_back(entry);
    }
    return SparseVector::from_pairs(std::move(out));
}

// Absolute values in support order. Two vectors with the same canonical form
// have the same norm: the basis is 1-unconditional and spreading invariant,
// so signs and index gaps carry no norm information.
struct CanonicalForm {
    std::vector<double> values;
    friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
};

inline CanonicalForm canonicalize(const SparseVector& x) {
    if (x.empty()) throw std::invalid_argument("empty vector has no canonical form");
    CanonicalForm c;
    c.values.reserve(x.support_size());
    for (const auto& e : x.entries()) c.values.push_back(std::abs(e.value));
    return c;
}

// |y_i| <= |x_i| at every index (indices absent from x force y to vanish there).
inline bool lattice_leq(const SparseVector& y, const SparseVector& x) {
    auto iy = y.entries().begin(), ey = y.entries().end();
    auto ix = x.entries().begin(), ex = x.entries().end();
    while (iy != ey) {
        while (ix != ex && ix->index < iy->index) ++ix;
        if (ix == ex || ix->index != iy->index) return false;
        if (std::abs(iy->value) > std::abs(ix->value)) return false;
        ++iy;
    }
    return true;
}

}  // namespace schlumprecht
