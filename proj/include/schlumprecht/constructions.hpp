#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "schlumprecht/norm.hpp"
#include "schlumprecht/sparse_vector.hpp"

namespace schlumprecht {

// Parameters of a nested family F_1..F_n with card(F_i) = p_i = q_1...q_i.
// The normalized characteristic functions of the F_i span an almost isometric
// copy of l_inf^n; larger q gives a better constant.
struct YardstickSpec {
    int n = 1;
    std::vector<std::int64_t> q;
    index_t start_index = 1;

    void validate() const {
        if (n < 1) throw std::invalid_argument("yardstick requires n >= 1");
        if (static_cast<int>(q.size()) != n) {
            throw std::invalid_argument("yardstick needs exactly n ratios q_1..q_n");
        }
        for (std::int64_t qi : q) {
            if (qi < 2) throw std::invalid_argument("yardstick ratios must be >= 2");
        }
        if (start_index < 1) throw std::invalid_argument("start index must be >= 1");
    }

    std::vector<std::int64_t> level_sizes() const {
        std::vector<std::int64_t> p(n);
        std::int64_t acc = 1;
        for (int i = 0; i < n; ++i) {
            acc *= q[i];
            if (acc > index_limit) throw std::invalid_argument("yardstick index range overflow");
            p[i] = acc;
        }
        return p;
    }

    std::int64_t total_support() const {
        const auto p = level_sizes();
        const std::int64_t total = std::accumulate(p.begin(), p.end(), std::int64_t{0});
        if (start_index > index_limit - total + 1) {
            throw std::invalid_argument("yardstick index range overflow");
        }
        return total;
    }
};

struct Yardstick {
    std::vector<SparseVector> vectors;            // y_1..y_n, each of norm 1
    std::vector<std::vector<index_t>> levels;     // the index sets F_1..F_n
    IndexInterval support{1, 1};
};

namespace detail {

// Preorder walk of the nesting: each level-i element comes first, immediately
// followed by the blocks of its q_{i+1} level-(i+1) successors.
inline void yardstick_walk(int level, int n, const std::vector<std::int64_t>& q,
                           index_t& next_index, std::vector<std::vector<index_t>>& levels) {
    levels[level].push_back(next_index++);
    if (level + 1 < n) {
        for (std::int64_t t = 0; t < q[level + 1]; ++t) {
            yardstick_walk(level + 1, n, q, next_index, levels);
        }
    }
}

}  // namespace detail

// Builds F_1..F_n in the nested interleaved layout, supports packed into
// consecutive integers from start_index, and returns y_i = chi_{F_i} scaled to
// exact norm 1. (Normalization divides by ||chi_F|| = p/f(p), not by f(p):
// only the former makes the vectors normalized under the engine norm.)
inline Yardstick build_yardstick(const YardstickSpec& spec) {
    spec.validate();
    spec.total_support();  // overflow check
    Yardstick out;
    out.levels.assign(spec.n, {});
    index_t next = spec.start_index;
    for (std::int64_t root = 0; root < spec.q[0]; ++root) {
        detail::yardstick_walk(0, spec.n, spec.q, next, out.levels);
    }
    out.support = IndexInterval(spec.start_index, next - 1);
    out.vectors.reserve(spec.n);
    for (int i = 0; i < spec.n; ++i) {
        const std::size_t p = out.levels[i].size();
        const double value = 1.0 / constant_block_norm(p, 1.0);
        std::vector<SparseVector::Entry> entries;
        entries.reserve(p);
        for (index_t idx : out.levels[i]) entries.push_back({idx, value});
        out.vectors.push_back(SparseVector::from_pairs(std::move(entries)));
    }
    return out;
}

// Characteristic function of [start, start+length-1], optionally scaled to
// norm 1.
inline SparseVector build_constant_block(std::int64_t length, index_t start, bool normalized) {
    if (length < 1) throw std::invalid_argument("block length must be >= 1");
    if (start < 1 || start > index_limit - length + 1) {
        throw std::invalid_argument("block index range overflow");
    }
    const double value = normalized ? 1.0 / constant_block_norm(length, 1.0) : 1.0;
    std::vector<SparseVector::Entry> entries;
    entries.reserve(length);
    for (std::int64_t t = 0; t < length; ++t) entries.push_back({start + t, value});
    return SparseVector::from_pairs(std::move(entries));
}

// y = (1/m) sum x_i for m consecutive normalized constant blocks. Not
// re-normalized; ||y|| approaches 1 only as m grows.
inline SparseVector build_l1_average(std::int64_t m, std::int64_t block_length, index_t start) {
    if (m < 2) throw std::invalid_argument("l1 average requires m >= 2");
    if (block_length < 1) throw std::invalid_argument("block length must be >= 1");
    const std::int64_t total = m * block_length;
    if (total > index_limit || start > index_limit - total + 1) {
        throw std::invalid_argument("l1 average index range overflow");
    }
    const double value = 1.0 / (constant_block_norm(block_length, 1.0) * static_cast<double>(m));
    std::vector<SparseVector::Entry> entries;
    entries.reserve(total);
    for (std::int64_t t = 0; t < total; ++t) entries.push_back({start + t, value});
    return SparseVector::from_pairs(std::move(entries));
}

struct YardstickAverage {
    SparseVector z;                    // sum of the parts
    std::vector<SparseVector> parts;   // z_1..z_n, arithmetic means across copies
    std::vector<Yardstick> copies;
};

// m successive copies of the same yardstick distribution; part i is the mean
// of the i-th vector across copies, z is the sum of the parts.
inline YardstickAverage build_yardstick_average(const YardstickSpec& spec, std::int64_t m) {
    spec.validate();
    if (m < 1) throw std::invalid_argument("yardstick average requires m >= 1");
    const std::int64_t per_copy = spec.total_support();
    if (per_copy > index_limit / m || spec.start_index > index_limit - per_copy * m + 1) {
        throw std::invalid_argument("yardstick average index range overflow");
    }
    YardstickAverage out;
    out.copies.reserve(m);
    for (std::int64_t c = 0; c < m; ++c) {
        YardstickSpec copy_spec = spec;
        copy_spec.start_index = spec.start_index + c * per_copy;
        out.copies.push_back(build_yardstick(copy_spec));
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    out.parts.reserve(spec.n);
    for (int i = 0; i < spec.n; ++i) {
        SparseVector part;
        for (const Yardstick& copy : out.copies) {
            part = add(part, copy.vectors[i].scaled(inv_m));
        }
        out.parts.push_back(std::move(part));
    }
    for (const SparseVector& part : out.parts) out.z = add(out.z, part);
    return out;
}

// Unique decomposition m = 2^i (2j - 1).
struct InterleaveIndex {
    std::int64_t m = 1;
    int i = 0;
    std::int64_t j = 1;
};

inline InterleaveIndex interleave_index(std::int64_t m) {
    if (m < 1) throw std::invalid_argument("interleave_index requires m >= 1");
    InterleaveIndex out;
    out.m = m;
    while (m % 2 == 0) {
        ++out.i;
        m /= 2;
    }
    out.j = (m + 1) / 2;
    return out;
}

struct InterleaveQuality {
    std::int64_t base_q = 2;  // base ratio for every level
};

// Consecutive yardstick families V_1, V_2, ...; block m represents
// l_inf^{n_j} with j from interleave_index(m). n_seq is treated as cyclic.
// Repeated occurrences of the same dimension get distinct distributions by
// scaling the last ratio with the occurrence count.
inline std::vector<Yardstick> build_interleaved_sequence(const std::vector<int>& n_seq,
                                                         std::int64_t count,
                                                         InterleaveQuality quality = {},
                                                         index_t start = 1) {
    if (n_seq.empty()) throw std::invalid_argument("n_seq must be nonempty");
    if (count < 1) throw std::invalid_argument("count must be >= 1");
    if (quality.base_q < 2) throw std::invalid_argument("base_q must be >= 2");
    std::vector<Yardstick> out;
    out.reserve(count);
    std::unordered_map<int, std::int64_t> occurrences;
    index_t next = start;
    for (std::int64_t m = 1; m <= count; ++m) {
        const InterleaveIndex idx = interleave_index(m);
        const int n = n_seq[static_cast<std::size_t>((idx.j - 1) % n_seq.size())];
        const std::int64_t occ = ++occurrences[n];
        YardstickSpec spec;
        spec.n = n;
        spec.q.assign(n, quality.base_q);
        spec.q.back() = quality.base_q * occ;
        spec.start_index = next;
        out.push_back(build_yardstick(spec));
        next = out.back().support.hi + 1;
    }
    return out;
}

// Element of a sum-space: disjointly supported components in successive order.
struct SumSpec {
    std::vector<SparseVector> components;

    static SumSpec of(std::vector<SparseVector> components) {
        for (const SparseVector& c : components) {
            if (c.empty()) throw std::invalid_argument("components not successive");
        }
        for (std::size_t k = 1; k < components.size(); ++k) {
            if (components[k - 1].max_index() >= components[k].min_index()) {
                throw std::invalid_argument("components not successive");
            }
        }
        SumSpec s;
        s.components = std::move(components);
        return s;
    }
};

// Norm of sum y_k in the Schlumprecht sum: the norm of sum ||y_k|| e_k.
inline double sum_norm(const SumSpec& s, const NormOptions& opts = {}) {
    std::vector<SparseVector::Entry> entries;
    entries.reserve(s.components.size());
    index_t k = 1;
    for (const SparseVector& c : s.components) {
        entries.push_back({k++, norm_value(c, opts)});
    }
    return norm_value(SparseVector::from_pairs(std::move(entries)), opts);
}

}  // namespace schlumprecht
