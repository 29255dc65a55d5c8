#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "schlumprecht/constructions.hpp"
#include "schlumprecht/norm.hpp"
#include "schlumprecht/sparse_vector.hpp"

namespace schlumprecht {

struct CheckItem {
    std::int64_t k = 0;
    std::string label;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
};

// pass is the conjunction of the per-item passes.
struct CheckReport {
    std::string name;
    bool pass = true;
    std::vector<CheckItem> items;
    std::string notes;

    void push(std::int64_t k, std::string label, double measured, double bound, bool ok) {
        items.push_back({k, std::move(label), measured, bound, ok});
        pass = pass && ok;
    }
};

namespace detail {

inline std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void require_normalized_successive(const std::vector<SparseVector>& ys,
                                          const NormOptions& opts, const char* who) {
    index_t prev_hi = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (ys[i].empty()) {
            throw std::invalid_argument(std::string(who) + ": block " + std::to_string(i + 1) +
                                        " is empty");
        }
        if (ys[i].min_index() <= prev_hi) {
            throw std::invalid_argument(std::string(who) + ": blocks not successive at position " +
                                        std::to_string(i + 1));
        }
        prev_hi = ys[i].max_index();
        const double n = norm_value(ys[i], opts);
        if (std::abs(n - 1.0) > 1e-8) {
            throw std::invalid_argument(std::string(who) + ": block " + std::to_string(i + 1) +
                                        " has norm " + fmt_g(n) + ", not 1");
        }
    }
}

// Concatenation of disjoint successive blocks scaled by a.
inline SparseVector combine(const std::vector<SparseVector>& blocks,
                            const std::vector<double>& a) {
    std::vector<SparseVector::Entry> entries;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (const auto& e : blocks[i].entries()) entries.push_back({e.index, e.value * a[i]});
    }
    return SparseVector::from_pairs(std::move(entries));
}

inline SparseVector unit_combination(const std::vector<double>& a) {
    std::vector<SparseVector::Entry> entries;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != 0.0) entries.push_back({static_cast<index_t>(i + 1), a[i]});
    }
    return SparseVector::from_pairs(std::move(entries));
}

}  // namespace detail

// Domination of the unit basis by a normalized block basis: for every
// coefficient vector a, ||sum a_i y_i|| >= ||sum a_i e_i||.
inline CheckReport check_statement1(const std::vector<SparseVector>& blocks,
                                    const std::vector<std::vector<double>>& coeffs,
                                    const NormOptions& opts = {}) {
    detail::require_normalized_successive(blocks, opts, "check_statement1");
    CheckReport rep;
    rep.name = "statement1";
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
        const std::vector<double>& a = coeffs[t];
        if (a.size() != blocks.size()) {
            throw std::invalid_argument("check_statement1: coefficient vector " +
                                        std::to_string(t + 1) + " has wrong length");
        }
        const SparseVector lhs = detail::combine(blocks, a);
        const SparseVector rhs = detail::unit_combination(a);
        const double nl = norm_value(lhs, opts);
        const double nr = norm_value(rhs, opts);
        const double ratio = nr == 0.0 ? 1.0 : nl / nr;
        rep.push(static_cast<std::int64_t>(t + 1), "ratio", ratio, 1.0, nl >= nr - 1e-10);
        min_ratio = std::min(min_ratio, ratio);
    }
    if (!coeffs.empty()) rep.notes = "min ratio " + detail::fmt_g(min_ratio);
    return rep;
}

// Split-sum excess of y at r pieces against a target eps.
inline CheckReport check_statement2(const SparseVector& y, std::size_t r, double eps,
                                    const NormOptions& opts = {}) {
    CheckReport rep;
    rep.name = "statement2";
    const double n = norm_value(y, opts);
    const double s = split_sum(y, r, opts).value;
    const double excess = s - n;
    rep.push(static_cast<std::int64_t>(r), "excess", excess, eps, excess <= eps);
    rep.notes = "split_sum " + detail::fmt_g(s) + ", norm " + detail::fmt_g(n);
    return rep;
}

struct AverageSpec {
    std::int64_t block_length = 1;
    index_t start = 1;
};

struct AverageSearchResult {
    bool found = false;
    std::int64_t m_star = 0;
    CheckReport report;
};

// Smallest m in the grid whose l1-average has split-sum excess <= eps at r.
// Every grid entry is measured; no extrapolation beyond the grid.
inline AverageSearchResult find_n_of_eps_r(double eps, std::size_t r,
                                           const std::vector<std::int64_t>& m_grid,
                                           const AverageSpec& spec = {},
                                           const NormOptions& opts = {}) {
    for (std::size_t t = 1; t < m_grid.size(); ++t) {
        if (m_grid[t] <= m_grid[t - 1]) {
            throw std::invalid_argument("find_n_of_eps_r: m grid must be increasing");
        }
    }
    AverageSearchResult res;
    res.report.name = "n_of_eps_r";
    for (std::int64_t m : m_grid) {
        const SparseVector y = build_l1_average(m, spec.block_length, spec.start);
        const double excess = split_sum(y, r, opts).value - norm_value(y, opts);
        const bool ok = excess <= eps;
        res.report.push(m, "excess", excess, eps, ok);
        if (ok && !res.found) {
            res.found = true;
            res.m_star = m;
        }
    }
    res.report.notes = res.found ? "m_star " + std::to_string(res.m_star) : "not found";
    return res;
}

// Thresholds r_k are carried as log2 values; the inversion of condition (b)
// produces numbers far beyond integer range.
struct Statement3Config {
    std::vector<double> eps;     // eps_k > 0, sum <= 1
    std::vector<double> log2_r;  // log2(r_k), strictly increasing

    static Statement3Config from_counts(std::vector<double> eps, const std::vector<std::int64_t>& r) {
        Statement3Config cfg;
        cfg.eps = std::move(eps);
        cfg.log2_r.reserve(r.size());
        for (std::int64_t v : r) {
            if (v < 1) throw std::invalid_argument("Statement3Config: r_k must be >= 1");
            cfg.log2_r.push_back(std::log2(static_cast<double>(v)));
        }
        return cfg;
    }

    void validate() const {
        if (eps.size() != log2_r.size()) {
            throw std::invalid_argument("Statement3Config: eps and r lengths differ");
        }
        double total = 0.0;
        for (double e : eps) {
            if (!(e > 0.0)) throw std::invalid_argument("Statement3Config: eps_k must be positive");
            total += e;
        }
        if (total > 1.0 + 1e-12) {
            throw std::invalid_argument("Statement3Config: sum of eps_k exceeds 1");
        }
        for (std::size_t t = 1; t < log2_r.size(); ++t) {
            if (log2_r[t] <= log2_r[t - 1]) {
                throw std::invalid_argument("Statement3Config: r_k must be strictly increasing");
            }
        }
    }
};

// log2 of f(r/3) = log2(r/3 + 1) for r given as log2(r), stable for huge r.
inline double log2_f_of_third(double log2_r) {
    return log2_r + std::log1p(3.0 * std::exp2(-log2_r)) / std::numbers::ln2 - std::log2(3.0);
}

// Smallest r with card <= eps * f(r/3), as log2(r): r >= 3 (2^(card/eps) - 1).
inline double statement3_min_log2_r(std::size_t card, double eps) {
    if (card < 1) throw std::invalid_argument("statement3_min_log2_r: card must be >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("statement3_min_log2_r: eps must be positive");
    const double c = static_cast<double>(card) / eps;
    return std::log2(3.0) + c + std::log1p(-std::exp2(-c)) / std::numbers::ln2;
}

// Conditions on a candidate block basis (y_k):
//   (a) sup over families of at most r_{k-1} pieces of sum ||E_i y_k|| <= 1 + eps_k,
//       checked exactly at r = min(r_{k-1}, card supp y_k) since the split sum
//       saturates once pieces are singletons; r_0 is taken to be 1.
//   (b) card(supp y_k) <= eps_k f(r_k / 3), checked in log2 form.
inline CheckReport check_statement3(const std::vector<SparseVector>& ys,
                                    const Statement3Config& cfg, const NormOptions& opts = {}) {
    cfg.validate();
    if (ys.size() != cfg.eps.size()) {
        throw std::invalid_argument("check_statement3: block count does not match config");
    }
    detail::require_normalized_successive(ys, opts, "check_statement3");
    CheckReport rep;
    rep.name = "statement3";
    std::string mins;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const std::int64_t k = static_cast<std::int64_t>(i + 1);
        const std::size_t card = ys[i].support_size();
        const double log2_card = std::log2(static_cast<double>(card));

        const double log2_r_prev = i == 0 ? 0.0 : cfg.log2_r[i - 1];
        std::size_t r_eff = card;
        if (log2_r_prev < log2_card) {
            r_eff = static_cast<std::size_t>(std::llround(std::exp2(log2_r_prev)));
            r_eff = std::max<std::size_t>(r_eff, 1);
        }
        const double sum = split_sum(ys[i], r_eff, opts).value;
        rep.push(k, "(a) split_sum", sum, 1.0 + cfg.eps[i], sum <= 1.0 + cfg.eps[i]);

        const double bound_b = std::log2(cfg.eps[i]) + std::log2(log2_f_of_third(cfg.log2_r[i]));
        rep.push(k, "(b) log2 card", log2_card, bound_b, log2_card <= bound_b);

        if (!mins.empty()) mins += ", ";
        mins += detail::fmt_g(statement3_min_log2_r(card, cfg.eps[i]));
    }
    rep.notes = "min log2 r per k: " + mins;
    return rep;
}

// ||sum y_i|| for a disjointly supported normalized family: exactly the
// equivalence constant of the family to the l_inf unit basis.
inline double linf_equiv_constant(const std::vector<SparseVector>& family,
                                  const NormOptions& opts = {}) {
    if (family.empty()) throw std::invalid_argument("linf_equiv_constant: empty family");
    std::vector<index_t> seen;
    for (const SparseVector& y : family) {
        if (y.empty()) throw std::invalid_argument("linf_equiv_constant: empty family vector");
        const double n = norm_value(y, opts);
        if (std::abs(n - 1.0) > 1e-8) {
            throw std::invalid_argument("linf_equiv_constant: family vector has norm " +
                                        detail::fmt_g(n) + ", not 1");
        }
        for (const auto& e : y.entries()) seen.push_back(e.index);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        throw std::invalid_argument("linf_equiv_constant: family supports overlap");
    }
    std::vector<SparseVector::Entry> entries;
    entries.reserve(seen.size());
    for (const SparseVector& y : family) {
        for (const auto& e : y.entries()) entries.push_back(e);
    }
    return norm_value(SparseVector::from_pairs(std::move(entries)), opts);
}

// e_j's, the all-ones vector, alternating and (for small n) all sign patterns,
// and geometric decays. Always part of the equivalence-constant search grid.
inline std::vector<std::vector<double>> default_coeff_grid(std::size_t n) {
    std::vector<std::vector<double>> grid;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> a(n, 0.0);
        a[j] = 1.0;
        grid.push_back(std::move(a));
    }
    grid.emplace_back(n, 1.0);
    for (std::size_t phase = 0; phase < 2; ++phase) {
        std::vector<double> a(n);
        for (std::size_t j = 0; j < n; ++j) a[j] = (j % 2 == phase) ? 1.0 : -1.0;
        grid.push_back(std::move(a));
    }
    if (n <= 6) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            std::vector<double> a(n);
            for (std::size_t j = 0; j < n; ++j) a[j] = (mask >> j) & 1 ? -1.0 : 1.0;
            grid.push_back(std::move(a));
        }
    }
    for (double ratio : {0.5, 0.75}) {
        std::vector<double> a(n);
        double v = 1.0;
        for (std::size_t j = 0; j < n; ++j, v *= ratio) a[j] = v;
        grid.push_back(std::move(a));
    }
    return grid;
}

struct EquivLowerBound {
    double c_low = 1.0;
    std::vector<double> witness;
};

// Certified lower bound on the equivalence constant between (y_k) and the unit
// basis: the largest two-sided norm ratio over the default grid plus any extra
// coefficient vectors. The true constant is a sup over all coefficients and is
// only bounded from below here.
inline EquivLowerBound basis_equiv_lower_bound(const std::vector<SparseVector>& ys,
                                               const std::vector<std::vector<double>>& coeff_grid,
                                               const NormOptions& opts = {}) {
    detail::require_normalized_successive(ys, opts, "basis_equiv_lower_bound");
    std::vector<std::vector<double>> grid = default_coeff_grid(ys.size());
    grid.insert(grid.end(), coeff_grid.begin(), coeff_grid.end());
    EquivLowerBound out;
    out.c_low = 0.0;
    for (const std::vector<double>& a : grid) {
        if (a.size() != ys.size()) {
            throw std::invalid_argument("basis_equiv_lower_bound: coefficient vector has wrong length");
        }
        if (std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; })) continue;
        const double nu = norm_value(detail::combine(ys, a), opts);
        const double nv = norm_value(detail::unit_combination(a), opts);
        const double ratio = std::max(nu / nv, nv / nu);
        if (ratio > out.c_low) {
            out.c_low = ratio;
            out.witness = a;
        }
    }
    return out;
}

// The displayed comparison || sum ||E_k x|| e_k || <= || sum E_k x || <= ||x||.
inline CheckReport check_sum_inequality(const SparseVector& x,
                                        const std::vector<IndexInterval>& intervals,
                                        const NormOptions& opts = {}) {
    index_t prev_hi = 0;
    for (const IndexInterval& e : intervals) {
        if (e.lo <= prev_hi) {
            throw std::invalid_argument("check_sum_inequality: intervals not successive");
        }
        prev_hi = e.hi;
    }
    std::vector<SparseVector::Entry> norms;
    std::vector<SparseVector::Entry> restricted;
    for (std::size_t k = 0; k < intervals.size(); ++k) {
        const SparseVector piece = restrict(x, intervals[k]);
        const double n = norm_value(piece, opts);
        if (n != 0.0) norms.push_back({static_cast<index_t>(k + 1), n});
        for (const auto& e : piece.entries()) restricted.push_back(e);
    }
    const double left = norm_value(SparseVector::from_pairs(std::move(norms)), opts);
    const double middle = norm_value(SparseVector::from_pairs(std::move(restricted)), opts);
    const double right = norm_value(x, opts);
    CheckReport rep;
    rep.name = "sum_inequality";
    rep.push(1, "norms vs restriction", left, middle, left <= middle + 1e-10);
    rep.push(2, "restriction vs whole", middle, right, middle <= right + 1e-10);
    return rep;
}

struct ProjectionFamily {
    IndexInterval interval{1, 1};
    std::vector<SparseVector> vectors;
};

// Successive intervals E_k, each carrying a disjoint family of constant blocks
// y_i. Q_k averages over each block support and rescales so Q_k(y_i) = y_i.
struct ProjectionSpec {
    std::vector<ProjectionFamily> families;

    static ProjectionSpec from_yardsticks(const std::vector<Yardstick>& ys) {
        ProjectionSpec spec;
        spec.families.reserve(ys.size());
        for (const Yardstick& y : ys) spec.families.push_back({y.support, y.vectors});
        return spec;
    }

    void validate() const {
        index_t prev_hi = 0;
        for (const ProjectionFamily& fam : families) {
            if (fam.interval.lo <= prev_hi) {
                throw std::invalid_argument("ProjectionSpec: intervals not successive");
            }
            prev_hi = fam.interval.hi;
            std::vector<index_t> seen;
            for (const SparseVector& y : fam.vectors) {
                if (y.empty()) throw std::invalid_argument("ProjectionSpec: empty family vector");
                if (y.min_index() < fam.interval.lo || y.max_index() > fam.interval.hi) {
                    throw std::invalid_argument("ProjectionSpec: family support escapes its interval");
                }
                const double c = y.entries().front().value;
                for (const auto& e : y.entries()) {
                    if (e.value != c) {
                        throw std::invalid_argument(
                            "ProjectionSpec: family vector is not constant on its support");
                    }
                    seen.push_back(e.index);
                }
            }
            std::sort(seen.begin(), seen.end());
            if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
                throw std::invalid_argument("ProjectionSpec: family supports overlap");
            }
        }
    }
};

struct ProjectionResult {
    SparseVector px;
    double norm_x = 0.0;
    double norm_px = 0.0;
    double ratio = 0.0;  // ||Px|| / ||x||, 0 for x = 0
};

// P x = sum_k Q_k(E_k x) with Q_k(v) = sum_i lambda_i(v) y_i, where lambda_i
// reads the mean of v over supp(y_i) divided by the block height. lambda_i is
// biorthogonal to the family, so P fixes the span of all families.
inline ProjectionResult apply_projection(const ProjectionSpec& spec, const SparseVector& x,
                                         const NormOptions& opts = {}) {
    spec.validate();
    std::vector<SparseVector::Entry> out;
    for (const ProjectionFamily& fam : spec.families) {
        const SparseVector v = restrict(x, fam.interval);
        if (v.empty()) continue;
        for (const SparseVector& y : fam.vectors) {
            double sum = 0.0;
            for (const auto& e : y.entries()) sum += v.value_at(e.index);
            const double lambda =
                sum / static_cast<double>(y.support_size()) / y.entries().front().value;
            if (lambda == 0.0) continue;
            for (const auto& e : y.entries()) out.push_back({e.index, e.value * lambda});
        }
    }
    ProjectionResult res;
    res.px = SparseVector::from_pairs(std::move(out));
    res.norm_x = norm_value(x, opts);
    res.norm_px = norm_value(res.px, opts);
    res.ratio = res.norm_x == 0.0 ? 0.0 : res.norm_px / res.norm_x;
    return res;
}

}  // namespace schlumprecht
