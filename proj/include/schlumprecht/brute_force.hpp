#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "schlumprecht/norm.hpp"
#include "schlumprecht/sparse_vector.hpp"

namespace schlumprecht {

namespace detail {

// Literal norm recursion over ARBITRARY successive subset families, not just
// interval tilings. Families with an empty piece are dominated (same sum,
// larger f(r)), and families with a single nonempty piece are dominated by the
// value itself (f(2) > 1), so restricting to >= 2 nonempty pieces leaves the
// fixed point unchanged and makes the recursion well founded.
class BruteForce {
public:
    double eval(const std::vector<double>& vals) {
        if (vals.empty()) return 0.0;
        if (vals.size() == 1) return std::abs(vals[0]);
        auto it = memo_.find(vals);
        if (it != memo_.end()) return it->second;

        double best = 0.0;
        for (double v : vals) best = std::max(best, std::abs(v));

        std::vector<std::vector<double>> pieces;
        enumerate(vals, 0, pieces, best);

        memo_.emplace(vals, best);
        return best;
    }

private:
    // Each position is skipped, appended to the open piece, or opens a new
    // piece (closing the previous one). This walks every successive family of
    // nonempty subsets exactly once.
    void enumerate(const std::vector<double>& vals, std::size_t pos,
                   std::vector<std::vector<double>>& pieces, double& best) {
        if (pos == vals.size()) {
            if (pieces.size() >= 2) {
                double sum = 0.0;
                for (const auto& piece : pieces) sum += eval(piece);
                best = std::max(best, sum / f_of(pieces.size()));
            }
            return;
        }
        enumerate(vals, pos + 1, pieces, best);  // skip
        if (!pieces.empty()) {
            pieces.back().push_back(vals[pos]);
            enumerate(vals, pos + 1, pieces, best);
            pieces.back().pop_back();
        }
        pieces.push_back({vals[pos]});
        enumerate(vals, pos + 1, pieces, best);
        pieces.pop_back();
    }

    std::map<std::vector<double>, double> memo_;
};

}  // namespace detail

// Exhaustive evaluation of the norm definition, used as the anti-drift oracle
// for the interval-tiling reduction in the DP. Exponential; hard support guard.
inline double brute_force_norm(const SparseVector& x) {
    if (x.support_size() > 6) throw oracle_limit_error("oracle limit exceeded");
    if (x.empty()) return 0.0;
    std::vector<double> vals;
    vals.reserve(x.support_size());
    for (const auto& e : x.entries()) vals.push_back(e.value);
    detail::BruteForce bf;
    return bf.eval(vals);
}

}  // namespace schlumprecht
