#include <catch2/catch_amalgamated.hpp>

#include "schlumprecht/analysis.hpp"

using namespace schlumprecht;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<SparseVector> unit_blocks(int n) {
    std::vector<SparseVector> blocks;
    for (int i = 1; i <= n; ++i) blocks.push_back(SparseVector::single(i, 1.0));
    return blocks;
}

SparseVector normalized(const SparseVector& x) { return x.scaled(1.0 / norm_value(x)); }

}  // namespace

TEST_CASE("statement1 domination on block bases", "[analysis]") {
    const std::vector<SparseVector> blocks = {build_constant_block(2, 1, true),
                                              build_constant_block(3, 3, true),
                                              build_constant_block(1, 6, true)};
    const CheckReport rep = check_statement1(
        blocks, {{1.0, 1.0, 1.0}, {1.0, -1.0, 1.0}, {0.3, -0.7, 0.1}, {1.0, 0.0, 0.0}});
    CHECK(rep.pass);
    REQUIRE(rep.items.size() == 4);
    for (const CheckItem& it : rep.items) CHECK(it.measured >= 1.0 - 1e-10);

    const CheckReport trivial = check_statement1(unit_blocks(3), {{0.5, -1.0, 0.25}});
    CHECK(trivial.pass);
    CHECK_THAT(trivial.items[0].measured, WithinAbs(1.0, 1e-12));
}

TEST_CASE("statement1 input validation", "[analysis]") {
    const std::vector<SparseVector> bad_order = {SparseVector::single(2, 1.0),
                                                 SparseVector::single(1, 1.0)};
    CHECK_THROWS_AS(check_statement1(bad_order, {{1.0, 1.0}}), std::invalid_argument);

    const std::vector<SparseVector> not_normalized = {SparseVector::single(1, 0.5)};
    CHECK_THROWS_AS(check_statement1(not_normalized, {{1.0}}), std::invalid_argument);

    CHECK_THROWS_AS(check_statement1(unit_blocks(2), {{1.0}}), std::invalid_argument);
}

TEST_CASE("statement2 excess check", "[analysis]") {
    const SparseVector y = build_l1_average(2, 1, 1);
    const CheckReport tight = check_statement2(y, 2, 0.37);
    CHECK(tight.pass);
    CHECK_THAT(tight.items[0].measured, WithinAbs(0.36907024642854247, 1e-12));

    const CheckReport loose = check_statement2(y, 2, 0.36);
    CHECK_FALSE(loose.pass);
}

TEST_CASE("average search over the m grid", "[analysis]") {
    const AverageSearchResult hit = find_n_of_eps_r(0.1, 2, {2, 4, 8, 16, 32});
    CHECK(hit.found);
    CHECK(hit.m_star == 16);
    CHECK(hit.report.items.size() == 5);

    const AverageSearchResult miss = find_n_of_eps_r(0.01, 2, {2, 4, 8, 16, 32});
    CHECK_FALSE(miss.found);
    CHECK(miss.m_star == 0);
}

TEST_CASE("statement3 configuration validation", "[analysis]") {
    Statement3Config bad_eps;
    bad_eps.eps = {0.8, 0.8};
    bad_eps.log2_r = {2.0, 50.0};
    CHECK_THROWS_AS(bad_eps.validate(), std::invalid_argument);

    Statement3Config bad_r;
    bad_r.eps = {0.25, 0.25};
    bad_r.log2_r = {10.0, 10.0};
    CHECK_THROWS_AS(bad_r.validate(), std::invalid_argument);

    Statement3Config mismatch;
    mismatch.eps = {0.25};
    mismatch.log2_r = {10.0, 20.0};
    CHECK_THROWS_AS(mismatch.validate(), std::invalid_argument);
}

TEST_CASE("statement3 thresholds", "[analysis]") {
    CHECK_THAT(statement3_min_log2_r(12, 0.25), WithinAbs(49.584962500721147, 1e-12));
    CHECK_THAT(log2_f_of_third(std::log2(9.0)), WithinAbs(2.0, 1e-12));
    const Statement3Config cfg = Statement3Config::from_counts({0.5, 0.5}, {10, 1024});
    CHECK_THAT(cfg.log2_r[0], WithinAbs(std::log2(10.0), 1e-15));
    CHECK_THAT(cfg.log2_r[1], WithinAbs(10.0, 1e-15));
}

TEST_CASE("statement3 chain verdicts", "[analysis]") {
    Statement3Config single;
    single.eps = {1.0};
    single.log2_r = {10.0};
    const CheckReport pass_rep =
        check_statement3({SparseVector::single(1, 1.0)}, single, {});
    CHECK(pass_rep.pass);
    REQUIRE(pass_rep.items.size() == 2);

    Statement3Config tiny_r = single;
    tiny_r.log2_r = {0.5};
    CHECK_FALSE(check_statement3({SparseVector::single(1, 1.0)}, tiny_r, {}).pass);

    // A short average fails both the split bound at r_1 = 10 pieces and the
    // cardinality bound at r_2 = 2^20.
    std::vector<SparseVector> ys;
    ys.push_back(SparseVector::single(1, 1.0));
    ys.push_back(normalized(build_l1_average(64, 1, 2)));
    Statement3Config short_avg;
    short_avg.eps = {0.5, 0.5};
    short_avg.log2_r = {std::log2(10.0), 20.0};
    const CheckReport fail_rep = check_statement3(ys, short_avg, {});
    CHECK_FALSE(fail_rep.pass);
    REQUIRE(fail_rep.items.size() == 4);
    CHECK_FALSE(fail_rep.items[2].pass);
    CHECK_FALSE(fail_rep.items[3].pass);
}

TEST_CASE("linf equivalence constant of disjoint families", "[analysis]") {
    const std::vector<SparseVector> units = unit_blocks(2);
    CHECK_THAT(linf_equiv_constant(units, {}), WithinAbs(1.2618595071429151, 1e-15));

    const std::vector<SparseVector> overlapping = {
        SparseVector::from_pairs({{1, 1.0}, {2, 1.0}}).scaled(f_of(2) / 2.0),
        SparseVector::from_pairs({{2, 1.0}, {3, 1.0}}).scaled(f_of(2) / 2.0)};
    CHECK_THROWS_AS(linf_equiv_constant(overlapping, {}), std::invalid_argument);

    const std::vector<SparseVector> not_normalized = {SparseVector::single(1, 2.0)};
    CHECK_THROWS_AS(linf_equiv_constant(not_normalized, {}), std::invalid_argument);
}

TEST_CASE("coefficient grid and equivalence lower bound", "[analysis]") {
    const auto grid = default_coeff_grid(2);
    CHECK(grid.size() >= 5);
    bool has_all_ones = false;
    for (const auto& a : grid) {
        REQUIRE(a.size() == 2);
        if (a[0] == 1.0 && a[1] == 1.0) has_all_ones = true;
    }
    CHECK(has_all_ones);

    const std::vector<SparseVector> blocks = {build_constant_block(2, 1, true),
                                              build_constant_block(3, 3, true)};
    const EquivLowerBound lb = basis_equiv_lower_bound(blocks, {{2.0, -1.0}});
    CHECK(lb.c_low >= 1.0 - 1e-12);
    REQUIRE(lb.witness.size() == 2);

    const Yardstick ys = build_yardstick({2, {2, 2}, 1});
    CHECK_THROWS_AS(basis_equiv_lower_bound(ys.vectors, {}), std::invalid_argument);
    CHECK_THROWS_AS(basis_equiv_lower_bound(blocks, {{1.0}}), std::invalid_argument);

    const EquivLowerBound self = basis_equiv_lower_bound(unit_blocks(2), {});
    CHECK_THAT(self.c_low, WithinAbs(1.0, 1e-12));
}

TEST_CASE("interval sum inequality on a fixed example", "[analysis]") {
    const SparseVector x = SparseVector::from_pairs({{1, 1.0}, {2, 1.0}, {3, 1.0}});
    const CheckReport rep = check_sum_inequality(x, {{1, 1}, {2, 3}});
    CHECK(rep.pass);
    REQUIRE(rep.items.size() == 2);
}

TEST_CASE("projection fixes the family span", "[analysis]") {
    const Yardstick ys = build_yardstick({2, {2, 2}, 1});
    const ProjectionSpec spec = ProjectionSpec::from_yardsticks({ys});

    const SparseVector y1 = ys.vectors[0];
    const ProjectionResult fixed = apply_projection(spec, y1);
    CHECK(fixed.px.entries() == y1.entries());
    CHECK_THAT(fixed.ratio, WithinAbs(1.0, 1e-12));

    const ProjectionResult again = apply_projection(spec, fixed.px);
    CHECK(again.px.entries() == fixed.px.entries());

    const ProjectionResult off = apply_projection(spec, SparseVector::single(1, 1.0));
    CHECK_THAT(off.norm_px, WithinAbs(1.0 / f_of(2), 1e-12));
    CHECK_THAT(off.ratio, WithinAbs(1.0 / f_of(2), 1e-12));

    const ProjectionResult zero = apply_projection(spec, SparseVector{});
    CHECK(zero.px.empty());
    CHECK(zero.ratio == 0.0);
}

TEST_CASE("projection spec validation", "[analysis]") {
    const Yardstick a = build_yardstick({2, {2, 2}, 1});
    const Yardstick b = build_yardstick({2, {2, 2}, 4});
    CHECK_THROWS_WITH(ProjectionSpec::from_yardsticks({a, b}).validate(),
                      "ProjectionSpec: intervals not successive");
}
