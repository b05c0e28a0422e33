#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fqse/reference_table.hpp"
#include "fqse/solver.hpp"

using namespace fqse;

namespace {

CycleParams widths(double la, double lb, double a1 = 2.0, double a2 = 2.0) {
    CycleParams p;
    p.width_a = la;
    p.width_b = lb;
    p.alpha_1 = a1;
    p.alpha_2 = a2;
    return p;
}

bool same_report(const CycleReport& a, const CycleReport& b) {
    return a.q_ab == b.q_ab && a.q_bc == b.q_bc && a.q_cd == b.q_cd && a.q_da == b.q_da &&
           a.work == b.work && a.q_r == b.q_r && a.q_h == b.q_h &&
           (a.efficiency == b.efficiency || (std::isnan(a.efficiency) && std::isnan(b.efficiency))) &&
           a.regime == b.regime;
}

}  // namespace

// ---------------------------------------------------------------- find_root

TEST(FindRoot, StaysInsideAndShrinks) {
    std::vector<double> seen;
    auto f = [&](double x) {
        seen.push_back(x);
        return x * x * x - 2 * x - 5;
    };
    const auto r = find_root(f, 2.0, 3.0, 1e-13);
    EXPECT_NEAR(r.x, 2.0945514815423265, 1e-12);
    EXPECT_LE(std::abs(r.fx), 1e-13);
    for (double x : seen) {
        EXPECT_GE(x, 2.0);
        EXPECT_LE(x, 3.0);
    }
    EXPECT_LT(r.evaluations, 40);
}

TEST(FindRoot, ConvexFunctionDoesNotStall) {
    // plain false position keeps one endpoint fixed here and crawls
    const auto r = find_root([](double x) { return std::exp(x) - 1e3; }, 0.0, 20.0, 1e-9);
    EXPECT_NEAR(r.x, std::log(1e3), 1e-11);
    EXPECT_LT(r.evaluations, 80);
}

TEST(FindRoot, EndpointRootAndNoSignChange) {
    EXPECT_EQ(find_root([](double x) { return x - 1.0; }, 1.0, 2.0, 1e-12).x, 1.0);
    try {
        find_root([](double x) { return x * x + 1.0; }, -1.0, 2.0, 1e-12);
        FAIL();
    } catch (const no_root& e) {
        EXPECT_EQ(e.residual_lo(), 2.0);
        EXPECT_EQ(e.residual_hi(), 5.0);
    }
}

TEST(FindRoot, UnreachableToleranceIsReported) {
    // jump discontinuity: a sign change but no point with |f| <= tol
    EXPECT_THROW(find_root([](double x) { return x < 0.3 ? -1.0 : 1.0; }, 0.0, 1.0, 1e-3),
                 std::runtime_error);
}

// ---------------------------------------------------------------- sweep

TEST(Sweep, SmallGridMatchesDirectEvaluation) {
    const CycleParams base = widths(1.0, 1.0);
    const SweepAxis ax{Parameter::alpha_1, 1.3, 1.9, 2};
    const SweepAxis ay{Parameter::alpha_2, 1.4, 2.0, 2};
    const SweepGrid grid = sweep(base, ax, ay);
    ASSERT_EQ(grid.nodes.size(), 4u);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            const SweepNode& node = grid.at(i, j);
            ASSERT_TRUE(node.ok());
            EXPECT_EQ(node.x, ax.value(i));
            EXPECT_EQ(node.y, ay.value(j));
            CycleParams p = base;
            p.alpha_1 = node.x;
            p.alpha_2 = node.y;
            EXPECT_TRUE(same_report(*node.report, evaluate(p)));
        }
}

TEST(Sweep, ParallelAndSerialAgree) {
    const SweepAxis ax{Parameter::alpha_1, 1.05, 2.0, 17};
    const SweepAxis ay{Parameter::alpha_2, 1.05, 2.0, 13};
    const SweepGrid serial = sweep(widths(1.0, 1.5), ax, ay, kDefaultRelTol, 1);
    const SweepGrid parallel = sweep(widths(1.0, 1.5), ax, ay, kDefaultRelTol, 8);
    ASSERT_EQ(serial.nodes.size(), parallel.nodes.size());
    for (std::size_t k = 0; k < serial.nodes.size(); ++k) {
        EXPECT_EQ(serial.nodes[k].x, parallel.nodes[k].x);
        EXPECT_EQ(serial.nodes[k].y, parallel.nodes[k].y);
        EXPECT_TRUE(same_report(*serial.nodes[k].report, *parallel.nodes[k].report));
    }
}

TEST(Sweep, AxisEndpointsAreExact) {
    const SweepAxis ax{Parameter::alpha_1, 1.01, 2.0, 100};
    EXPECT_EQ(ax.value(0), 1.01);
    EXPECT_EQ(ax.value(99), 2.0);
}

TEST(Sweep, WidthSignChangeMatchesStandardColumn) {
    const SweepGrid grid = sweep(widths(1, 1), {Parameter::width_a, 0.6, 1.0, 3},
                                 {Parameter::width_b, 0.9, 1.3, 3});
    EXPECT_LT(grid.at(0, 0).report->q_r, 0.0);  // (0.6, 0.9)
    EXPECT_GT(grid.at(2, 2).report->q_r, 0.0);  // (1.0, 1.3)
}

TEST(Sweep, FractionalSquareHasRegenerationLocus) {
    // L_A = L_B = 1; Q_R changes sign along alpha_2 at fixed alpha_1 < alpha_2
    const SweepGrid grid = sweep(widths(1, 1), {Parameter::alpha_1, 1.02, 2.0, 50},
                                 {Parameter::alpha_2, 1.02, 2.0, 50});
    int sign_changes = 0;
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t j = i + 1; j + 1 < 50; ++j) {
            const double a = grid.at(i, j).report->q_r, b = grid.at(i, j + 1).report->q_r;
            if ((a < 0) != (b < 0)) ++sign_changes;
        }
    EXPECT_GT(sign_changes, 5);
}

TEST(Sweep, ErrorNodesDoNotAbort) {
    CycleParams base = widths(1.0, 1.0);
    base.model = kFullPeriodModel;
    base.t_hot = 1e3;
    base.t_cold = 5e2;
    const SweepGrid grid =
        sweep(base, {Parameter::width_a, 1.0, 1e5, 2}, {Parameter::width_b, 1.0, 2.0, 2});
    ASSERT_EQ(grid.nodes.size(), 4u);
    EXPECT_TRUE(grid.at(0, 0).ok());
    EXPECT_FALSE(grid.at(1, 0).ok());
    EXPECT_NE(grid.at(1, 0).error.find("10^6"), std::string::npos);
}

TEST(Sweep, RejectsBadAxes) {
    const CycleParams base = widths(1, 1);
    EXPECT_THROW(sweep(base, {Parameter::alpha_1, 1.1, 2.0, 3}, {Parameter::alpha_1, 1.1, 2.0, 3}),
                 std::invalid_argument);
    EXPECT_THROW(sweep(base, {Parameter::alpha_1, 1.0, 2.0, 3}, {Parameter::alpha_2, 1.1, 2.0, 3}),
                 std::invalid_argument);
    EXPECT_THROW(sweep(base, {Parameter::alpha_1, 1.1, 2.0, 1}, {Parameter::alpha_2, 1.1, 2.0, 3}),
                 std::invalid_argument);
    EXPECT_THROW(sweep(base, {Parameter::width_a, 2.0, 1.0, 3}, {Parameter::alpha_2, 1.1, 2.0, 3}),
                 std::invalid_argument);
}

// ---------------------------------------------------------------- solve

TEST(Solve, TabulatedPairs) {
    const auto a = solve_alpha1(widths(1.0, 1.4), 1.579, 1.45, 2.0);
    EXPECT_NEAR(a.params.alpha_1, 1.502, 5e-3);
    EXPECT_LE(a.residual, kDefaultRootTol);

    const auto b = solve_alpha1(widths(1.2, 1.6), 1.678, 1.55, 2.0);
    EXPECT_NEAR(b.params.alpha_1, 1.565, 5e-3);
    EXPECT_LE(b.residual, kDefaultRootTol);
}

TEST(Solve, RootCertificate) {
    for (const auto& row : kRegenerationTable) {
        const auto base = widths(row.width_a, row.width_b, 2.0, row.alpha_2);
        // the locus can cross alpha_1 twice, ~0.02 apart at (0.6, 0.9)
        const auto found = find_brackets(base, Parameter::alpha_1, 1.0, 2.0, 1024);
        if (row.width_a == 0.6 && row.width_b == 1.0) {
            // tabulated alpha_2 lies just short of the fold: Q_R dips to ~3.7e-4 without crossing
            EXPECT_TRUE(found.empty());
            EXPECT_GT(evaluate(with_parameter(base, Parameter::alpha_1, 1.284)).q_r, 0.0);
            EXPECT_LT(evaluate(with_parameter(base, Parameter::alpha_1, 1.284)).q_r, 5e-4);
            continue;
        }
        ASSERT_FALSE(found.empty()) << "L_A=" << row.width_a << " L_B=" << row.width_b;
        const auto nearest = std::min_element(found.begin(), found.end(), [&](const Bracket& x, const Bracket& y) {
            return std::abs(0.5 * (x.lo + x.hi) - row.alpha_1) < std::abs(0.5 * (y.lo + y.hi) - row.alpha_1);
        });
        const auto pt = solve_alpha1(base, row.alpha_2, nearest->lo, nearest->hi);
        EXPECT_LE(std::abs(evaluate(pt.params).q_r), kDefaultRootTol);
        EXPECT_EQ(pt.params.alpha_2, row.alpha_2);
        EXPECT_NEAR(pt.params.alpha_1, row.alpha_1, 5e-3);
    }
}

TEST(Solve, NoSignChange) {
    // both endpoints verified positive beforehand: Q_R(1.95) ~ 0.10, Q_R(2) ~ 0.11
    try {
        solve_alpha1(widths(1.0, 1.4), 1.579, 1.95, 2.0);
        FAIL() << "expected no_root";
    } catch (const no_root& e) {
        EXPECT_GT(e.residual_lo(), 0.0);
        EXPECT_GT(e.residual_hi(), 0.0);
    }
}

TEST(Solve, BracketIsClippedToDomain) {
    const auto pt = solve(widths(1.0, 1.4, 2.0, 1.579), Parameter::alpha_1, 1.45, 7.0);
    EXPECT_LE(pt.params.alpha_1, 2.0);
    EXPECT_NEAR(pt.params.alpha_1, 1.5015, 1e-3);
}

TEST(Solve, WidthRoot) {
    // standard well, solve L_A at L_B = 1.3
    const auto pt = solve(widths(1.0, 1.3), Parameter::width_a, 0.8, 1.0);
    EXPECT_LE(pt.residual, kDefaultRootTol);
    EXPECT_GT(pt.params.width_a, 0.85);
    EXPECT_LT(pt.params.width_a, 0.9);
}

TEST(FindBrackets, ReturnsBothBranches) {
    const auto found = find_brackets(widths(1.0, 1.4, 2.0, 1.8), Parameter::alpha_1, 1.0, 2.0);
    ASSERT_EQ(found.size(), 2u);
    EXPECT_LT(found[0].hi, found[1].lo);
    for (const auto& b : found) {
        EXPECT_GE(b.lo, 1.0 + 1e-6);
        EXPECT_LE(b.hi, 2.0);
        EXPECT_NE(b.q_lo < 0, b.q_hi < 0);
    }
}

TEST(FindBrackets, ExactZeroIsPointBracket) {
    // alpha_1 == alpha_2 with equal widths collapses the cycle, Q_R == 0
    const auto found = find_brackets(widths(1.0, 1.0, 2.0, 2.0), Parameter::alpha_1, 1.0, 2.0, 64);
    ASSERT_FALSE(found.empty());
    EXPECT_EQ(found.back().lo, 2.0);
    EXPECT_EQ(found.back().hi, 2.0);
}

// ---------------------------------------------------------------- trace

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
    return v;
}

}  // namespace

TEST(Trace, CurveThroughTabulatedPair) {
    const auto grid = linspace(1.45, 1.75, 13);
    const auto curve = trace_curve(widths(1.0, 1.4), Parameter::alpha_2, Parameter::alpha_1, grid,
                                   {1.0, 2.0});
    ASSERT_EQ(curve.size(), grid.size());
    double prev = 0.0;
    int found = 0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        EXPECT_EQ(curve[i].sweep_value, grid[i]);
        if (!curve[i].point) {
            EXPECT_LT(grid[i], 1.58);  // the locus starts at a fold near alpha_2 ~ 1.57
            continue;
        }
        const double a1 = curve[i].point->params.alpha_1;
        EXPECT_GT(a1, prev);
        EXPECT_LE(std::abs(evaluate(curve[i].point->params).q_r), kDefaultRootTol);
        prev = a1;
        ++found;
    }
    EXPECT_GE(found, 7);

    const auto at_table = trace_curve(widths(1.0, 1.4), Parameter::alpha_2, Parameter::alpha_1,
                                      linspace(1.579, 1.779, 5), {1.0, 2.0});
    ASSERT_TRUE(at_table.front().point);
    EXPECT_NEAR(at_table.front().point->params.alpha_1, 1.502, 5e-3);
}

TEST(Trace, SingleNodeReducesToSolve) {
    const double grid[] = {1.579};
    const auto curve = trace_curve(widths(1.0, 1.4), Parameter::alpha_2, Parameter::alpha_1, grid,
                                   {1.45, 2.0});
    ASSERT_EQ(curve.size(), 1u);
    ASSERT_TRUE(curve[0].point);
    const auto direct = solve_alpha1(widths(1.0, 1.4), 1.579, 1.45, 2.0);
    EXPECT_NEAR(curve[0].point->params.alpha_1, direct.params.alpha_1, 1e-6);
    EXPECT_LE(curve[0].point->residual, kDefaultRootTol);
}

// The wider pair's locus only opens at larger alpha_2 and starts at larger alpha_1.
// At a shared alpha_2 its upper branch sits below the narrower pair's.
TEST(Trace, WiderWellsShiftLocusOutward) {
    const auto grid = linspace(1.5, 2.0, 51);
    const auto low = trace_curve(widths(1.0, 1.4), Parameter::alpha_2, Parameter::alpha_1, grid, {1.0, 2.0});
    const auto high = trace_curve(widths(1.4, 1.8), Parameter::alpha_2, Parameter::alpha_1, grid, {1.0, 2.0});
    const auto first = [](const std::vector<TracePoint>& c) {
        return std::find_if(c.begin(), c.end(), [](const TracePoint& t) { return t.point.has_value(); });
    };
    const auto lo_start = first(low), hi_start = first(high);
    ASSERT_NE(lo_start, low.end());
    ASSERT_NE(hi_start, high.end());
    EXPECT_GT(hi_start->sweep_value, lo_start->sweep_value + 0.1);
    EXPECT_GT(hi_start->point->params.alpha_1, lo_start->point->params.alpha_1 + 0.1);
    ASSERT_TRUE(low.back().point && high.back().point);
    EXPECT_LT(high.back().point->params.alpha_1, low.back().point->params.alpha_1);
}

TEST(Trace, SeedSelectsLowerBranch) {
    TraceOptions opts;
    opts.seed = 1.0;
    const auto curve = trace_curve(widths(1.0, 1.4), Parameter::alpha_2, Parameter::alpha_1,
                                   linspace(1.7, 2.0, 4), {1.0, 2.0}, kDefaultRootTol, opts);
    double prev = 3.0;
    for (const auto& tp : curve) {
        ASSERT_TRUE(tp.point);
        EXPECT_LT(tp.point->params.alpha_1, 1.35);
        EXPECT_LT(tp.point->params.alpha_1, prev);  // lower branch falls with alpha_2
        prev = tp.point->params.alpha_1;
    }
}

TEST(Trace, WidthLocusAgreesWithStandardColumnSigns) {
    const auto grid = linspace(1.1, 1.8, 8);
    const auto curve = trace_curve(widths(1.0, 1.0), Parameter::width_b, Parameter::width_a, grid,
                                   {0.5, 1.05});
    for (const auto& row : kRegenerationTable) {
        for (const auto& tp : curve) {
            if (std::abs(tp.sweep_value - row.width_b) > 1e-9) continue;
            ASSERT_TRUE(tp.point);
            const double root = tp.point->params.width_a;
            // Q_R < 0 below the locus in L_A, > 0 above it
            EXPECT_EQ(row.q_r_standard > 0, row.width_a > root) << "L_B=" << row.width_b;
        }
    }
}

TEST(Trace, AllGapsIsNotAnError) {
    const auto curve = trace_curve(widths(1.0, 1.4), Parameter::alpha_2, Parameter::alpha_1,
                                   linspace(1.3, 1.4, 3), {1.0, 2.0});
    EXPECT_EQ(curve.size(), 3u);
    EXPECT_TRUE(all_gaps(curve));
    for (const auto& tp : curve) EXPECT_FALSE(tp.note.empty());
}

TEST(Trace, RejectsBadGrid) {
    const double flat[] = {1.6, 1.6};
    const double zigzag[] = {1.6, 1.7, 1.65};
    EXPECT_THROW(trace_curve(widths(1, 1.4), Parameter::alpha_2, Parameter::alpha_1, flat, {1, 2}),
                 std::invalid_argument);
    EXPECT_THROW(trace_curve(widths(1, 1.4), Parameter::alpha_2, Parameter::alpha_1, zigzag, {1, 2}),
                 std::invalid_argument);
    const double ok[] = {1.6};
    EXPECT_THROW(trace_curve(widths(1, 1.4), Parameter::alpha_1, Parameter::alpha_1, ok, {1, 2}),
                 std::invalid_argument);
}
