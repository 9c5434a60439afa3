#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sact/verify.hpp"

using namespace sact;
using std::numbers::pi;

TEST(Oracle, ConfigValidation) {
    OracleConfig c;
    c.quadrature_refinement = 1;
    EXPECT_THROW(c.validate(), InvalidArgument);
    EXPECT_NO_THROW(OracleConfig{}.validate());
}

TEST(Oracle, ZeroAndOutOfRange) {
    const auto g = Generator::bspline_tensor(1, 1);
    const IndexSet e(0, 2, 0, 2);
    const CoefficientField zero(e, std::vector<double>(e.size(), 0.0));
    const auto d = DirectionVector::from_angle(0.7);
    EXPECT_EQ(line_integral_oracle(g, zero, d, 0.5), 0.0);
    const auto c = synthesize(e, 42);
    const double r = std::numbers::sqrt2 * field_support(g, e).max_abs();
    EXPECT_EQ(line_integral_oracle(g, c, d, r + 0.01), 0.0);
    EXPECT_EQ(line_integral_oracle(g, c, d, -r - 0.01), 0.0);
}

TEST(Oracle, SingleShiftMatchesRadon) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> th(0, 2 * pi), tt(-3, 5);
    for (const auto& g : {Generator::bspline_tensor(2, 2), Generator::vanishing_pd(), Generator::counterexample()}) {
        const IndexSet e = IndexSet::from_points({{1, 1}});
        const CoefficientField c(e, {1.0});
        for (int i = 0; i < 20; ++i) {
            const auto d = DirectionVector::from_angle(th(rng));
            const double t = tt(rng);
            EXPECT_NEAR(line_integral_oracle(g, c, d, t), radon_shifted_generator(g, d, {1, 1}, t), 1e-6);
        }
    }
}

TEST(Oracle, AgreesWithLinearitySamples) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> th(0, 2 * pi), uu(0, 1);
    const std::vector<std::pair<Generator, SupportBox>> cases{{Generator::bspline_tensor(2, 2), {0, 3, 0, 3}},
                                                              {Generator::bspline_tensor(1, 1), {0, 2, 0, 2}},
                                                              {Generator::vanishing_pd(), {0, 2, 0, 2}}};
    for (const auto& [g, box] : cases) {
        const IndexSet e = build_index_set(g.support(), box);
        for (int i = 0; i < 50; ++i) {
            const auto c = synthesize(e, 100 + i);
            const auto d = DirectionVector::from_angle(th(rng));
            const Interval iv = profile_interval(g, d, e);
            const double t = iv.lo + uu(rng) * iv.length();
            EXPECT_NEAR(radon_field(g, d, c, t), line_integral_oracle(g, c, d, t), 1e-6) << to_string(g.kind());
        }
    }
}

TEST(Oracle, MonotoneRefinement) {
    const auto g = Generator::bspline_tensor(2, 2);
    const IndexSet e = build_index_set(g.support(), {0, 2, 0, 2});
    const auto c = synthesize(e, 42);
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> th(0, 2 * pi), tt(-4, 6);
    OracleConfig fine;
    fine.quadrature_refinement = 4;
    for (int i = 0; i < 20; ++i) {
        const auto d = DirectionVector::from_angle(th(rng));
        const double t = tt(rng);
        EXPECT_LT(std::abs(line_integral_oracle(g, c, d, t) - line_integral_oracle(g, c, d, t, fine)), 1e-9);
    }
}

TEST(DenseIndependence, Cases) {
    const IndexSet e(0, 1, 0, 1);
    EXPECT_LE(dense_independence_test(Generator::counterexample(), DirectionVector::from_angle(pi / 4), e, 1e-3), 1e-8);
    EXPECT_LE(dense_independence_test(Generator::bspline_tensor(1, 1), DirectionVector::from_angle(pi / 2), e, 1e-3),
              1e-8);
    const auto g = Generator::bspline_tensor(2, 2);
    const auto d = DirectionVector::from_angle(pi / 6);
    const double gram = std::sqrt(gram_matrix(g, d, e).lambda_min);
    EXPECT_NEAR(dense_independence_test(g, d, e, 1e-3), gram, 0.05 * gram);
    EXPECT_THROW(dense_independence_test(g, d, e, 0.0), InvalidArgument);
}

TEST(DenseIndependence, AgreesWithEligibility) {
    const IndexSet e(0, 1, 0, 1);
    const auto fb = forbidden_angles(e);
    for (const auto& g : {Generator::bspline_tensor(1, 1), Generator::bspline_tensor(2, 2), Generator::vanishing_pd(),
                          Generator::counterexample()})
        for (int i = 0; i < 36; ++i) {
            const auto d = DirectionVector::from_angle(2 * pi * i / 36);
            const bool eligible = check_eligibility(g, d, fb).eligible;
            const double sigma = dense_independence_test(g, d, e, 1e-3);
            EXPECT_EQ(eligible, sigma > 1e-6) << to_string(g.kind()) << " theta=" << d.theta << " sigma=" << sigma;
        }
}

TEST(SliceCheck, Cases) {
    EXPECT_LE(slice_transform_check(Generator::bspline_tensor(2, 2), DirectionVector::from_angle(0), 10, 201), 1e-4);
    const auto c = Generator::counterexample();
    const auto d = DirectionVector::from_angle(pi / 4);
    EXPECT_LE(slice_transform_check(c, d, 10, 201), 1e-8);
    for (double xi = -10; xi <= 10; xi += 0.5) EXPECT_LE(std::abs(fourier_slice(c, d, xi)), 1e-8);
    // xi = 0 alone: the numeric transform is the mass.
    for (const auto& g : {Generator::bspline_tensor(2, 2), Generator::vanishing_pd()})
        EXPECT_LE(slice_transform_check(g, DirectionVector::from_angle(0.8), 0.0, 64), 1e-8);
    EXPECT_THROW(slice_transform_check(c, d, 10, 10), InvalidArgument);
}

TEST(Suite, PassesOnEligibleScenario) {
    SuiteInputs in;
    in.generator = Generator::bspline_tensor(1, 1);
    in.direction = DirectionVector::from_angle(pi / 6);
    in.index_set = build_index_set(in.generator.support(), {0, 2, 0, 2});
    in.coefficients = synthesize(in.index_set, 42);
    in.method = PlanMethod::kernel_points;
    for (const auto& c : run_invariant_suite(in)) EXPECT_TRUE(c.passed) << c.name << " " << c.value << " " << c.detail;
}

TEST(Suite, IneligibleScenarioIsRefusedNotFailed) {
    SuiteInputs in;
    in.generator = Generator::counterexample();
    in.direction = DirectionVector::from_angle(pi / 4);
    in.index_set = build_index_set(in.generator.support(), {0, 1, 0, 1});
    in.coefficients = synthesize(in.index_set, 42);
    in.method = PlanMethod::refine_grid;
    for (const auto& c : run_invariant_suite(in)) EXPECT_TRUE(c.passed) << c.name << " " << c.detail;
}
