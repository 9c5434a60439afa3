#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sact/generators.hpp"

using namespace sact;

namespace {

std::vector<Generator> shipped() {
    return {Generator::bspline_tensor(1, 1), Generator::bspline_tensor(2, 2), Generator::bspline_tensor(1, 2),
            Generator::vanishing_pd(), Generator::counterexample()};
}

} // namespace

TEST(Bspline, ValuesAtKnots) {
    EXPECT_DOUBLE_EQ(eval_bspline(2, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(eval_bspline(1, 0.5), 1.0);
    EXPECT_NEAR(eval_bspline(4, 2.0), 2.0 / 3.0, 1e-15);
}

TEST(Bspline, HalfOpenSupport) {
    EXPECT_EQ(eval_bspline(1, 0.0), 0.0);
    EXPECT_EQ(eval_bspline(1, 1.0), 1.0);
    EXPECT_EQ(eval_bspline(3, 0.0), 0.0);
    EXPECT_EQ(eval_bspline(3, 3.0 + 1e-12), 0.0);
    EXPECT_EQ(eval_bspline(4, -0.5), 0.0);
}

TEST(Bspline, MatchesConvolutionOracle) {
    EXPECT_NEAR(oracle::convolution_bspline(4, 2.0), 2.0 / 3.0, 1e-12);
    for (int m = 1; m <= 5; ++m)
        for (double x = -0.5; x <= m + 0.5; x += 0.0625)
            EXPECT_NEAR(eval_bspline(m, x), oracle::convolution_bspline(m, x), 1e-12) << "m=" << m << " x=" << x;
}

TEST(Bspline, MatchesTruncatedPowers) {
    for (int m = 1; m <= 6; ++m)
        for (double x = 0.01; x < m; x += 0.037)
            EXPECT_NEAR(eval_bspline(m, x), oracle::truncated_power_bspline(m, x), 1e-11) << "m=" << m;
}

TEST(Bspline, PartitionOfUnity) {
    for (int m = 1; m <= 4; ++m)
        for (double x = -3.0; x <= 3.0; x += 0.01) {
            double s = 0.0;
            for (int k = -10; k <= 10; ++k) s += eval_bspline(m, x - k);
            EXPECT_NEAR(s, 1.0, 1e-12) << "m=" << m << " x=" << x;
        }
}

TEST(Bspline, FourierClosedForm) {
    // B^_m(xi) = e^{-i m xi / 2} sinc(xi / 2)^m, against direct quadrature.
    for (int m = 1; m <= 4; ++m)
        for (double xi = -6.0; xi <= 6.0; xi += 0.75) {
            std::vector<double> br;
            for (int j = 0; j <= m; ++j) br.push_back(j);
            const double re = oracle::simpson_pieces(
                [&](double x) { return oracle::truncated_power_bspline(m, x) * std::cos(xi * x); }, br, 256, 1e-12);
            const double im = oracle::simpson_pieces(
                [&](double x) { return -oracle::truncated_power_bspline(m, x) * std::sin(xi * x); }, br, 256, 1e-12);
            const auto v = cardinal_bspline_fourier(m, xi);
            EXPECT_NEAR(v.real(), re, 1e-8);
            EXPECT_NEAR(v.imag(), im, 1e-8);
        }
}

TEST(Generator, PointValues) {
    EXPECT_DOUBLE_EQ(eval_generator(Generator::bspline_tensor(1, 1), 0.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(eval_generator(Generator::vanishing_pd(), 0.0, 0.0), 1.0);
    // Inner g peaks at 1, the two copies sit at (1, -1) and (-1, 1).
    EXPECT_DOUBLE_EQ(eval_generator(Generator::counterexample(), -1.0, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(eval_generator(Generator::counterexample(), 1.0, -1.0), -0.5);
}

TEST(Generator, Supports) {
    EXPECT_EQ(Generator::bspline_tensor(2, 2).support(), (SupportBox{-2, 2, -2, 2}));
    EXPECT_EQ(Generator::bspline_tensor(1, 3).support(), (SupportBox{-1, 1, -3, 3}));
    EXPECT_EQ(Generator::vanishing_pd().support(), (SupportBox{-1.5, 1.5, -1.5, 1.5}));
    EXPECT_EQ(Generator::counterexample().support(), (SupportBox{-2, 2, -2, 2}));
    EXPECT_DOUBLE_EQ(SupportBox({-2, 2, -3, 1}).max_abs(), 3.0);
    EXPECT_THROW(SupportBox({1, 1, 0, 1}).validate(), InvalidArgument);
    EXPECT_THROW(Generator::bspline_tensor(0, 1), InvalidArgument);
}

TEST(Generator, ZeroOutsideSupport) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (const auto& g : shipped()) {
        const auto& b = g.support();
        int checked = 0;
        while (checked < 10000) {
            const double x = u(rng), y = u(rng);
            if (b.contains(x, y)) continue;
            ASSERT_EQ(g.value(x, y), 0.0) << to_string(g.kind()) << " at " << x << "," << y;
            ++checked;
        }
    }
}

TEST(Generator, BsplineTensorIsNonnegativeWithUnitMass) {
    const auto g = Generator::bspline_tensor(2, 2);
    for (double x = -2.0; x <= 2.0; x += 0.05)
        for (double y = -2.0; y <= 2.0; y += 0.05) EXPECT_GE(g.value(x, y), 0.0);
    EXPECT_NEAR(oracle::plane_integral([&](double x, double y) { return g.value(x, y); }, -2, 2, -2, 2), 1.0, 1e-12);
}

TEST(Generator, FourierAtOriginIsMass) {
    for (const auto& g : shipped()) {
        const auto& b = g.support();
        const double mass = oracle::plane_integral([&](double x, double y) { return g.value(x, y); }, b.n1, b.m1, b.n2, b.m2);
        EXPECT_NEAR(fourier_generator(g, 0, 0).real(), mass, 1e-12) << to_string(g.kind());
        EXPECT_NEAR(fourier_generator(g, 0, 0).imag(), 0.0, 1e-15);
    }
    EXPECT_EQ(fourier_generator(Generator::bspline_tensor(2, 2), 0, 0), complex(1.0, 0.0));
    EXPECT_NEAR(std::abs(fourier_generator(Generator::vanishing_pd(), 0, 0)), 0.0, 1e-15);
}

TEST(Generator, FourierMatchesNumericTransform) {
    for (const auto& g : shipped())
        for (double xi1 = -8.0; xi1 <= 8.0; xi1 += 4.0)
            for (double xi2 = -8.0; xi2 <= 8.0; xi2 += 4.0) {
                const auto num = oracle::plane_fourier(g, xi1, xi2);
                EXPECT_LE(std::abs(num - fourier_generator(g, xi1, xi2)), 1e-4)
                    << to_string(g.kind()) << " xi=(" << xi1 << "," << xi2 << ")";
            }
}

TEST(Generator, VanishingFactorTransform) {
    // sin^2(xi/2) sinc^2(xi/4), squared over the tensor product.
    const auto g = Generator::vanishing_pd();
    for (double a = -9.0; a <= 9.0; a += 0.7)
        for (double b = -9.0; b <= 9.0; b += 1.3) {
            auto f = [](double x) {
                const double s = x == 0 ? 1.0 : std::sin(x / 4) / (x / 4);
                return std::pow(std::sin(x / 2), 2) * s * s;
            };
            const auto v = fourier_generator(g, a, b);
            EXPECT_NEAR(v.real(), f(a) * f(b), 1e-13);
            EXPECT_NEAR(v.imag(), 0.0, 1e-13);
        }
}

TEST(Generator, CounterexampleVanishesOnDiagonal) {
    const auto g = Generator::counterexample();
    for (double xi = -20.0; xi <= 20.0; xi += 0.173) EXPECT_LE(std::abs(fourier_generator(g, xi, xi)), 1e-12);
    // i sin(xi1 - xi2) g^(xi).
    const auto inner = Generator::bspline_tensor(1, 1);
    for (double a = -4; a <= 4; a += 0.9)
        for (double b = -4; b <= 4; b += 1.1) {
            const complex expect = complex(0, 1) * std::sin(a - b) * inner.fourier(a, b);
            EXPECT_LE(std::abs(fourier_generator(g, a, b) - expect), 1e-14);
        }
}

TEST(Generator, BsplineTransformNonnegative) {
    const auto g = Generator::bspline_tensor(2, 2);
    for (double a = -15; a <= 15; a += 0.31)
        for (double b = -15; b <= 15; b += 0.29) {
            const auto v = fourier_generator(g, a, b);
            EXPECT_GE(v.real(), -1e-15);
            EXPECT_NEAR(v.imag(), 0.0, 1e-15);
        }
}

TEST(Generator, DerivativeSupNorms) {
    const auto g = Generator::bspline_tensor(2, 2);
    const auto [d1, d2] = derivative_sup_norms(g);
    EXPECT_DOUBLE_EQ(d1, d2);
    // Dense-grid oracle: d/dx B_4(x + 2) = B_3(x + 2) - B_3(x + 1), times sup B_4 = 2/3.
    double best = 0.0;
    for (double x = -2.0; x <= 2.0; x += 1e-4)
        best = std::max(best, std::abs(oracle::truncated_power_bspline(3, x + 2) - oracle::truncated_power_bspline(3, x + 1)));
    const double oracle_sup = best * (2.0 / 3.0);
    EXPECT_LE(d1, 1.0);
    EXPECT_GE(d1, oracle_sup);
    EXPECT_LE(d1, 1.05 * oracle_sup * (1 + 1e-6));
    EXPECT_THROW(derivative_sup_norms(Generator::bspline_tensor(1, 1)), SmoothnessError);
    EXPECT_THROW(derivative_sup_norms(Generator::vanishing_pd()), SmoothnessError);
    EXPECT_THROW(derivative_sup_norms(Generator::counterexample(1, 2)), SmoothnessError);
    EXPECT_NO_THROW(derivative_sup_norms(Generator::counterexample(2, 2)));
}

TEST(Generator, DerivativeSupNormsScaleWithAmplitude) {
    const auto g = Generator::bspline_tensor(2, 3);
    const auto a = derivative_sup_norms(g);
    const auto b = derivative_sup_norms(g.scaled(2.0));
    EXPECT_DOUBLE_EQ(b.first, 2.0 * a.first);
    EXPECT_DOUBLE_EQ(b.second, 2.0 * a.second);
}

TEST(Generator, Classification) {
    EXPECT_EQ(classify_vanishing(Generator::bspline_tensor(1, 1)), VanishingClass::nonvanishing);
    EXPECT_EQ(classify_vanishing(Generator::bspline_tensor(2, 2)), VanishingClass::nonvanishing);
    EXPECT_EQ(classify_vanishing(Generator::vanishing_pd()), VanishingClass::vanishing);
    EXPECT_EQ(classify_vanishing(Generator::counterexample()), VanishingClass::vanishing);
}

TEST(Generator, PositiveDefinitenessProbe) {
    EXPECT_TRUE(positive_definiteness_probe(Generator::bspline_tensor(1, 1), 20, 0.1).pass);
    EXPECT_TRUE(positive_definiteness_probe(Generator::vanishing_pd(), 20, 0.1).pass);
    const auto r = positive_definiteness_probe(Generator::counterexample(), 20, 0.1);
    ASSERT_FALSE(r.pass);
    ASSERT_TRUE(r.witness.has_value());
    const auto v = fourier_generator(Generator::counterexample(), r.witness->first, r.witness->second);
    EXPECT_TRUE(v.real() < -1e-10 || std::abs(v.imag()) > 1e-10);
}

TEST(Generator, KindNames) {
    for (auto k : {GeneratorKind::bspline_tensor, GeneratorKind::vanishing_pd, GeneratorKind::counterexample})
        EXPECT_EQ(generator_kind_from_string(to_string(k)), k);
    EXPECT_FALSE(generator_kind_from_string("gaussian").has_value());
}
