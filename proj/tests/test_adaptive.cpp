// Copyright 2026 The Adaptive ZNE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>

#include "azne/adaptive.hpp"
#include "azne/benchmarks.hpp"

namespace azne {
namespace {

TEST(EpsilonFromP0Test, Examples) {
    for (std::size_t q = 1; q <= 8; ++q) EXPECT_EQ(epsilon_from_p0(1.0, q), 0.0);
    EXPECT_NEAR(epsilon_from_p0(0.5, 3), 0.30094415309675765, 1e-15);
    EXPECT_THROW(epsilon_from_p0(0.1, 3), std::invalid_argument);
    EXPECT_THROW(epsilon_from_p0(1.01, 3), std::invalid_argument);
    EXPECT_NO_THROW(epsilon_from_p0(1.0 / 9.0 + 1e-15, 3));
}

TEST(EpsilonFromP0Test, StrictlyDecreasing) {
    for (std::size_t q = 1; q <= 8; ++q) {
        const double lo = 1.0 / (std::ldexp(1.0, static_cast<int>(q)) + 1);
        double previous = INFINITY;
        for (int k = 0; k < 1000; ++k) {
            const double p0 = lo + (1 - lo) * (k + 0.5) / 1000.0;
            const double e = epsilon_from_p0(p0, q);
            EXPECT_LT(e, previous);
            previous = e;
        }
    }
}

TEST(EpsilonFromP0Test, InvertsSurvivalLaw) {
    for (std::size_t q = 1; q <= 8; ++q) {
        const double d = std::ldexp(1.0, static_cast<int>(q));
        for (int k = 0; k <= 10; ++k) {
            const double eps = 0.05 * k;
            const double p0 = (1 - eps) * (1 - eps) + eps * eps / d;
            EXPECT_NEAR(epsilon_from_p0(p0, q), eps, 1e-9) << "q=" << q << " eps=" << eps;
        }
    }
}

TEST(MeasureEpsilonTest, ZeroNoise) {
    NoiseProcess p = NoiseProcess::noiseless();
    NoiseEpoch e = sample_epoch(p, 0);
    CounterRng rng(1, Stream::epsilon0_shots, {0});
    ErrorEstimate est = measure_epsilon0(build_benchmark("grover").circuit, e, 10000, rng);
    EXPECT_EQ(est.epsilon0, 0.0);
    EXPECT_EQ(*est.p0, 1.0);
    EXPECT_EQ(est.q, 3u);
    EXPECT_EQ(est.source, EstimateSource::measured);
}

TEST(MeasureEpsilonTest, GroverWithinBinomialError) {
    NoiseProcess p = NoiseProcess::uniform(0.02);
    NoiseEpoch e = sample_epoch(p, 0);
    Benchmark g = build_benchmark("grover");
    const double exact_p0 = evolve(with_inverse(g.circuit), e.gate_noise(with_inverse(g.circuit))).diagonal()[0];
    const double exact_eps = epsilon_from_p0(exact_p0, 3);
    const std::uint64_t shots = 100000;
    CounterRng rng(5, Stream::epsilon0_shots, {0});
    ErrorEstimate est = measure_epsilon0(g.circuit, e, shots, rng);
    // Delta method: d eps / d p0 = -1 / (2 sqrt(radicand) (1 + 1/2^q)) * (1 + 1/2^q).
    const double radicand = exact_p0 - (1 - exact_p0) / 8;
    const double slope = 1 / (2 * std::sqrt(radicand));
    const double se = slope * std::sqrt(exact_p0 * (1 - exact_p0) / shots);
    EXPECT_LT(std::abs(est.epsilon0 - exact_eps), 4 * se);
    EXPECT_GT(exact_eps, 0.05);
}

TEST(MeasureEpsilonTest, TableRatesGiveOrderOfMagnitude) {
    NoiseProcess p;
    p.base = default_calibration();
    NoiseEpoch e = sample_epoch(p, 0);
    CounterRng rng(7, Stream::epsilon0_shots, {0});
    ErrorEstimate est = measure_epsilon0(build_benchmark("grover").circuit, e, 10000, rng);
    EXPECT_GT(est.epsilon0, 0.01);
    EXPECT_LT(est.epsilon0, 0.5);
}

TEST(MeasureEpsilonTest, DoubledRatesGiveLargerEpsilon) {
    NoiseProcess p;
    p.base = default_calibration();
    NoiseProcess p2 = p;
    p2.scale = 2;
    NoiseEpoch e1 = sample_epoch(p, 0), e2 = sample_epoch(p2, 0);
    Benchmark g = build_benchmark("grover");
    CounterRng r1(11, Stream::epsilon0_shots, {0}), r2(11, Stream::epsilon0_shots, {1});
    EXPECT_LT(measure_epsilon0(g.circuit, e1, 100000, r1).epsilon0, measure_epsilon0(g.circuit, e2, 100000, r2).epsilon0);
}

TEST(CalibrationEstimateTest, Sums) {
    CalibrationTable t;
    t.set_cx({0, 1}, 0.006);
    Circuit none(2, {Gate::h(0)});
    EXPECT_EQ(estimate_epsilon_from_calibration(none, t).epsilon0, 0.0);
    Circuit three(2, {Gate::cnot(0, 1), Gate::h(1), Gate::cnot(0, 1), Gate::cnot(0, 1)});
    EXPECT_NEAR(estimate_epsilon_from_calibration(three, t).epsilon0, 0.018, 1e-15);
    Circuit reversed(2, {Gate::cnot(1, 0)});
    try {
        estimate_epsilon_from_calibration(reversed, t);
        FAIL();
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find("1_0"), std::string::npos);
    }
}

TEST(CalibrationEstimateTest, GroverFromShippedTable) {
    // Five CNOTs on 4-7 / 7-4 (0.00542) and five on 6-7 / 7-6 (0.00595).
    ErrorEstimate e = estimate_epsilon_from_calibration(build_benchmark("grover").circuit, default_calibration());
    EXPECT_NEAR(e.epsilon0, 5 * 0.00542 + 5 * 0.00595, 1e-12);
    EXPECT_EQ(e.source, EstimateSource::calibration);
    EXPECT_FALSE(e.p0.has_value());
}

TEST(LambdaMaxTest, Examples) {
    EXPECT_DOUBLE_EQ(lambda_max(0.025, 0.125), 5.0);
    EXPECT_DOUBLE_EQ(lambda_max(0.2, 0.125), 0.625);
    EXPECT_THROW(lambda_max(0.0, 0.125), ZeroErrorStrength);
    EXPECT_THROW(lambda_max(-0.1, 0.125), std::invalid_argument);
    EXPECT_THROW(lambda_max(0.1, 0.0), std::invalid_argument);
    double previous = INFINITY;
    for (int k = 1; k < 500; ++k) {
        const double l = lambda_max(k * 0.001, 0.125);
        EXPECT_LT(l, previous);
        previous = l;
    }
}

TEST(LambdaMaxTest, ClampedPlan) {
    ErrorEstimate e{0.2, EstimateSource::measured, std::nullopt, 3};
    ScalingPlan p = build_plan(10, e, 0.125, 3);
    EXPECT_TRUE(p.clamped);
    EXPECT_DOUBLE_EQ(p.lambda_max_unclamped, 0.625);
    EXPECT_DOUBLE_EQ(p.lambda_max, 1.6);
    EXPECT_EQ(p.lambdas.size(), 3u);
    EXPECT_THROW(build_plan(10, e, 0.125, 3, false), std::invalid_argument);
}

TEST(ExponentialFactorsTest, Examples) {
    auto f = exponential_factors(9, 3);
    EXPECT_DOUBLE_EQ(f[0], 1);
    EXPECT_DOUBLE_EQ(f[1], 3);
    EXPECT_DOUBLE_EQ(f[2], 9);
    auto g = exponential_factors(5, 3);
    EXPECT_NEAR(g[1], 2.2360679774997898, 1e-15);
    EXPECT_DOUBLE_EQ(g[2], 5);
    for (double v : exponential_factors(1, 4)) EXPECT_EQ(v, 1.0);
    EXPECT_THROW(exponential_factors(0.9, 3), std::invalid_argument);
    EXPECT_THROW(exponential_factors(3, 1), std::invalid_argument);
}

TEST(BuildPlanTest, Examples) {
    ErrorEstimate e{0.025, EstimateSource::measured, std::nullopt, 3};
    ScalingPlan p = build_plan(100, e, 0.125, 3);
    ASSERT_EQ(p.lambdas.size(), 3u);
    EXPECT_FALSE(p.clamped);
    const double expected[] = {1, std::sqrt(5.0), 5};
    for (int j = 0; j < 3; ++j) EXPECT_LE(std::abs(p.lambdas[j].to_double() - expected[j]), 0.01);
    EXPECT_EQ(p.lambdas[0], Rational(1));
    ScalingPlan again = build_plan(100, e, 0.125, 3);
    EXPECT_EQ(again.lambdas, p.lambdas);
    ScalingPlan s = ScalingPlan::standard();
    EXPECT_EQ(s.lambdas, (std::vector<Rational>{1, 3, 5}));
}

TEST(BuildPlanTest, Invariants) {
    for (std::size_t n : {3u, 7u, 10u, 18u, 100u}) {
        double previous_max = 0;
        for (int k = 200; k >= 1; --k) {
            ErrorEstimate e{k * 0.002, EstimateSource::measured, std::nullopt, 3};
            ScalingPlan p = build_plan(n, e, 0.125, 3);
            EXPECT_EQ(p.lambdas.front(), Rational(1));
            for (std::size_t j = 1; j < p.lambdas.size(); ++j) EXPECT_LT(p.lambdas[j - 1], p.lambdas[j]);
            const Rational top = realizable_lambda(p.lambda_max, static_cast<std::int64_t>(n)) +
                                 Rational(1, static_cast<std::int64_t>(n));
            for (const auto &l : p.lambdas) EXPECT_LE(l, top);
            EXPECT_DOUBLE_EQ(p.lambda_max_unclamped, 0.125 / e.epsilon0);
            EXPECT_GE(p.lambda_max, previous_max);  // smaller eps0 never shrinks the range
            previous_max = p.lambda_max;
        }
    }
}

}  // namespace
}  // namespace azne
