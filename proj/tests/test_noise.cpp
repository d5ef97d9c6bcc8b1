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
#include <sstream>

#include "azne/benchmarks.hpp"
#include "azne/calibration.hpp"
#include "azne/noise.hpp"

namespace azne {
namespace {

TEST(CalibrationTest, ParsesCxRow) {
    std::istringstream in("pair,error\n25_22, 0.00565\n");
    CalibrationTable t = load_calibration(in);
    EXPECT_DOUBLE_EQ(t.cx_error({25, 22}), 0.00565);
    EXPECT_FALSE(t.has_cx({22, 25}));
    EXPECT_THROW(t.cx_error({22, 25}), std::out_of_range);
}

TEST(CalibrationTest, ShippedTableMedian) {
    const CalibrationTable &t = default_calibration();
    EXPECT_EQ(t.cx_errors().size(), 56u);
    EXPECT_DOUBLE_EQ(t.median_cx_error(), 0.00705);
    EXPECT_EQ(t.qubits().size(), 27u);
    EXPECT_DOUBLE_EQ(t.cx_error({25, 22}), 0.00565);
    // Table lists both orientations with equal rates.
    for (const auto &[pair, e] : t.cx_errors()) {
        QubitPair rev{pair.second, pair.first};
        if (t.has_cx(rev)) EXPECT_EQ(t.cx_error(rev), e) << pair_name(pair);
    }
}

TEST(CalibrationTest, EmptyInputRejected) {
    std::istringstream empty("");
    EXPECT_THROW(load_calibration(empty), std::invalid_argument);
    std::istringstream blank("\n  \n");
    EXPECT_THROW(load_calibration(blank), std::invalid_argument);
    std::istringstream header_only("pair,error\n");
    EXPECT_THROW(load_calibration(header_only), std::invalid_argument);
}

TEST(CalibrationTest, MalformedRowNamesRow) {
    std::istringstream in("pair,error\n1_2,0.01\n3-4\n");
    try {
        load_calibration(in);
        FAIL() << "expected rejection";
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
    }
    std::istringstream bad_number("pair,error\n1_2,abc\n");
    EXPECT_THROW(load_calibration(bad_number), std::invalid_argument);
    std::istringstream out_of_range("pair,error\n1_2,1.5\n");
    EXPECT_THROW(load_calibration(out_of_range), std::invalid_argument);
}

TEST(CalibrationTest, AsymmetricReverseRejected) {
    std::istringstream in("pair,error\n1_2,0.01\n2_1,0.02\n");
    EXPECT_THROW(load_calibration(in), std::invalid_argument);
    CalibrationTable t;
    EXPECT_THROW(t.set_cx({3, 3}, 0.01), std::invalid_argument);
}

TEST(CalibrationTest, QubitTable) {
    std::istringstream cx("pair,error\n0_1,0.01\n");
    std::istringstream qp("qubit,readout,sx,x\n0,0.02,0.0003,0.0003\n1,0.03,0.0002,0.0002\n");
    CalibrationTable t = load_calibration(cx, qp);
    EXPECT_DOUBLE_EQ(t.qubit(1).readout, 0.03);
    EXPECT_FALSE(t.qubit(1).t1_us.has_value());
    std::istringstream missing_col("qubit,readout,sx\n0,0.02,0.0003\n");
    CalibrationTable u;
    EXPECT_THROW(load_qubit_properties(missing_col, u), std::invalid_argument);
}

NoiseProcess table_process() {
    NoiseProcess p;
    p.base = default_calibration();
    p.seed = 42;
    return p;
}

TEST(NoiseEpochTest, DegenerateProcessKeepsBaseRates) {
    NoiseProcess p = table_process();
    for (std::uint64_t run = 0; run < 5; ++run) {
        NoiseEpoch e = sample_epoch(p, run);
        EXPECT_FALSE(e.outlier());
        for (const auto &[pair, rate] : p.base.cx_errors()) EXPECT_EQ(e.cx_rate(pair), rate);
    }
}

TEST(NoiseEpochTest, ForcedOutlierTriplesRates) {
    NoiseProcess p = table_process();
    p.outlier_prob = 1;
    p.outlier_scale = 3;
    p.drift_sigma = 0.2;
    NoiseEpoch e = sample_epoch(p, 7);
    EXPECT_TRUE(e.outlier());
    for (const auto &[pair, rate] : p.base.cx_errors()) EXPECT_DOUBLE_EQ(e.cx_rate(pair), 3 * rate);
}

TEST(NoiseEpochTest, LogNormalDriftMean) {
    NoiseProcess p = table_process();
    p.drift_sigma = 0.1;
    const std::size_t epochs = 1000;
    std::map<QubitPair, std::pair<double, double>> acc;
    for (std::uint64_t run = 0; run < epochs; ++run) {
        NoiseEpoch e = sample_epoch(p, run);
        for (const auto &[pair, rate] : e.table_rates()) {
            acc[pair].first += rate;
            acc[pair].second += rate * rate;
        }
    }
    for (const auto &[pair, s] : acc) {
        const double n = static_cast<double>(epochs);
        const double mean = s.first / n;
        const double se = std::sqrt((s.second / n - mean * mean) / (n - 1));
        const double expected = p.base.cx_error(pair) * std::exp(0.1 * 0.1 / 2);
        EXPECT_LT(std::abs(mean - expected), 3 * se) << pair_name(pair);
    }
}

TEST(NoiseEpochTest, DriftSharedByBothOrientations) {
    NoiseProcess p = table_process();
    p.drift_sigma = 0.3;
    NoiseEpoch e = sample_epoch(p, 3);
    EXPECT_EQ(e.cx_rate({25, 22}), e.cx_rate({22, 25}));
    EXPECT_NE(e.cx_rate({25, 22}), p.base.cx_error({25, 22}));
}

TEST(NoiseEpochTest, PureFunctionOfSeedAndRun) {
    NoiseProcess p = table_process();
    p.drift_sigma = 0.2;
    p.common_sigma = 0.3;
    p.outlier_prob = 0.3;
    p.outlier_scale = 2;
    for (std::uint64_t run = 0; run < 20; ++run) {
        NoiseEpoch a = sample_epoch(p, run), b = sample_epoch(p, run);
        EXPECT_EQ(a.outlier(), b.outlier());
        EXPECT_EQ(a.common_factor(), b.common_factor());
        EXPECT_EQ(a.table_rates(), b.table_rates());
    }
    NoiseProcess q = p;
    q.seed = 43;
    bool differs = false;
    for (std::uint64_t run = 0; run < 5; ++run) differs |= sample_epoch(p, run).table_rates() != sample_epoch(q, run).table_rates();
    EXPECT_TRUE(differs);
}

TEST(NoiseEpochTest, OutlierFrequency) {
    NoiseProcess p = table_process();
    p.outlier_prob = 0.15;
    p.outlier_scale = 3;
    int outliers = 0;
    const int n = 4000;
    for (int run = 0; run < n; ++run) outliers += sample_epoch(p, static_cast<std::uint64_t>(run)).outlier();
    const double se = std::sqrt(0.15 * 0.85 / n);
    EXPECT_NEAR(outliers / double(n), 0.15, 4 * se);
}

TEST(NoiseEpochTest, ClampIsReported) {
    NoiseProcess p = table_process();
    p.scale = 150;  // pushes most rates beyond the validity bound
    NoiseEpoch e = sample_epoch(p, 0);
    EXPECT_GT(e.clamped_pairs(), 0u);
    std::size_t expected = 0;
    for (const auto &[pair, rate] : p.base.cx_errors()) {
        expected += rate * 150 > max_cx_rate;
        EXPECT_LE(e.cx_rate(pair), max_cx_rate);
    }
    EXPECT_EQ(e.clamped_pairs(), expected);
}

TEST(NoiseEpochTest, GateNoiseFollowsLayout) {
    NoiseProcess p = table_process();
    Benchmark g = build_benchmark("grover");
    NoiseEpoch e = sample_epoch(p, 0);
    GateNoise gn = e.gate_noise(g.circuit);
    for (const Gate &gate : g.circuit.gates()) {
        if (!gate.is_cnot()) continue;
        QubitPair phys{g.circuit.physical(gate.control()), g.circuit.physical(gate.target())};
        EXPECT_EQ(gn.cnot.at(gate.control(), gate.target()), p.base.cx_error(phys));
    }
    EXPECT_TRUE(gn.single_qubit.empty());
    EXPECT_TRUE(e.readout(g.circuit).empty());
    p.readout_enabled = true;
    p.single_qubit_noise = true;
    NoiseEpoch f = sample_epoch(p, 0);
    auto ro = f.readout(g.circuit);
    ASSERT_EQ(ro.size(), 3u);
    EXPECT_DOUBLE_EQ(ro[0].p1_given0(), p.base.qubit(4).readout);
    EXPECT_EQ(f.gate_noise(g.circuit).single_qubit.size(), 3u);
}

TEST(NoiseEpochTest, UniformRateIgnoresTable) {
    NoiseProcess p = NoiseProcess::uniform(0.01);
    NoiseEpoch e = sample_epoch(p, 0);
    EXPECT_DOUBLE_EQ(e.cx_rate({0, 1}), 0.01);
    EXPECT_DOUBLE_EQ(e.cx_rate({25, 22}), 0.01);
}

TEST(NoiseProcessTest, Validation) {
    NoiseProcess p;
    p.drift_sigma = -1;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = NoiseProcess{};
    p.outlier_prob = 1.5;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = NoiseProcess{};
    p.outlier_scale = 0.5;
    EXPECT_THROW(sample_epoch(p, 0), std::invalid_argument);
}

}  // namespace
}  // namespace azne
