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

#include <random>

#include "azne/benchmarks.hpp"
#include "azne/circuit.hpp"
#include "oracle.hpp"

namespace azne {
namespace {

TEST(CircuitTest, CnotCountOfBenchmarks) {
    EXPECT_EQ(cnot_count(build_benchmark("grover").circuit), 10u);
    EXPECT_EQ(cnot_count(build_benchmark("hhl").circuit), 18u);
    EXPECT_EQ(cnot_count(build_benchmark("ladder").circuit), 7u);
    EXPECT_EQ(cnot_count(Circuit(2)), 0u);
}

TEST(CircuitTest, CnotCountTracksAppends) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Circuit c = oracle::random_circuit(4, 30, rng);
        std::size_t n = 0;
        for (const auto &g : c.gates()) n += g.is_cnot();
        EXPECT_EQ(c.cnot_count(), n);
    }
}

TEST(CircuitTest, RejectsBadGates) {
    EXPECT_THROW(Circuit(0), std::invalid_argument);
    Circuit c(2);
    EXPECT_THROW(c.append(Gate::h(2)), std::invalid_argument);
    EXPECT_THROW(c.append(Gate::cnot(1, 1)), std::invalid_argument);
    EXPECT_THROW(c.append(Gate::cnot(0, 5)), std::invalid_argument);
    EXPECT_THROW(c.set_layout({1, 2, 3}), std::invalid_argument);
    EXPECT_THROW(gate_kind_from_name("ccx"), std::invalid_argument);
}

TEST(CircuitTest, GateMatricesAreUnitary) {
    for (const Gate &g : {Gate::h(0), Gate::x(0), Gate::sx(0), Gate::sxdg(0), Gate::rz(0, 0.7)}) {
        EXPECT_LT(unitarity_error(g.matrix()), 1e-12) << gate_name(g.kind);
    }
}

TEST(CircuitTest, InvertSelfAdjointGates) {
    Circuit cx(2, {Gate::cnot(0, 1)});
    EXPECT_EQ(invert(cx), cx);
    Circuit h(1, {Gate::h(0)});
    EXPECT_EQ(invert(h), h);
    Circuit sx(1, {Gate::sx(0), Gate::rz(0, 0.25)});
    Circuit expected(1, {Gate::rz(0, -0.25), Gate::sxdg(0)});
    EXPECT_EQ(invert(sx), expected);
}

TEST(CircuitTest, InvertComposesToIdentity) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        Circuit c = oracle::random_circuit(3, 8, rng);
        Circuit both(3);
        both.append(c);
        both.append(invert(c));
        auto s = oracle::run(both);
        EXPECT_GE(oracle::probability(s, 0), 1 - 1e-10);
    }
}

TEST(CircuitTest, DoubleInverseIsOriginal) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        Circuit c = oracle::random_circuit(4, 25, rng);
        Circuit cc = invert(invert(c));
        EXPECT_EQ(cc, c);
        auto in = oracle::random_state(4, rng);
        EXPECT_GE(oracle::fidelity(oracle::run(c, in), oracle::run(cc, in)), 1 - 1e-10);
    }
}

TEST(CircuitTest, InvertRejectsNonUnitary) {
    Circuit c(1, {Gate::h(0), Gate::rz(0, std::numeric_limits<double>::quiet_NaN())});
    EXPECT_THROW(invert(c), std::invalid_argument);
}

TEST(CircuitTest, BenchmarkIdealValues) {
    EXPECT_DOUBLE_EQ(build_benchmark("grover").observable.ideal_value(), 1.0);
    EXPECT_DOUBLE_EQ(build_benchmark("hhl").observable.ideal_value(), 5.0 / 8.0);
    EXPECT_DOUBLE_EQ(build_benchmark("ladder").observable.ideal_value(), 0.5);
    for (const auto &name : benchmark_names()) {
        Benchmark b = build_benchmark(name);
        EXPECT_NEAR(oracle::expectation(oracle::run(b.circuit), b.observable), b.observable.ideal_value(), 1e-9)
            << name;
    }
    EXPECT_THROW(build_benchmark("qft"), std::invalid_argument);
}

TEST(CircuitTest, HhlAncillaMatchesSolutionNorm) {
    // x = B^-1 b = (9/8, 3/8); with rotation constant 2/3 the ancilla reads 1 with |x|^2 4/9.
    const double x0 = 9.0 / 8.0, x1 = 3.0 / 8.0;
    EXPECT_NEAR(x0 - x1 / 3, 1.0, 1e-15);
    EXPECT_NEAR(-x0 / 3 + x1, 0.0, 1e-15);
    EXPECT_NEAR(std::sqrt(x0 * x0 + x1 * x1), 1.5 * std::sqrt(5.0 / 8.0), 1e-12);
    Benchmark b = build_benchmark("hhl");
    auto s = oracle::run(b.circuit);
    double p_anc = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if ((k >> 3) & 1) p_anc += std::norm(s[k]);
    }
    EXPECT_NEAR(p_anc, (x0 * x0 + x1 * x1) * 4.0 / 9.0, 1e-9);
}

TEST(CircuitTest, GroverMarkedStates) {
    Benchmark b = build_benchmark("grover");
    auto s = oracle::run(b.circuit);
    EXPECT_NEAR(oracle::probability(s, bitstring_to_index("101")) + oracle::probability(s, bitstring_to_index("011")),
                1.0, 1e-9);
}

TEST(CircuitTest, BitstringConvention) {
    EXPECT_EQ(bitstring_to_index("100"), 1u);
    EXPECT_EQ(bitstring_to_index("001"), 4u);
    EXPECT_EQ(index_to_bitstring(6, 3), "011");
    EXPECT_THROW(bitstring_to_index("10x"), std::invalid_argument);
}

TEST(ObservableTest, Validation) {
    EXPECT_THROW(Observable::bitstrings(3, {{"10", 1.0}}, 1.0), std::invalid_argument);
    EXPECT_THROW(Observable::bitstrings(2, {{"10", 1.5}}, 1.0), std::invalid_argument);
    EXPECT_THROW(Observable::bitstrings(2, {{"10", 1.0}}, 1.5), std::invalid_argument);
    EXPECT_THROW(Observable::qubit_one(2, 2, 0.5), std::invalid_argument);
    Observable o = Observable::qubit_one(3, 2, 0.5);
    EXPECT_EQ(o.weight(4), 1.0);
    EXPECT_EQ(o.weight(3), 0.0);
}

}  // namespace
}  // namespace azne
