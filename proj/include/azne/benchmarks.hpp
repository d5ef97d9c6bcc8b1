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

#ifndef AZNE_BENCHMARKS_HPP
#define AZNE_BENCHMARKS_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "azne/circuit.hpp"

namespace azne {

struct Benchmark {
    Circuit circuit;
    Observable observable;
};

namespace detail {

inline void add_cz(Circuit &c, std::uint32_t a, std::uint32_t b) {
    c.append(Gate::h(b));
    c.append(Gate::cnot(a, b));
    c.append(Gate::h(b));
}

inline void add_swap(Circuit &c, std::uint32_t a, std::uint32_t b) {
    c.append(Gate::cnot(a, b));
    c.append(Gate::cnot(b, a));
    c.append(Gate::cnot(a, b));
}

/// Controlled phase diag(1, 1, 1, e^{i phi}) up to global phase.
inline void add_cphase(Circuit &c, std::uint32_t a, std::uint32_t b, double phi) {
    c.append(Gate::rz(a, phi / 2));
    c.append(Gate::rz(b, phi / 2));
    c.append(Gate::cnot(a, b));
    c.append(Gate::rz(b, -phi / 2));
    c.append(Gate::cnot(a, b));
}

/// RY(theta) = RZ(pi/2) H RZ(theta) H RZ(-pi/2).
inline void add_ry(Circuit &c, std::uint32_t q, double theta) {
    c.append(Gate::rz(q, -std::numbers::pi / 2));
    c.append(Gate::h(q));
    c.append(Gate::rz(q, theta));
    c.append(Gate::h(q));
    c.append(Gate::rz(q, std::numbers::pi / 2));
}

inline void add_controlled_ry(Circuit &c, std::uint32_t control, std::uint32_t target, double theta) {
    add_ry(c, target, theta / 2);
    c.append(Gate::cnot(control, target));
    add_ry(c, target, -theta / 2);
    c.append(Gate::cnot(control, target));
}

/// CCZ as a phase polynomial on a line a - b - c (b in the middle), 8 CNOTs.
inline void add_ccz_line(Circuit &c, std::uint32_t a, std::uint32_t b, std::uint32_t t) {
    constexpr double q = std::numbers::pi / 4;
    c.append(Gate::rz(a, q));
    c.append(Gate::rz(b, q));
    c.append(Gate::rz(t, q));
    c.append(Gate::cnot(a, b));  // b = a^b
    c.append(Gate::rz(b, -q));
    c.append(Gate::cnot(b, t));  // t = a^b^t
    c.append(Gate::rz(t, q));
    c.append(Gate::cnot(a, b));  // b = b
    c.append(Gate::cnot(b, t));  // t = a^t
    c.append(Gate::rz(t, -q));
    c.append(Gate::cnot(a, b));  // b = a^b
    c.append(Gate::cnot(b, t));  // t = b^t
    c.append(Gate::rz(t, -q));
    c.append(Gate::cnot(a, b));  // b = b
    c.append(Gate::cnot(b, t));  // t = t
}

}  // namespace detail

/// Three-qubit Grover search marking 101 and 011; one iteration reaches them with certainty.
/// Qubit 2 sits between qubits 0 and 1 on the device line (physical 4 - 7 - 6), so every CNOT
/// uses one of the pairs (4,7), (6,7), (7,6).
inline Benchmark grover_benchmark() {
    Circuit c(3, "grover");
    for (std::uint32_t q = 0; q < 3; ++q) c.append(Gate::h(q));
    // Oracle: phase (-1)^{q2 (q0 xor q1)} = CZ(0,2) CZ(1,2).
    detail::add_cz(c, 0, 2);
    detail::add_cz(c, 1, 2);
    // Diffusion.
    for (std::uint32_t q = 0; q < 3; ++q) c.append(Gate::h(q));
    for (std::uint32_t q = 0; q < 3; ++q) c.append(Gate::x(q));
    detail::add_ccz_line(c, 0, 2, 1);
    for (std::uint32_t q = 0; q < 3; ++q) c.append(Gate::x(q));
    for (std::uint32_t q = 0; q < 3; ++q) c.append(Gate::h(q));
    c.set_layout({4, 6, 7});
    return {std::move(c), Observable::bitstrings(3, {{"101", 1.0}, {"011", 1.0}}, 1.0)};
}

/// Four-qubit HHL for B = [[1, -1/3], [-1/3, 1]], b = (1, 0), on the line 1 - 4 - 7 - 6.
/// Positions start as (system, clock0, clock1, ancilla); three SWAPs route the clock qubits.
/// The ancilla (qubit 3) reads 1 with probability |x|^2 * 4/9 = 5/8.
inline Benchmark hhl_benchmark() {
    using std::numbers::pi;
    Circuit c(4, "hhl");
    constexpr std::uint32_t sys = 0, anc = 3;
    std::uint32_t c0 = 1, c1 = 2;
    c.append(Gate::h(c0));
    c.append(Gate::h(c1));
    // controlled-U with U = exp(i B 3pi/4) = i H S H.
    c.append(Gate::rz(c0, pi / 2));
    c.append(Gate::h(sys));
    detail::add_cphase(c, c0, sys, pi / 2);
    c.append(Gate::h(sys));
    detail::add_swap(c, 1, 2);
    std::swap(c0, c1);
    // controlled-U^2 with U^2 = -X.
    c.append(Gate::rz(c1, pi));
    c.append(Gate::cnot(c1, sys));
    // Inverse QFT on the clock register, including its bit-reversal swap.
    detail::add_swap(c, c0, c1);
    std::swap(c0, c1);
    c.append(Gate::h(c1));
    detail::add_cphase(c, c1, c0, -pi / 2);
    c.append(Gate::h(c0));
    // Eigenvalue 2/3 is flagged by c1 and gets amplitude 1; 4/3 is flagged by c0 and gets 1/2.
    detail::add_controlled_ry(c, c1, anc, pi);
    detail::add_swap(c, 1, 2);
    std::swap(c0, c1);
    detail::add_controlled_ry(c, c0, anc, pi / 3);
    c.set_layout({1, 4, 7, 6});
    return {std::move(c), Observable::qubit_one(4, anc, 5.0 / 8.0)};
}

/// Eight-qubit Hadamard ladder: H on the middle of the line, then CNOTs spreading outward,
/// preparing (|0..0> + |1..1>)/sqrt(2). Physical line 10 - 12 - 13 - 14 - 16 - 19 - 22 - 25.
inline Benchmark ladder_benchmark() {
    Circuit c(8, "ladder");
    c.append(Gate::h(3));
    c.append(Gate::cnot(3, 2));
    c.append(Gate::cnot(2, 1));
    c.append(Gate::cnot(1, 0));
    c.append(Gate::cnot(3, 4));
    c.append(Gate::cnot(4, 5));
    c.append(Gate::cnot(5, 6));
    c.append(Gate::cnot(6, 7));
    c.set_layout({10, 12, 13, 14, 16, 19, 22, 25});
    return {std::move(c), Observable::bitstrings(8, {{"11111111", 1.0}}, 0.5)};
}

inline const std::vector<std::string> &benchmark_names() {
    static const std::vector<std::string> names{"grover", "hhl", "ladder"};
    return names;
}

inline Benchmark build_benchmark(std::string_view name) {
    if (name == "grover") return grover_benchmark();
    if (name == "hhl") return hhl_benchmark();
    if (name == "ladder") return ladder_benchmark();
    throw std::invalid_argument("unknown benchmark '" + std::string(name) + "' (expected grover, hhl or ladder)");
}

}  // namespace azne

#endif
