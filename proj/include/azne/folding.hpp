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

#ifndef AZNE_FOLDING_HPP
#define AZNE_FOLDING_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "azne/circuit.hpp"
#include "azne/rational.hpp"
#include "azne/rng.hpp"

namespace azne {

/// Per-CNOT identity insertion counts, in circuit order.
struct FoldAssignment {
    std::vector<std::uint32_t> insertions;
    Rational achieved_lambda{1};

    std::uint64_t total() const {
        std::uint64_t s = 0;
        for (auto n : insertions) s += n;
        return s;
    }
};

/// Closest factor (N + 2S)/N to `desired` over integer insertion totals S >= 0.
/// Exact halfway cases round to the larger S.
inline Rational realizable_lambda(double desired, std::int64_t n_cnots) {
    if (!(desired >= 1)) throw std::invalid_argument("scaling factor must be >= 1");
    if (n_cnots < 1) throw std::invalid_argument("circuit must contain at least one CNOT");
    const double n = static_cast<double>(n_cnots);
    // The small slack keeps decimal inputs such as 4.2 from landing just below a tie.
    const auto s = static_cast<std::int64_t>(std::floor((desired - 1) / 2 * n + 0.5 + 1e-9));
    return Rational(n_cnots + 2 * s, n_cnots);
}

/// Spreads the insertions for `lambda` as evenly as possible; which CNOTs receive the extra
/// insertion is a uniformly random choice drawn from `rng`.
inline FoldAssignment assign_insertions(Rational lambda, std::int64_t n_cnots, CounterRng &rng) {
    if (n_cnots < 1) throw std::invalid_argument("circuit must contain at least one CNOT");
    Rational scaled = lambda * Rational(n_cnots);
    if (!scaled.is_integer() || scaled.num() < n_cnots || (scaled.num() - n_cnots) % 2 != 0) {
        throw std::invalid_argument("lambda " + lambda.str() + " is not realizable with " + std::to_string(n_cnots) +
                                    " CNOTs");
    }
    const std::int64_t s = (scaled.num() - n_cnots) / 2;
    const std::int64_t base = s / n_cnots;
    const std::int64_t extra = s - base * n_cnots;
    FoldAssignment a;
    a.insertions.assign(static_cast<std::size_t>(n_cnots), static_cast<std::uint32_t>(base));
    for (std::int64_t i = 0; i < extra; ++i) a.insertions[static_cast<std::size_t>(i)] += 1;
    rng.shuffle(std::span<std::uint32_t>(a.insertions));
    a.achieved_lambda = lambda;
    return a;
}

inline FoldAssignment assign_insertions(Rational lambda, std::int64_t n_cnots, std::uint64_t seed) {
    CounterRng rng(seed, Stream::fold, {});
    return assign_insertions(lambda, n_cnots, rng);
}

/// Replaces the i-th CNOT by 2 n_i + 1 copies.
inline Circuit fold(const Circuit &circuit, const FoldAssignment &assignment) {
    if (assignment.insertions.size() != circuit.cnot_count()) {
        throw std::invalid_argument("fold assignment has " + std::to_string(assignment.insertions.size()) +
                                    " entries for " + std::to_string(circuit.cnot_count()) + " CNOTs");
    }
    Circuit out(circuit.width(), circuit.label());
    out.set_layout(circuit.layout());
    std::size_t i = 0;
    for (const Gate &g : circuit.gates()) {
        if (!g.is_cnot()) {
            out.append(g);
            continue;
        }
        const std::uint32_t copies = 2 * assignment.insertions[i++] + 1;
        for (std::uint32_t k = 0; k < copies; ++k) out.append(g);
    }
    return out;
}

/// A Pauli on one qubit as (x, z) bits: I=00, X=10, Z=01, Y=11.
struct PauliBits {
    bool x = false;
    bool z = false;
};

/// Frame index in [0, 16): bits 0-1 are the control Pauli, bits 2-3 the target Pauli.
struct TwirlFrame {
    PauliBits control_in, target_in, control_out, target_out;

    static TwirlFrame from_index(std::uint32_t index) {
        TwirlFrame f;
        f.control_in = {(index & 1) != 0, (index & 2) != 0};
        f.target_in = {(index & 4) != 0, (index & 8) != 0};
        // CNOT maps X_c -> X_c X_t and Z_t -> Z_c Z_t.
        f.control_out = {f.control_in.x, f.control_in.z != f.target_in.z};
        f.target_out = {f.target_in.x != f.control_in.x, f.target_in.z};
        return f;
    }
};

namespace detail {

/// Z as RZ(pi), X as X; a Y is Z followed by X. Equal to the Pauli up to global phase.
inline void append_pauli(Circuit &out, std::uint32_t q, PauliBits p) {
    if (p.z) out.append(Gate::rz(q, std::numbers::pi));
    if (p.x) out.append(Gate::x(q));
}

}  // namespace detail

/// Conjugates the k-th CNOT with the frame `frames[k]`.
inline Circuit twirl_with_frames(const Circuit &circuit, std::span<const std::uint32_t> frames) {
    if (frames.size() != circuit.cnot_count()) {
        throw std::invalid_argument("need one twirl frame per CNOT");
    }
    Circuit out(circuit.width(), circuit.label());
    out.set_layout(circuit.layout());
    std::size_t k = 0;
    for (const Gate &g : circuit.gates()) {
        if (!g.is_cnot()) {
            out.append(g);
            continue;
        }
        if (frames[k] >= 16) throw std::invalid_argument("twirl frame index must be < 16");
        TwirlFrame f = TwirlFrame::from_index(frames[k++]);
        detail::append_pauli(out, g.control(), f.control_in);
        detail::append_pauli(out, g.target(), f.target_in);
        out.append(g);
        detail::append_pauli(out, g.control(), f.control_out);
        detail::append_pauli(out, g.target(), f.target_out);
    }
    return out;
}

inline Circuit twirl(const Circuit &circuit, CounterRng &rng) {
    std::vector<std::uint32_t> frames(circuit.cnot_count());
    for (auto &f : frames) f = static_cast<std::uint32_t>(rng.below(16));
    return twirl_with_frames(circuit, frames);
}

inline Circuit twirl(const Circuit &circuit, std::uint64_t seed) {
    CounterRng rng(seed, Stream::twirl, {});
    return twirl(circuit, rng);
}

}  // namespace azne

#endif
