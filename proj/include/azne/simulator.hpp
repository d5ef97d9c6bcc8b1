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

#ifndef AZNE_SIMULATOR_HPP
#define AZNE_SIMULATOR_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "azne/circuit.hpp"
#include "azne/density_matrix.hpp"
#include "azne/rng.hpp"

namespace azne {

/// Depolarizing strength per ordered logical CNOT pair, with an optional default.
class PairRates {
   public:
    PairRates() = default;

    static PairRates uniform(double p) {
        PairRates r;
        r.fallback_ = check(p);
        return r;
    }

    void set(std::uint32_t control, std::uint32_t target, double p) { rates_[{control, target}] = check(p); }

    double at(std::uint32_t control, std::uint32_t target) const {
        auto it = rates_.find({control, target});
        if (it != rates_.end()) return it->second;
        if (fallback_) return *fallback_;
        throw std::out_of_range("no error rate for cnot " + std::to_string(control) + "->" + std::to_string(target));
    }

    const std::map<std::pair<std::uint32_t, std::uint32_t>, double> &explicit_rates() const { return rates_; }
    std::optional<double> fallback() const { return fallback_; }

   private:
    static double check(double p) {
        if (!(p >= 0 && p <= 1)) throw std::invalid_argument("error rate outside [0, 1]");
        return p;
    }

    std::map<std::pair<std::uint32_t, std::uint32_t>, double> rates_;
    std::optional<double> fallback_;
};

/// Gate noise for one simulation. `single_qubit` (per logical qubit) depolarizes after SX and X;
/// empty disables single-qubit noise.
struct GateNoise {
    PairRates cnot = PairRates::uniform(0);
    std::vector<double> single_qubit;
};

/// Column-stochastic 2x2 readout confusion, entry [measured][true].
struct Confusion {
    std::array<std::array<double, 2>, 2> m{{{1, 0}, {0, 1}}};

    static Confusion flips(double p1_given0, double p0_given1) {
        Confusion c;
        c.m = {{{1 - p1_given0, p0_given1}, {p1_given0, 1 - p0_given1}}};
        return c;
    }
    static Confusion symmetric(double p) { return flips(p, p); }

    double p1_given0() const { return m[1][0]; }
    double p0_given1() const { return m[0][1]; }

    bool column_stochastic(double tol = 1e-12) const {
        for (int t = 0; t < 2; ++t) {
            if (m[0][t] < -tol || m[1][t] < -tol || std::abs(m[0][t] + m[1][t] - 1) > tol) return false;
        }
        return true;
    }
};

inline constexpr std::size_t max_simulation_width = 10;

/// Evolves `state` through the circuit. Single-qubit gates on a wire are fused until the
/// next two-qubit gate or noise location on that wire.
inline DensityMatrix evolve(const Circuit &circuit, const GateNoise &noise, DensityMatrix state) {
    const std::size_t n = circuit.width();
    if (n > max_simulation_width) {
        throw std::invalid_argument("circuit width " + std::to_string(n) + " exceeds the simulator bound of " +
                                    std::to_string(max_simulation_width));
    }
    if (state.num_qubits() != n) throw std::invalid_argument("initial state width differs from circuit width");
    if (!noise.single_qubit.empty() && noise.single_qubit.size() != n) {
        throw std::invalid_argument("single-qubit noise vector must have one entry per qubit");
    }
    for (double p : noise.single_qubit) {
        if (!(p >= 0 && p <= 1)) throw std::invalid_argument("error rate outside [0, 1]");
    }

    std::vector<std::optional<Matrix2>> pending(n);
    auto flush = [&](std::uint32_t q) {
        if (pending[q]) {
            state.apply_unitary(*pending[q], q);
            pending[q].reset();
        }
    };
    for (const Gate &g : circuit.gates()) {
        if (g.is_cnot()) {
            double p = noise.cnot.at(g.control(), g.target());
            flush(g.control());
            flush(g.target());
            state.apply_cnot(g.control(), g.target());
            state.depolarize_pair(g.control(), g.target(), p);
            continue;
        }
        std::uint32_t q = g.qubits[0];
        pending[q] = pending[q] ? matmul(g.matrix(), *pending[q]) : g.matrix();
        if (!noise.single_qubit.empty() && (g.kind == GateKind::SX || g.kind == GateKind::X) &&
            noise.single_qubit[q] > 0) {
            flush(q);
            state.depolarize_qubit(q, noise.single_qubit[q]);
        }
    }
    for (std::uint32_t q = 0; q < n; ++q) flush(q);
    return state;
}

inline DensityMatrix evolve(const Circuit &circuit, const GateNoise &noise) {
    if (circuit.width() > max_simulation_width) {
        throw std::invalid_argument("circuit width " + std::to_string(circuit.width()) +
                                    " exceeds the simulator bound of " + std::to_string(max_simulation_width));
    }
    return evolve(circuit, noise, DensityMatrix(circuit.width()));
}

inline DensityMatrix evolve(const Circuit &circuit, const PairRates &rates) {
    return evolve(circuit, GateNoise{rates, {}});
}

/// Shot tallies keyed by basis index (bit q = qubit q).
class CountsTable {
   public:
    explicit CountsTable(std::size_t width) : width_(width) {}

    void add(std::uint64_t index, std::uint64_t n = 1) {
        if (index >> width_) throw std::invalid_argument("outcome index exceeds width");
        counts_[index] += n;
        shots_ += n;
    }
    void add(const std::string &bits, std::uint64_t n = 1) {
        if (bits.size() != width_) throw std::invalid_argument("bitstring '" + bits + "' has the wrong length");
        add(bitstring_to_index(bits), n);
    }

    std::size_t width() const { return width_; }
    std::uint64_t shots() const { return shots_; }
    const std::map<std::uint64_t, std::uint64_t> &counts() const { return counts_; }

    std::uint64_t count(std::uint64_t index) const {
        auto it = counts_.find(index);
        return it == counts_.end() ? 0 : it->second;
    }
    std::uint64_t count(const std::string &bits) const { return count(bitstring_to_index(bits)); }

    double frequency(std::uint64_t index) const {
        return shots_ == 0 ? 0.0 : static_cast<double>(count(index)) / static_cast<double>(shots_);
    }

    std::map<std::string, std::uint64_t> by_bitstring() const {
        std::map<std::string, std::uint64_t> out;
        for (const auto &[k, v] : counts_) out[index_to_bitstring(k, width_)] = v;
        return out;
    }

   private:
    std::size_t width_;
    std::uint64_t shots_ = 0;
    std::map<std::uint64_t, std::uint64_t> counts_;
};

/// Samples `shots` outcomes from the diagonal of `state`; with `readout` given, each qubit's
/// bit is then flipped independently per its confusion column.
inline CountsTable measure_counts(const DensityMatrix &state, std::uint64_t shots, std::span<const Confusion> readout,
                                  CounterRng &rng) {
    if (shots < 1) throw std::invalid_argument("shots must be at least 1");
    const std::size_t n = state.num_qubits();
    if (!readout.empty() && readout.size() != n) {
        throw std::invalid_argument("readout confusion must have one entry per qubit");
    }
    std::vector<double> cdf = state.diagonal();
    double total = 0;
    for (double &p : cdf) {
        total += std::max(p, 0.0);
        p = total;
    }
    CountsTable out(n);
    for (std::uint64_t s = 0; s < shots; ++s) {
        double u = rng.uniform() * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::uint64_t index = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(
            it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
        for (std::size_t q = 0; q < readout.size(); ++q) {
            bool one = (index >> q) & 1;
            double flip = one ? readout[q].p0_given1() : readout[q].p1_given0();
            if (flip > 0 && rng.uniform() < flip) index ^= std::uint64_t{1} << q;
        }
        out.add(index);
    }
    return out;
}

inline CountsTable measure_counts(const DensityMatrix &state, std::uint64_t shots, std::span<const Confusion> readout,
                                  std::uint64_t seed) {
    CounterRng rng(seed, Stream::shots, {});
    return measure_counts(state, shots, readout, rng);
}

/// Dense quasi-probability vector over basis indices.
struct QuasiDistribution {
    std::size_t width = 0;
    std::vector<double> probs;

    double total() const {
        double t = 0;
        for (double p : probs) t += p;
        return t;
    }
};

inline void check_width(std::size_t got, const Observable &obs) {
    if (got != obs.width()) {
        throw std::invalid_argument("width " + std::to_string(got) + " does not match observable width " +
                                    std::to_string(obs.width()));
    }
}

inline double expectation(const CountsTable &counts, const Observable &obs) {
    check_width(counts.width(), obs);
    if (counts.shots() == 0) throw std::invalid_argument("counts table is empty");
    double acc = 0;
    for (const auto &[index, n] : counts.counts()) acc += obs.weight(index) * static_cast<double>(n);
    return acc / static_cast<double>(counts.shots());
}

inline double expectation(const QuasiDistribution &dist, const Observable &obs) {
    check_width(dist.width, obs);
    std::vector<double> w = obs.weights();
    double acc = 0;
    for (std::size_t k = 0; k < w.size(); ++k) acc += w[k] * dist.probs[k];
    return acc;
}

/// Exact expectation from the state diagonal.
inline double expectation(const DensityMatrix &state, const Observable &obs) {
    check_width(state.num_qubits(), obs);
    std::vector<double> w = obs.weights();
    std::vector<double> d = state.diagonal();
    double acc = 0;
    for (std::size_t k = 0; k < w.size(); ++k) acc += w[k] * d[k];
    return acc;
}

/// Applies the inverse of the tensor product of per-qubit confusion matrices to the
/// empirical distribution. Negative entries are kept.
inline QuasiDistribution readout_mitigate(const CountsTable &counts, std::span<const Confusion> confusion) {
    const std::size_t n = counts.width();
    if (confusion.size() != n) throw std::invalid_argument("confusion must have one entry per qubit");
    if (n > 20) throw std::invalid_argument("readout mitigation supports at most 20 qubits");
    QuasiDistribution out{n, std::vector<double>(std::size_t{1} << n, 0.0)};
    for (const auto &[index, c] : counts.counts()) out.probs[index] = static_cast<double>(c) / counts.shots();
    for (std::size_t q = 0; q < n; ++q) {
        const auto &m = confusion[q].m;
        if (!confusion[q].column_stochastic()) {
            throw std::invalid_argument("confusion matrix of qubit " + std::to_string(q) + " is not column-stochastic");
        }
        double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if (std::abs(det) < 1e-12) {
            throw std::invalid_argument("confusion matrix of qubit " + std::to_string(q) + " is singular");
        }
        const double i00 = m[1][1] / det, i01 = -m[0][1] / det, i10 = -m[1][0] / det, i11 = m[0][0] / det;
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t k = 0; k < out.probs.size(); ++k) {
            if (k & bit) continue;
            double a = out.probs[k], b = out.probs[k | bit];
            out.probs[k] = i00 * a + i01 * b;
            out.probs[k | bit] = i10 * a + i11 * b;
        }
    }
    return out;
}

}  // namespace azne

#endif
