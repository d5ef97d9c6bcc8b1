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

#ifndef AZNE_ADAPTIVE_HPP
#define AZNE_ADAPTIVE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "azne/calibration.hpp"
#include "azne/circuit.hpp"
#include "azne/folding.hpp"
#include "azne/noise.hpp"
#include "azne/rational.hpp"
#include "azne/rng.hpp"
#include "azne/simulator.hpp"

namespace azne {

/// Raised when a plan is requested for a circuit with no measurable error.
class ZeroErrorStrength : public std::domain_error {
   public:
    ZeroErrorStrength() : std::domain_error("error strength is zero; only the unscaled circuit is usable") {}
};

enum class EstimateSource { measured, calibration };

inline const char *source_name(EstimateSource s) { return s == EstimateSource::measured ? "measured" : "calibration"; }

struct ErrorEstimate {
    double epsilon0 = 0;
    EstimateSource source = EstimateSource::measured;
    std::optional<double> p0;
    std::size_t q = 0;
};

/// Error strength from the all-zeros survival probability of circuit + inverse on q qubits:
/// eps = (1 - sqrt(p0 - (1 - p0)/2^q)) / (1 + 1/2^q).
/// This inverts p0 = (1 - eps)^2 + eps^2 / 2^q exactly.
inline double epsilon_from_p0(double p0, std::size_t q) {
    if (q < 1 || q > 62) throw std::invalid_argument("qubit count must be in 1..62");
    const double d = std::ldexp(1.0, static_cast<int>(q));
    if (!(p0 <= 1)) throw std::invalid_argument("survival probability above 1");
    const double radicand = p0 - (1 - p0) / d;
    if (!(radicand >= 0)) {
        throw std::invalid_argument("survival probability " + std::to_string(p0) + " is below 1/(2^q + 1)");
    }
    return (1 - std::sqrt(radicand)) / (1 + 1 / d);
}

/// circuit followed by its inverse, keeping the layout.
inline Circuit with_inverse(const Circuit &circuit) {
    Circuit out(circuit.width(), circuit.label());
    out.append(circuit);
    out.append(invert(circuit));
    out.set_layout(circuit.layout());
    return out;
}

/// All-zeros frequency from counts, readout-mitigated when a confusion model is supplied.
/// Mitigated values are clipped into [0, 1] since they feed a probability formula.
inline double survival_probability(const CountsTable &counts, std::span<const Confusion> readout) {
    if (readout.empty()) return counts.frequency(0);
    QuasiDistribution q = readout_mitigate(counts, readout);
    return std::min(1.0, std::max(0.0, q.probs[0]));
}

/// Continues evolution of `state` (already prepared by `circuit`) through the inverse and
/// estimates the error strength from sampled all-zeros survival.
inline ErrorEstimate measure_epsilon_after(const Circuit &circuit, DensityMatrix state, const NoiseEpoch &epoch,
                                           std::uint64_t shots, CounterRng &rng) {
    Circuit inv = invert(circuit);
    state = evolve(inv, epoch.gate_noise(inv), std::move(state));
    std::vector<Confusion> readout = epoch.readout(circuit);
    CountsTable counts = measure_counts(state, shots, readout, rng);
    ErrorEstimate e;
    e.source = EstimateSource::measured;
    e.q = circuit.width();
    e.p0 = survival_probability(counts, readout);
    e.epsilon0 = epsilon_from_p0(*e.p0, e.q);
    return e;
}

/// Runs circuit + inverse under the epoch and applies epsilon_from_p0 to the all-zeros frequency.
inline ErrorEstimate measure_epsilon0(const Circuit &circuit, const NoiseEpoch &epoch, std::uint64_t shots,
                                      CounterRng &rng) {
    if (shots < 1) throw std::invalid_argument("shots must be at least 1");
    DensityMatrix state = evolve(circuit, epoch.gate_noise(circuit));
    return measure_epsilon_after(circuit, std::move(state), epoch, shots, rng);
}

/// Sum of calibration CX errors over the circuit's CNOTs, each looked up on its physical pair
/// in the orientation the gate uses.
inline ErrorEstimate estimate_epsilon_from_calibration(const Circuit &circuit, const CalibrationTable &table) {
    ErrorEstimate e;
    e.source = EstimateSource::calibration;
    e.q = circuit.width();
    std::vector<std::string> missing;
    for (const Gate &g : circuit.gates()) {
        if (!g.is_cnot()) continue;
        QubitPair pair{circuit.physical(g.control()), circuit.physical(g.target())};
        if (!table.has_cx(pair)) {
            missing.push_back(pair_name(pair));
            continue;
        }
        e.epsilon0 += table.cx_error(pair);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto &m : missing) list += (list.empty() ? "" : ", ") + m;
        throw std::invalid_argument("cx pairs missing from calibration: " + list);
    }
    return e;
}

/// xi / eps0.
inline double lambda_max(double epsilon0, double xi) {
    if (!(xi > 0)) throw std::invalid_argument("xi must be positive");
    if (epsilon0 == 0) throw ZeroErrorStrength();
    if (!(epsilon0 > 0)) throw std::invalid_argument("error strength must be positive");
    return xi / epsilon0;
}

/// Smallest lambda_max that still leaves room for k distinct realizable factors.
inline double lambda_max_floor(std::size_t k, std::size_t n_cnots) {
    return 1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(n_cnots);
}

/// lambda'_j = lambda_max^((j - 1)/(k - 1)), j = 1..k.
inline std::vector<double> exponential_factors(double lambda_max_value, std::size_t k) {
    if (!(lambda_max_value >= 1)) throw std::invalid_argument("lambda_max must be >= 1");
    if (k < 2) throw std::invalid_argument("need at least two factors");
    std::vector<double> f(k);
    for (std::size_t j = 0; j < k; ++j) {
        f[j] = std::pow(lambda_max_value, static_cast<double>(j) / static_cast<double>(k - 1));
    }
    f.back() = lambda_max_value;
    return f;
}

struct ScalingPlan {
    double xi = 0;
    double lambda_max_unclamped = 0;
    double lambda_max = 0;
    bool clamped = false;
    std::size_t k = 0;
    std::vector<double> desired;
    std::vector<Rational> lambdas;

    /// Fixed integer factors, no planning.
    static ScalingPlan fixed(const std::vector<std::int64_t> &factors) {
        ScalingPlan p;
        p.k = factors.size();
        for (auto f : factors) {
            if (f < 1 || f % 2 == 0) throw std::invalid_argument("fixed factors must be odd positive integers");
            if (!p.lambdas.empty() && Rational(f) <= p.lambdas.back()) {
                throw std::invalid_argument("fixed factors must be strictly increasing");
            }
            p.desired.push_back(static_cast<double>(f));
            p.lambdas.emplace_back(f);
        }
        p.lambda_max = p.lambda_max_unclamped = p.desired.empty() ? 1 : p.desired.back();
        return p;
    }

    static ScalingPlan standard() { return fixed({1, 3, 5}); }

    /// Only the unscaled circuit.
    static ScalingPlan unscaled() {
        ScalingPlan p;
        p.k = 1;
        p.lambda_max = p.lambda_max_unclamped = 1;
        p.desired = {1};
        p.lambdas = {Rational(1)};
        return p;
    }
};

/// lambda_max -> exponential factors -> realizable factors, duplicates merged.
inline ScalingPlan build_plan(std::size_t n_cnots, const ErrorEstimate &estimate, double xi, std::size_t k,
                              bool clamp = true) {
    if (n_cnots < 1) throw std::invalid_argument("circuit must contain at least one CNOT");
    ScalingPlan p;
    p.xi = xi;
    p.k = k;
    p.lambda_max_unclamped = lambda_max(estimate.epsilon0, xi);
    p.lambda_max = p.lambda_max_unclamped;
    const double floor = lambda_max_floor(k, n_cnots);
    if (clamp && p.lambda_max < floor) {
        p.lambda_max = floor;
        p.clamped = true;
    }
    p.desired = exponential_factors(p.lambda_max, k);
    for (double d : p.desired) {
        Rational r = realizable_lambda(d, static_cast<std::int64_t>(n_cnots));
        if (p.lambdas.empty() || r > p.lambdas.back()) p.lambdas.push_back(r);
    }
    if (p.lambdas.size() < 2) {
        throw std::invalid_argument("fewer than two distinct realizable scaling factors");
    }
    return p;
}

inline ScalingPlan build_plan(const Circuit &circuit, const ErrorEstimate &estimate, double xi, std::size_t k,
                              bool clamp = true) {
    return build_plan(circuit.cnot_count(), estimate, xi, k, clamp);
}

}  // namespace azne

#endif
