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

#ifndef AZNE_NOISE_HPP
#define AZNE_NOISE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "azne/calibration.hpp"
#include "azne/circuit.hpp"
#include "azne/rng.hpp"
#include "azne/simulator.hpp"

namespace azne {

/// Upper bound on an effective two-qubit depolarizing rate.
inline constexpr double max_cx_rate = 0.75;

/// Synthetic device noise: a calibration snapshot plus run-to-run drift and rare outlier epochs.
///
/// Per epoch, either (with probability outlier_prob) every CX rate is multiplied by
/// outlier_scale, or each unordered pair gets an independent log-normal factor
/// exp(drift_sigma * Z). `common_sigma` adds one shared log-normal factor per epoch, which
/// moves the whole circuit error strength together. `scale` multiplies every base gate rate.
struct NoiseProcess {
    CalibrationTable base;
    std::optional<double> uniform_cx;  // when set, every CX pair starts from this rate instead of the table
    double scale = 1;
    double drift_sigma = 0;
    double common_sigma = 0;
    double outlier_prob = 0;
    double outlier_scale = 1;
    bool readout_enabled = false;
    bool single_qubit_noise = false;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(scale >= 0)) throw std::invalid_argument("noise scale must be >= 0");
        if (!(drift_sigma >= 0)) throw std::invalid_argument("drift_sigma must be >= 0");
        if (!(common_sigma >= 0)) throw std::invalid_argument("common_sigma must be >= 0");
        if (!(outlier_prob >= 0 && outlier_prob <= 1)) throw std::invalid_argument("outlier_prob must be in [0, 1]");
        if (!(outlier_scale >= 1)) throw std::invalid_argument("outlier_scale must be >= 1");
        if (uniform_cx && !(*uniform_cx >= 0 && *uniform_cx <= 1)) {
            throw std::invalid_argument("uniform cx rate outside [0, 1]");
        }
    }

    static NoiseProcess noiseless() {
        NoiseProcess p;
        p.uniform_cx = 0.0;
        return p;
    }

    static NoiseProcess uniform(double rate) {
        NoiseProcess p;
        p.uniform_cx = rate;
        return p;
    }
};

/// Effective noise for one run. Rates are keyed by physical qubit pair.
class NoiseEpoch {
   public:
    std::uint64_t run_index() const { return run_index_; }
    bool outlier() const { return outlier_; }
    double common_factor() const { return common_; }
    /// Number of table pairs whose drifted rate hit the clamp.
    std::size_t clamped_pairs() const { return clamped_; }
    const std::map<QubitPair, double> &table_rates() const { return rates_; }

    /// Effective CX rate on a physical pair.
    double cx_rate(QubitPair pair) const {
        auto it = rates_.find(pair);
        if (it != rates_.end()) return it->second;
        if (process_->uniform_cx) return compute(*process_->uniform_cx, pair).first;
        throw std::out_of_range("no calibration entry for cx pair " + pair_name(pair));
    }

    /// Gate noise for a circuit, translating logical qubits through its layout.
    GateNoise gate_noise(const Circuit &circuit) const {
        GateNoise g;
        g.cnot = PairRates();
        for (const Gate &gate : circuit.gates()) {
            if (!gate.is_cnot()) continue;
            QubitPair phys{circuit.physical(gate.control()), circuit.physical(gate.target())};
            g.cnot.set(gate.control(), gate.target(), cx_rate(phys));
        }
        if (process_->single_qubit_noise) {
            g.single_qubit.resize(circuit.width(), 0.0);
            for (std::uint32_t q = 0; q < circuit.width(); ++q) {
                const std::uint32_t p = circuit.physical(q);
                if (process_->base.has_qubit(p)) {
                    const auto &props = process_->base.qubit(p);
                    g.single_qubit[q] = std::min(1.0, std::max(props.sx, props.x) * process_->scale);
                }
            }
        }
        return g;
    }

    /// Per-logical-qubit readout confusion; empty when readout noise is disabled.
    std::vector<Confusion> readout(const Circuit &circuit) const {
        std::vector<Confusion> out;
        if (!process_->readout_enabled) return out;
        for (std::uint32_t q = 0; q < circuit.width(); ++q) {
            out.push_back(Confusion::symmetric(process_->base.qubit(circuit.physical(q)).readout));
        }
        return out;
    }

   private:
    friend NoiseEpoch sample_epoch(const NoiseProcess &process, std::uint64_t run_index);

    std::pair<double, bool> compute(double base_rate, QubitPair pair) const {
        double r = base_rate * process_->scale * common_;
        if (outlier_) {
            r *= process_->outlier_scale;
        } else if (process_->drift_sigma > 0) {
            const std::uint64_t lo = std::min(pair.first, pair.second), hi = std::max(pair.first, pair.second);
            CounterRng rng(process_->seed, Stream::epoch, {run_index_, lo + 1, hi + 1});
            r *= std::exp(process_->drift_sigma * rng.normal());
        }
        if (r > max_cx_rate) return {max_cx_rate, true};
        return {r, false};
    }

    const NoiseProcess *process_ = nullptr;
    std::uint64_t run_index_ = 0;
    bool outlier_ = false;
    double common_ = 1;
    std::size_t clamped_ = 0;
    std::map<QubitPair, double> rates_;
};

/// Deterministic in (process.seed, run_index). The returned epoch refers to `process`,
/// which must outlive it.
inline NoiseEpoch sample_epoch(const NoiseProcess &process, std::uint64_t run_index) {
    process.validate();
    NoiseEpoch e;
    e.process_ = &process;
    e.run_index_ = run_index;
    CounterRng rng(process.seed, Stream::epoch, {run_index});
    e.outlier_ = rng.bernoulli(process.outlier_prob);
    const double z = rng.normal();
    e.common_ = (process.common_sigma > 0 && !e.outlier_) ? std::exp(process.common_sigma * z) : 1.0;
    if (!process.uniform_cx) {
        for (const auto &[pair, rate] : process.base.cx_errors()) {
            auto [r, clamped] = e.compute(rate, pair);
            e.rates_[pair] = r;
            e.clamped_ += clamped;
        }
    }
    return e;
}

}  // namespace azne

#endif
