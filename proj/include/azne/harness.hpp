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

#ifndef AZNE_HARNESS_HPP
#define AZNE_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "azne/adaptive.hpp"
#include "azne/benchmarks.hpp"
#include "azne/circuit.hpp"
#include "azne/extrapolation.hpp"
#include "azne/filtering.hpp"
#include "azne/folding.hpp"
#include "azne/noise.hpp"
#include "azne/rational.hpp"
#include "azne/rng.hpp"
#include "azne/simulator.hpp"

namespace azne {

/// Mitigation methods. The IC-ZNE+ASF variants extrapolate linearly in measured error
/// strength over adaptively chosen factors.
enum class Method { szne, asf_m, asf_b, ic_zne, ic_zne_asf_m, ic_zne_asf_b };

enum class FilterKind { none, global, epsilon0, local2d, global2d };

inline const std::vector<Method> &all_methods() {
    static const std::vector<Method> m{Method::szne,   Method::asf_m,        Method::asf_b,
                                       Method::ic_zne, Method::ic_zne_asf_m, Method::ic_zne_asf_b};
    return m;
}

inline const std::vector<FilterKind> &all_filters() {
    static const std::vector<FilterKind> f{FilterKind::none, FilterKind::global, FilterKind::epsilon0,
                                           FilterKind::local2d, FilterKind::global2d};
    return f;
}

inline const char *method_name(Method m) {
    switch (m) {
        case Method::szne:
            return "sZNE";
        case Method::asf_m:
            return "ASF-M";
        case Method::asf_b:
            return "ASF-B";
        case Method::ic_zne:
            return "IC-ZNE";
        case Method::ic_zne_asf_m:
            return "IC-ZNE+ASF-M";
        case Method::ic_zne_asf_b:
            return "IC-ZNE+ASF-B";
    }
    return "?";
}

inline Method method_from_name(const std::string &s) {
    for (Method m : all_methods()) {
        if (s == method_name(m)) return m;
    }
    throw std::invalid_argument("unknown method '" + s + "'");
}

inline const char *filter_name(FilterKind f) {
    switch (f) {
        case FilterKind::none:
            return "none";
        case FilterKind::global:
            return "global";
        case FilterKind::epsilon0:
            return "epsilon0";
        case FilterKind::local2d:
            return "local2D";
        case FilterKind::global2d:
            return "global2D";
    }
    return "?";
}

inline FilterKind filter_from_name(const std::string &s) {
    for (FilterKind f : all_filters()) {
        if (s == filter_name(f)) return f;
    }
    throw std::invalid_argument("unknown filter '" + s + "'");
}

/// Which error estimate a method plans with.
enum class PlanKind { standard, calibration, measured };

inline PlanKind plan_kind(Method m) {
    switch (m) {
        case Method::asf_m:
        case Method::ic_zne_asf_m:
            return PlanKind::calibration;
        case Method::asf_b:
        case Method::ic_zne_asf_b:
            return PlanKind::measured;
        default:
            return PlanKind::standard;
    }
}

inline bool linear_in_epsilon(Method m) {
    return m == Method::ic_zne || m == Method::ic_zne_asf_m || m == Method::ic_zne_asf_b;
}

struct ExperimentConfig {
    std::string benchmark = "grover";
    /// Overrides the named benchmark when set.
    std::optional<Benchmark> custom;
    std::vector<Method> methods{Method::szne, Method::asf_m, Method::asf_b, Method::ic_zne};
    std::vector<FilterKind> filters{FilterKind::none, FilterKind::global, FilterKind::epsilon0};
    std::size_t runs = 50;
    std::size_t twirls = 16;
    std::uint64_t shots = 625;
    std::uint64_t epsilon0_shots = 10000;
    std::uint64_t epsilon_shots = 10000;
    std::size_t k = 3;
    double xi = 0.125;
    bool clamp = true;
    std::vector<std::int64_t> standard_factors{1, 3, 5};
    NoiseProcess noise;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    /// Without single-qubit noise, the per-CNOT depolarizing channel commutes with every Pauli
    /// frame, so a twirled circuit yields exactly the state of its untwirled folded circuit.
    /// When set, that state is computed once per fold assignment and shared across twirls.
    bool reuse_twirl_states = true;

    Benchmark resolve_benchmark() const { return custom ? *custom : build_benchmark(benchmark); }

    void validate() const {
        if (runs < 1) throw std::invalid_argument("runs must be >= 1");
        if (twirls < 1) throw std::invalid_argument("twirls must be >= 1");
        if (shots < 1 || epsilon0_shots < 1 || epsilon_shots < 1) throw std::invalid_argument("shots must be >= 1");
        if (k < 2) throw std::invalid_argument("k must be >= 2");
        if (!(xi > 0)) throw std::invalid_argument("xi must be positive");
        if (methods.empty()) throw std::invalid_argument("no methods selected");
        if (filters.empty()) throw std::invalid_argument("no filters selected");
        noise.validate();
    }
};

struct SampleRecord {
    Rational lambda{1};
    std::uint32_t twirl = 0;
    double value = 0;
    /// Error strength of this folded, twirled circuit (only for IC-ZNE factors).
    std::optional<double> epsilon;
};

/// One ZNE repetition.
struct RunRecord {
    std::uint64_t run_id = 0;
    bool outlier = false;
    double common_factor = 1;
    std::size_t clamped_pairs = 0;
    std::optional<ErrorEstimate> measured;
    std::optional<ErrorEstimate> calibration;
    std::map<PlanKind, ScalingPlan> plans;
    /// Set when a plan fell back to the unscaled circuit.
    std::map<PlanKind, std::string> plan_notes;
    std::vector<SampleRecord> samples;
    std::map<Method, FitResult> mitigated;
    std::string error;

    bool aborted() const { return !error.empty(); }
};

inline double rmse(const std::vector<double> &estimates, double ideal) {
    if (estimates.empty()) throw std::invalid_argument("rmse of an empty set");
    double ss = 0;
    for (double e : estimates) ss += (e - ideal) * (e - ideal);
    return std::sqrt(ss / static_cast<double>(estimates.size()));
}

/// 100 (1 - method / baseline); negative when the method is worse.
inline double error_reduction(double rmse_method, double rmse_baseline) {
    if (!(rmse_baseline > 0)) throw std::invalid_argument("baseline RMSE must be positive");
    return 100.0 * (1.0 - rmse_method / rmse_baseline);
}

namespace detail {

inline std::uint64_t lambda_tag(Rational r) {
    return (static_cast<std::uint64_t>(r.num()) << 32) ^ static_cast<std::uint64_t>(r.den());
}

inline ErrorEstimate calibration_estimate(const Circuit &circuit, const NoiseProcess &noise) {
    if (noise.uniform_cx) {
        ErrorEstimate e;
        e.source = EstimateSource::calibration;
        e.q = circuit.width();
        e.epsilon0 = *noise.uniform_cx * static_cast<double>(circuit.cnot_count()) * noise.scale;
        return e;
    }
    return estimate_epsilon_from_calibration(circuit, noise.base);
}

inline ScalingPlan plan_or_unscaled(const Circuit &circuit, const ErrorEstimate &est, const ExperimentConfig &cfg,
                                    std::string &note) {
    try {
        return build_plan(circuit, est, cfg.xi, cfg.k, cfg.clamp);
    } catch (const ZeroErrorStrength &) {
        note = "zero_error_strength";
        return ScalingPlan::unscaled();
    }
}

}  // namespace detail

/// Simulates one repetition: epoch, error estimates, plans, and samples for every factor used.
inline RunRecord simulate_run(const ExperimentConfig &cfg, const Benchmark &bench, std::uint64_t run_id) {
    RunRecord rec;
    rec.run_id = run_id;
    const Circuit &circuit = bench.circuit;
    const NoiseEpoch epoch = sample_epoch(cfg.noise, run_id);
    rec.outlier = epoch.outlier();
    rec.common_factor = epoch.common_factor();
    rec.clamped_pairs = epoch.clamped_pairs();

    std::set<PlanKind> kinds;
    bool need_epsilon = false;
    for (Method m : cfg.methods) {
        kinds.insert(plan_kind(m));
        need_epsilon = need_epsilon || linear_in_epsilon(m);
    }
    try {
        // The measured estimate also feeds the run-level filter, so it is always taken.
        CounterRng eps_rng(cfg.seed, Stream::epsilon0_shots, {run_id});
        rec.measured = measure_epsilon0(circuit, epoch, cfg.epsilon0_shots, eps_rng);
        if (kinds.contains(PlanKind::calibration)) rec.calibration = detail::calibration_estimate(circuit, cfg.noise);

        for (PlanKind kind : kinds) {
            std::string note;
            if (kind == PlanKind::standard) {
                rec.plans[kind] = ScalingPlan::fixed(cfg.standard_factors);
            } else {
                const ErrorEstimate &est = kind == PlanKind::measured ? *rec.measured : *rec.calibration;
                rec.plans[kind] = detail::plan_or_unscaled(circuit, est, cfg, note);
            }
            if (!note.empty()) rec.plan_notes[kind] = note;
        }

        // Factors needing a per-sample error strength.
        std::set<Rational> all, with_epsilon;
        for (Method m : cfg.methods) {
            for (Rational l : rec.plans.at(plan_kind(m)).lambdas) {
                all.insert(l);
                if (linear_in_epsilon(m)) with_epsilon.insert(l);
            }
        }
        (void)need_epsilon;

        const std::int64_t nc = static_cast<std::int64_t>(circuit.cnot_count());
        const bool reuse = cfg.reuse_twirl_states && !cfg.noise.single_qubit_noise;
        for (Rational l : all) {
            const std::uint64_t tag = detail::lambda_tag(l);
            std::map<std::vector<std::uint32_t>, std::pair<DensityMatrix, std::optional<DensityMatrix>>> cache;
            for (std::uint32_t t = 0; t < cfg.twirls; ++t) {
                Circuit scaled = circuit;
                FoldAssignment assignment;
                if (nc > 0) {
                    CounterRng fold_rng(cfg.seed, Stream::fold, {run_id, tag, t});
                    assignment = assign_insertions(l, nc, fold_rng);
                    scaled = fold(circuit, assignment);
                }
                CounterRng twirl_rng(cfg.seed, Stream::twirl, {run_id, tag, t});
                Circuit twirled = twirl(scaled, twirl_rng);
                const Circuit &simulated = reuse ? scaled : twirled;
                auto cached = cache.find(assignment.insertions);
                if (cached == cache.end()) {
                    DensityMatrix st = evolve(simulated, epoch.gate_noise(simulated));
                    std::optional<DensityMatrix> back;
                    if (with_epsilon.contains(l)) {
                        Circuit inv = invert(simulated);
                        back = evolve(inv, epoch.gate_noise(inv), st);
                    }
                    cached = cache.emplace(reuse ? assignment.insertions : std::vector<std::uint32_t>{},
                                           std::make_pair(std::move(st), std::move(back)))
                                 .first;
                }
                const DensityMatrix &state = cached->second.first;

                std::vector<Confusion> readout = epoch.readout(twirled);
                CounterRng shot_rng(cfg.seed, Stream::shots, {run_id, tag, t});
                CountsTable counts = measure_counts(state, cfg.shots, readout, shot_rng);
                SampleRecord s;
                s.lambda = l;
                s.twirl = t;
                s.value = readout.empty() ? expectation(counts, bench.observable)
                                          : expectation(readout_mitigate(counts, readout), bench.observable);
                if (with_epsilon.contains(l)) {
                    CounterRng e_rng(cfg.seed, Stream::epsilon_shots, {run_id, tag, t});
                    CountsTable c2 = measure_counts(*cached->second.second, cfg.epsilon_shots, readout, e_rng);
                    // Survival below the formula's domain means the circuit is fully scrambled;
                    // it is pinned to the domain edge.
                    const double d = std::ldexp(1.0, static_cast<int>(circuit.width()));
                    const double p0 = std::max(survival_probability(c2, readout), 1.0 / (d + 1.0));
                    s.epsilon = epsilon_from_p0(p0, circuit.width());
                }
                rec.samples.push_back(s);
                if (!reuse) cache.clear();
            }
        }
    } catch (const std::exception &ex) {
        rec.error = ex.what();
        rec.samples.clear();
    }
    return rec;
}

/// One decision per (method, filter, run, factor, twirl).
struct SampleDecision {
    std::uint64_t run_id = 0;
    std::size_t factor_index = 0;
    Rational lambda{1};
    std::uint32_t twirl = 0;
    double x = 0;
    double value = 0;
    FilterDecision decision;
};

struct ArmResult {
    Method method = Method::szne;
    FilterKind filter = FilterKind::none;
    double rmse = 0;
    std::optional<double> reduction_vs_szne;
    std::optional<double> reduction_vs_unfiltered;
    std::size_t total_runs = 0;
    std::size_t retained_runs = 0;
    std::size_t total_samples = 0;
    std::size_t retained_samples = 0;
    std::string epsilon_source;
    std::vector<std::pair<std::uint64_t, double>> estimates;
    std::vector<std::pair<std::uint64_t, std::string>> failed_fits;
    std::vector<SampleDecision> decisions;
    /// Run-level decisions of the ε0 filter, by run id.
    std::map<std::uint64_t, FilterDecision> run_decisions;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::string benchmark;
    double ideal = 0;
    std::vector<RunRecord> runs;
    std::vector<ArmResult> arms;
    std::size_t aborted_runs = 0;

    const ArmResult &arm(Method m, FilterKind f) const {
        for (const auto &a : arms) {
            if (a.method == m && a.filter == f) return a;
        }
        throw std::out_of_range(std::string("no result for ") + method_name(m) + "/" + filter_name(f));
    }
};

namespace detail {

struct ArmSample {
    std::uint64_t run_id;
    std::size_t factor_index;
    const SampleRecord *rec;
    double x;
    double y;  // error coordinate for the 2D filters
};

inline void apply_2d(std::vector<ArmSample> &samples, const std::vector<std::size_t> &idx,
                     std::vector<FilterDecision> &out) {
    std::vector<Point2> pts;
    for (std::size_t i : idx) pts.push_back({samples[i].rec->value, samples[i].y});
    try {
        Gaussian2D g = fit_gaussian2d(pts);
        std::vector<bool> keep = filter_2d(pts, g);
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (!keep[j]) out[idx[j]] = {false, FilterReason::two_sigma};
        }
    } catch (const std::invalid_argument &) {
        for (std::size_t i : idx) out[i] = {true, FilterReason::degenerate_passthrough};
    }
}

}  // namespace detail

/// Filters and fits one (method, filter) arm over completed runs.
inline ArmResult analyze_arm(const ExperimentConfig &cfg, double ideal, const std::vector<RunRecord> &runs,
                             Method method, FilterKind filter) {
    ArmResult arm;
    arm.method = method;
    arm.filter = filter;
    const PlanKind kind = plan_kind(method);
    const bool linear = linear_in_epsilon(method);

    std::vector<detail::ArmSample> samples;
    std::vector<const RunRecord *> live;
    for (const RunRecord &r : runs) {
        if (r.aborted() || !r.plans.contains(kind)) continue;
        live.push_back(&r);
        const auto &lambdas = r.plans.at(kind).lambdas;
        const double eps0 = r.measured ? r.measured->epsilon0 : (r.calibration ? r.calibration->epsilon0 : 0.0);
        for (const SampleRecord &s : r.samples) {
            auto it = std::find(lambdas.begin(), lambdas.end(), s.lambda);
            if (it == lambdas.end()) continue;
            detail::ArmSample a{r.run_id, static_cast<std::size_t>(it - lambdas.begin()), &s, 0, 0};
            a.x = linear ? s.epsilon.value_or(std::nan("")) : s.lambda.to_double();
            a.y = s.epsilon.value_or(eps0);
            samples.push_back(a);
        }
    }
    arm.total_runs = live.size();
    arm.total_samples = samples.size();
    arm.epsilon_source = "measured";

    std::vector<FilterDecision> dec(samples.size());
    switch (filter) {
        case FilterKind::none:
            break;
        case FilterKind::epsilon0: {
            std::vector<double> eps;
            for (const RunRecord *r : live) {
                if (r->measured) {
                    eps.push_back(r->measured->epsilon0);
                } else {
                    eps.push_back(r->calibration ? r->calibration->epsilon0 : 0.0);
                    arm.epsilon_source = "mixed";
                }
            }
            GroupFilter g = filter_runs_epsilon0(eps, cfg.seed);
            std::map<std::uint64_t, FilterDecision> by_run;
            for (std::size_t i = 0; i < live.size(); ++i) by_run[live[i]->run_id] = g.decisions[i];
            for (std::size_t i = 0; i < samples.size(); ++i) dec[i] = by_run.at(samples[i].run_id);
            arm.run_decisions = by_run;
            break;
        }
        case FilterKind::global: {
            std::map<std::size_t, std::vector<std::size_t>> groups;
            for (std::size_t i = 0; i < samples.size(); ++i) groups[samples[i].factor_index].push_back(i);
            for (const auto &[j, idx] : groups) {
                std::vector<double> v;
                for (std::size_t i : idx) v.push_back(samples[i].rec->value);
                GroupFilter g = filter_global({v}, cfg.seed)[0];
                for (std::size_t n = 0; n < idx.size(); ++n) dec[idx[n]] = g.decisions[n];
            }
            break;
        }
        case FilterKind::local2d:
        case FilterKind::global2d: {
            std::map<std::pair<std::uint64_t, std::size_t>, std::vector<std::size_t>> groups;
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const std::uint64_t run_key = filter == FilterKind::local2d ? samples[i].run_id : 0;
                groups[{run_key, samples[i].factor_index}].push_back(i);
            }
            for (const auto &[key, idx] : groups) detail::apply_2d(samples, idx, dec);
            break;
        }
    }

    std::map<std::uint64_t, std::vector<Sample>> per_run;
    for (const RunRecord *r : live) per_run[r->run_id];
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto &a = samples[i];
        SampleDecision d{a.run_id, a.factor_index, a.rec->lambda, a.rec->twirl, a.x, a.rec->value, dec[i]};
        arm.decisions.push_back(d);
        if (dec[i].retained) {
            ++arm.retained_samples;
            per_run[a.run_id].push_back({a.x, a.rec->value, a.run_id, a.rec->twirl, true});
        }
    }
    std::vector<double> estimates;
    for (const auto &[run_id, pts] : per_run) {
        if (pts.empty()) continue;
        try {
            FitResult fit = linear ? fit_linear(pts) : fit_exponential(pts);
            if (!std::isfinite(fit.zero_noise_value)) throw std::runtime_error("non-finite extrapolation");
            arm.estimates.emplace_back(run_id, fit.zero_noise_value);
            estimates.push_back(fit.zero_noise_value);
        } catch (const std::exception &ex) {
            arm.failed_fits.emplace_back(run_id, ex.what());
        }
    }
    arm.retained_runs = estimates.size();
    arm.rmse = estimates.empty() ? std::nan("") : rmse(estimates, ideal);
    return arm;
}

/// Re-filters and re-fits persisted runs.
inline ExperimentReport analyze(const ExperimentConfig &cfg, const std::string &benchmark, double ideal,
                                std::vector<RunRecord> runs) {
    ExperimentReport rep;
    rep.config = cfg;
    rep.benchmark = benchmark;
    rep.ideal = ideal;
    rep.runs = std::move(runs);
    for (const auto &r : rep.runs) rep.aborted_runs += r.aborted();
    for (FilterKind f : cfg.filters) {
        for (Method m : cfg.methods) rep.arms.push_back(analyze_arm(cfg, ideal, rep.runs, m, f));
    }
    for (auto &a : rep.arms) {
        for (const auto &b : rep.arms) {
            if (b.method == Method::szne && b.filter == FilterKind::none && b.rmse > 0) {
                a.reduction_vs_szne = error_reduction(a.rmse, b.rmse);
            }
            if (b.method == a.method && b.filter == FilterKind::none && b.rmse > 0) {
                a.reduction_vs_unfiltered = error_reduction(a.rmse, b.rmse);
            }
        }
    }
    return rep;
}

/// Fills `mitigated` with the unfiltered fit of each method.
inline void fit_unfiltered(const ExperimentConfig &cfg, RunRecord &rec) {
    if (rec.aborted()) return;
    for (Method m : cfg.methods) {
        const auto &lambdas = rec.plans.at(plan_kind(m)).lambdas;
        std::vector<Sample> pts;
        for (const auto &s : rec.samples) {
            if (std::find(lambdas.begin(), lambdas.end(), s.lambda) == lambdas.end()) continue;
            double x = linear_in_epsilon(m) ? s.epsilon.value_or(std::nan("")) : s.lambda.to_double();
            pts.push_back({x, s.value, rec.run_id, s.twirl, true});
        }
        try {
            rec.mitigated[m] = linear_in_epsilon(m) ? fit_linear(pts) : fit_exponential(pts);
        } catch (const std::exception &) {
        }
    }
}

/// Runs the full protocol. Runs may execute on several threads; results do not depend on
/// the thread count.
inline ExperimentReport run_experiment(const ExperimentConfig &cfg) {
    cfg.validate();
    const Benchmark bench = cfg.resolve_benchmark();
    std::vector<RunRecord> runs(cfg.runs);
    const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.runs)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cfg.runs; i = next++) {
            runs[i] = simulate_run(cfg, bench, i);
            fit_unfiltered(cfg, runs[i]);
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return analyze(cfg, cfg.custom ? bench.circuit.label() : cfg.benchmark, bench.observable.ideal_value(),
                   std::move(runs));
}

struct SweepRow {
    double xi = 0;
    Method method = Method::szne;
    FilterKind filter = FilterKind::none;
    double rmse = 0;
    std::size_t retained_runs = 0;
    /// Mean sample value at each run's largest factor, averaged over runs.
    double deepest_mean = 0;
};

/// Mean over runs of the mean sample value at the run's largest factor.
inline double deepest_factor_mean(const ExperimentReport &rep, Method m) {
    const PlanKind kind = plan_kind(m);
    double acc = 0;
    std::size_t n = 0;
    for (const auto &r : rep.runs) {
        if (r.aborted() || !r.plans.contains(kind)) continue;
        Rational top = r.plans.at(kind).lambdas.back();
        double s = 0;
        std::size_t c = 0;
        for (const auto &smp : r.samples) {
            if (smp.lambda == top) {
                s += smp.value;
                ++c;
            }
        }
        if (c) {
            acc += s / static_cast<double>(c);
            ++n;
        }
    }
    return n ? acc / static_cast<double>(n) : std::nan("");
}

/// run_experiment per xi with the same seed, so every arm sees the same epochs and shots.
inline std::vector<SweepRow> sweep_xi(const ExperimentConfig &base, const std::vector<double> &grid,
                                      std::vector<ExperimentReport> *reports = nullptr) {
    if (grid.empty()) throw std::invalid_argument("xi grid is empty");
    for (double xi : grid) {
        if (!(xi > 0)) throw std::invalid_argument("xi values must be positive");
    }
    std::vector<SweepRow> rows;
    for (double xi : grid) {
        ExperimentConfig cfg = base;
        cfg.xi = xi;
        ExperimentReport rep = run_experiment(cfg);
        for (const auto &a : rep.arms) {
            rows.push_back({xi, a.method, a.filter, a.rmse, a.retained_runs, deepest_factor_mean(rep, a.method)});
        }
        if (reports) reports->push_back(std::move(rep));
    }
    return rows;
}

}  // namespace azne

#endif
