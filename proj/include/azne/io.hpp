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

#ifndef AZNE_IO_HPP
#define AZNE_IO_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "azne/harness.hpp"
#include "json.hpp"

namespace azne {

using Json = nlohmann::json;

/// %.17g, or "nan"/"inf" for non-finite values.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline void write_json(std::ostream &out, const Json &j, int indent, int depth) {
    auto newline = [&](int d) {
        if (indent < 0) return;
        out << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out << ',';
                first = false;
                newline(depth + 1);
                out << Json(it.key()).dump() << (indent < 0 ? ":" : ": ");
                write_json(out, it.value(), indent, depth + 1);
            }
            newline(depth);
            out << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            bool flat = std::all_of(j.begin(), j.end(), [](const Json &e) { return e.is_primitive(); });
            out << '[';
            bool first = true;
            for (const auto &e : j) {
                if (!first) out << (flat ? ", " : ",");
                first = false;
                if (!flat) newline(depth + 1);
                write_json(out, e, indent, depth + 1);
            }
            if (!flat) newline(depth);
            out << ']';
            return;
        }
        case Json::value_t::number_float: {
            double v = j.get<double>();
            if (!std::isfinite(v)) {
                out << "null";
            } else {
                out << format_double(v);
            }
            return;
        }
        default:
            out << j.dump();
    }
}

inline Json optional_double(const std::optional<double> &v) { return v ? Json(*v) : Json(nullptr); }

inline std::optional<double> read_optional_double(const Json &j, const char *key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

}  // namespace detail

/// JSON text with every float written to 17 significant digits.
inline std::string to_json_text(const Json &j, int indent = 2) {
    std::ostringstream out;
    detail::write_json(out, j, indent, 0);
    out << '\n';
    return out.str();
}

// ---- circuits ----

inline Json observable_to_json(const Observable &o) {
    Json j;
    if (o.kind() == Observable::Kind::qubit_projector) {
        j["qubit"] = o.qubit();
    } else {
        j["bitstrings"] = Json::array();
        for (const auto &[bits, w] : o.terms()) j["bitstrings"].push_back({bits, w});
    }
    j["ideal"] = o.ideal_value();
    return j;
}

inline Observable observable_from_json(const Json &j, std::size_t width) {
    const double ideal = j.at("ideal").get<double>();
    if (j.contains("qubit")) return Observable::qubit_one(width, j.at("qubit").get<std::uint32_t>(), ideal);
    std::vector<std::pair<std::string, double>> terms;
    for (const auto &t : j.at("bitstrings")) {
        if (t.is_string()) {
            terms.emplace_back(t.get<std::string>(), 1.0);
        } else {
            terms.emplace_back(t.at(0).get<std::string>(), t.at(1).get<double>());
        }
    }
    return Observable::bitstrings(width, std::move(terms), ideal);
}

inline Json circuit_to_json(const Circuit &c) {
    Json j;
    j["width"] = c.width();
    if (!c.label().empty()) j["label"] = c.label();
    if (!c.layout().empty()) j["layout"] = c.layout();
    j["gates"] = Json::array();
    for (const Gate &g : c.gates()) {
        Json r;
        r["kind"] = gate_name(g.kind);
        r["qubits"] = g.is_cnot() ? Json{g.qubits[0], g.qubits[1]} : Json{g.qubits[0]};
        r["params"] = g.kind == GateKind::RZ ? Json{g.angle} : Json::array();
        j["gates"].push_back(r);
    }
    return j;
}

/// Accepts {"width": q, "gates": [...]} or a bare gate list followed by a {"width": q} record.
inline Circuit circuit_from_json(const Json &j) {
    Json gates;
    std::optional<std::size_t> width;
    std::string label;
    std::vector<std::uint32_t> layout;
    if (j.is_object()) {
        width = j.at("width").get<std::size_t>();
        gates = j.at("gates");
        if (j.contains("label")) label = j.at("label").get<std::string>();
        if (j.contains("layout")) layout = j.at("layout").get<std::vector<std::uint32_t>>();
    } else if (j.is_array()) {
        gates = Json::array();
        for (const auto &e : j) {
            if (e.contains("width") && !e.contains("kind")) {
                width = e.at("width").get<std::size_t>();
            } else {
                gates.push_back(e);
            }
        }
    } else {
        throw std::invalid_argument("circuit JSON must be an object or an array");
    }
    if (!width) throw std::invalid_argument("circuit JSON has no width");
    Circuit c(*width, label);
    std::size_t index = 0;
    for (const auto &g : gates) {
        const std::string kind = g.at("kind").get<std::string>();
        const auto qubits = g.at("qubits").get<std::vector<std::uint32_t>>();
        const auto params = g.contains("params") ? g.at("params").get<std::vector<double>>() : std::vector<double>{};
        const GateKind k = gate_kind_from_name(kind);
        const std::size_t want_q = k == GateKind::CNOT ? 2 : 1;
        const std::size_t want_p = k == GateKind::RZ ? 1 : 0;
        if (qubits.size() != want_q || params.size() != want_p) {
            throw std::invalid_argument("gate " + std::to_string(index) + " (" + kind + ") expects " +
                                        std::to_string(want_q) + " qubit(s) and " + std::to_string(want_p) +
                                        " parameter(s)");
        }
        switch (k) {
            case GateKind::CNOT:
                c.append(Gate::cnot(qubits[0], qubits[1]));
                break;
            case GateKind::RZ:
                c.append(Gate::rz(qubits[0], params[0]));
                break;
            default:
                c.append(Gate{k, {qubits[0], qubits[0]}, 0});
        }
        ++index;
    }
    c.set_layout(layout);
    return c;
}

/// Circuit file with an embedded "observable" record.
inline Benchmark benchmark_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("observable")) {
        throw std::invalid_argument("circuit file needs an \"observable\" record to be run");
    }
    Circuit c = circuit_from_json(j);
    Observable o = observable_from_json(j.at("observable"), c.width());
    return {std::move(c), std::move(o)};
}

inline Json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return Json::parse(in);
}

// ---- noise profiles ----

/// Profile keys: uniform_cx, scale, drift_sigma, common_sigma, outlier_prob, outlier_scale,
/// readout, single_qubit_noise, cx_errors, qubit_props (paths relative to the profile).
inline NoiseProcess noise_from_json(const Json &j, const std::filesystem::path &base_dir = {}) {
    static const std::set<std::string> known{"uniform_cx",    "scale",   "drift_sigma",        "common_sigma",
                                             "outlier_prob",  "outlier_scale", "readout", "single_qubit_noise",
                                             "cx_errors",     "qubit_props",   "description"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.contains(it.key())) throw std::invalid_argument("unknown noise profile key '" + it.key() + "'");
    }
    NoiseProcess p;
    if (j.contains("cx_errors")) {
        auto resolve = [&](const std::string &s) {
            std::filesystem::path f(s);
            return f.is_absolute() ? f : base_dir / f;
        };
        p.base = load_calibration_files(resolve(j.at("cx_errors").get<std::string>()),
                                        j.contains("qubit_props") ? resolve(j.at("qubit_props").get<std::string>())
                                                                  : std::filesystem::path{});
    } else {
#ifdef AZNE_DATA_DIR
        p.base = default_calibration();
#endif
    }
    p.uniform_cx = detail::read_optional_double(j, "uniform_cx");
    p.scale = j.value("scale", 1.0);
    p.drift_sigma = j.value("drift_sigma", 0.0);
    p.common_sigma = j.value("common_sigma", 0.0);
    p.outlier_prob = j.value("outlier_prob", 0.0);
    p.outlier_scale = j.value("outlier_scale", 1.0);
    p.readout_enabled = j.value("readout", false);
    p.single_qubit_noise = j.value("single_qubit_noise", false);
    p.validate();
    return p;
}

inline NoiseProcess load_noise_profile(const std::filesystem::path &path) {
    return noise_from_json(read_json_file(path), path.parent_path());
}

inline Json noise_to_json(const NoiseProcess &p) {
    Json j;
    j["uniform_cx"] = detail::optional_double(p.uniform_cx);
    j["scale"] = p.scale;
    j["drift_sigma"] = p.drift_sigma;
    j["common_sigma"] = p.common_sigma;
    j["outlier_prob"] = p.outlier_prob;
    j["outlier_scale"] = p.outlier_scale;
    j["readout"] = p.readout_enabled;
    j["single_qubit_noise"] = p.single_qubit_noise;
    return j;
}

// ---- experiment records ----

inline Json config_to_json(const ExperimentConfig &c) {
    Json j;
    j["benchmark"] = c.benchmark;
    j["methods"] = Json::array();
    for (Method m : c.methods) j["methods"].push_back(method_name(m));
    j["filters"] = Json::array();
    for (FilterKind f : c.filters) j["filters"].push_back(filter_name(f));
    j["runs"] = c.runs;
    j["twirls"] = c.twirls;
    j["shots"] = c.shots;
    j["epsilon0_shots"] = c.epsilon0_shots;
    j["epsilon_shots"] = c.epsilon_shots;
    j["k"] = c.k;
    j["xi"] = c.xi;
    j["clamp"] = c.clamp;
    j["standard_factors"] = c.standard_factors;
    j["seed"] = c.seed;
    j["noise"] = noise_to_json(c.noise);
    return j;
}

/// Restores the fields needed to re-filter and re-fit. The calibration table is not stored.
inline ExperimentConfig config_from_json(const Json &j) {
    ExperimentConfig c;
    c.benchmark = j.at("benchmark").get<std::string>();
    c.methods.clear();
    for (const auto &m : j.at("methods")) c.methods.push_back(method_from_name(m.get<std::string>()));
    c.filters.clear();
    for (const auto &f : j.at("filters")) c.filters.push_back(filter_from_name(f.get<std::string>()));
    c.runs = j.at("runs").get<std::size_t>();
    c.twirls = j.at("twirls").get<std::size_t>();
    c.shots = j.at("shots").get<std::uint64_t>();
    c.epsilon0_shots = j.at("epsilon0_shots").get<std::uint64_t>();
    c.epsilon_shots = j.at("epsilon_shots").get<std::uint64_t>();
    c.k = j.at("k").get<std::size_t>();
    c.xi = j.at("xi").get<double>();
    c.clamp = j.at("clamp").get<bool>();
    c.standard_factors = j.at("standard_factors").get<std::vector<std::int64_t>>();
    c.seed = j.at("seed").get<std::uint64_t>();
    const Json &n = j.at("noise");
    c.noise.uniform_cx = detail::read_optional_double(n, "uniform_cx");
    c.noise.scale = n.at("scale").get<double>();
    c.noise.drift_sigma = n.at("drift_sigma").get<double>();
    c.noise.common_sigma = n.at("common_sigma").get<double>();
    c.noise.outlier_prob = n.at("outlier_prob").get<double>();
    c.noise.outlier_scale = n.at("outlier_scale").get<double>();
    c.noise.readout_enabled = n.at("readout").get<bool>();
    c.noise.single_qubit_noise = n.at("single_qubit_noise").get<bool>();
    return c;
}

inline const char *plan_kind_name(PlanKind k) {
    switch (k) {
        case PlanKind::standard:
            return "standard";
        case PlanKind::calibration:
            return "calibration";
        case PlanKind::measured:
            return "measured";
    }
    return "?";
}

inline PlanKind plan_kind_from_name(const std::string &s) {
    if (s == "standard") return PlanKind::standard;
    if (s == "calibration") return PlanKind::calibration;
    if (s == "measured") return PlanKind::measured;
    throw std::invalid_argument("unknown plan kind '" + s + "'");
}

inline Json plan_to_json(const ScalingPlan &p) {
    Json j;
    j["xi"] = p.xi;
    j["lambda_max"] = p.lambda_max;
    j["lambda_max_unclamped"] = p.lambda_max_unclamped;
    j["clamped"] = p.clamped;
    j["k"] = p.k;
    j["desired"] = p.desired;
    j["lambdas"] = Json::array();
    for (Rational r : p.lambdas) j["lambdas"].push_back(r.str());
    return j;
}

inline ScalingPlan plan_from_json(const Json &j) {
    ScalingPlan p;
    p.xi = j.at("xi").get<double>();
    p.lambda_max = j.at("lambda_max").get<double>();
    p.lambda_max_unclamped = j.at("lambda_max_unclamped").get<double>();
    p.clamped = j.at("clamped").get<bool>();
    p.k = j.at("k").get<std::size_t>();
    p.desired = j.at("desired").get<std::vector<double>>();
    for (const auto &s : j.at("lambdas")) p.lambdas.push_back(Rational::parse(s.get<std::string>()));
    return p;
}

inline Json estimate_to_json(const std::optional<ErrorEstimate> &e) {
    if (!e) return nullptr;
    Json j;
    j["epsilon0"] = e->epsilon0;
    j["source"] = source_name(e->source);
    j["p0"] = detail::optional_double(e->p0);
    j["q"] = e->q;
    return j;
}

inline std::optional<ErrorEstimate> estimate_from_json(const Json &j) {
    if (j.is_null()) return std::nullopt;
    ErrorEstimate e;
    e.epsilon0 = j.at("epsilon0").get<double>();
    e.source = j.at("source").get<std::string>() == "measured" ? EstimateSource::measured : EstimateSource::calibration;
    e.p0 = detail::read_optional_double(j, "p0");
    e.q = j.at("q").get<std::size_t>();
    return e;
}

inline Json fit_to_json(const FitResult &f) {
    Json j;
    j["model"] = model_name(f.model);
    j["params"] = f.params;
    j["zero_noise_value"] = f.zero_noise_value;
    j["residual_rms"] = f.residual_rms;
    j["degenerate"] = f.degenerate;
    return j;
}

inline Json run_to_json(const RunRecord &r) {
    Json j;
    j["run_id"] = r.run_id;
    j["epoch"] = {{"outlier", r.outlier}, {"common_factor", r.common_factor}, {"clamped_pairs", r.clamped_pairs}};
    j["epsilon0_measured"] = estimate_to_json(r.measured);
    j["epsilon0_calibration"] = estimate_to_json(r.calibration);
    j["plans"] = Json::object();
    for (const auto &[k, p] : r.plans) j["plans"][plan_kind_name(k)] = plan_to_json(p);
    j["plan_notes"] = Json::object();
    for (const auto &[k, n] : r.plan_notes) j["plan_notes"][plan_kind_name(k)] = n;
    j["samples"] = Json::array();
    for (const auto &s : r.samples) {
        Json o;
        o["lambda"] = s.lambda.str();
        o["twirl"] = s.twirl;
        o["value"] = s.value;
        o["epsilon"] = detail::optional_double(s.epsilon);
        j["samples"].push_back(o);
    }
    j["mitigated"] = Json::object();
    for (const auto &[m, f] : r.mitigated) j["mitigated"][method_name(m)] = fit_to_json(f);
    j["error"] = r.error;
    return j;
}

inline RunRecord run_from_json(const Json &j) {
    RunRecord r;
    r.run_id = j.at("run_id").get<std::uint64_t>();
    r.outlier = j.at("epoch").at("outlier").get<bool>();
    r.common_factor = j.at("epoch").at("common_factor").get<double>();
    r.clamped_pairs = j.at("epoch").at("clamped_pairs").get<std::size_t>();
    r.measured = estimate_from_json(j.at("epsilon0_measured"));
    r.calibration = estimate_from_json(j.at("epsilon0_calibration"));
    for (auto it = j.at("plans").begin(); it != j.at("plans").end(); ++it) {
        r.plans[plan_kind_from_name(it.key())] = plan_from_json(it.value());
    }
    for (auto it = j.at("plan_notes").begin(); it != j.at("plan_notes").end(); ++it) {
        r.plan_notes[plan_kind_from_name(it.key())] = it.value().get<std::string>();
    }
    for (const auto &o : j.at("samples")) {
        SampleRecord s;
        s.lambda = Rational::parse(o.at("lambda").get<std::string>());
        s.twirl = o.at("twirl").get<std::uint32_t>();
        s.value = o.at("value").get<double>();
        s.epsilon = detail::read_optional_double(o, "epsilon");
        r.samples.push_back(s);
    }
    r.error = j.at("error").get<std::string>();
    return r;
}

inline Json runs_document(const ExperimentReport &rep) {
    Json j;
    j["format"] = "azne-runs/1";
    j["benchmark"] = rep.benchmark;
    j["ideal"] = rep.ideal;
    j["config"] = config_to_json(rep.config);
    if (rep.config.custom) {
        j["circuit"] = circuit_to_json(rep.config.custom->circuit);
        j["circuit"]["observable"] = observable_to_json(rep.config.custom->observable);
    }
    j["aborted_runs"] = rep.aborted_runs;
    j["runs"] = Json::array();
    for (const auto &r : rep.runs) j["runs"].push_back(run_to_json(r));
    return j;
}

struct RunsDocument {
    ExperimentConfig config;
    std::string benchmark;
    double ideal = 0;
    std::vector<RunRecord> runs;
};

inline RunsDocument runs_from_json(const Json &j) {
    if (j.value("format", "") != "azne-runs/1") throw std::invalid_argument("not a runs.json document");
    RunsDocument d;
    d.config = config_from_json(j.at("config"));
    d.benchmark = j.at("benchmark").get<std::string>();
    d.ideal = j.at("ideal").get<double>();
    if (j.contains("circuit")) d.config.custom = benchmark_from_json(j.at("circuit"));
    for (const auto &r : j.at("runs")) d.runs.push_back(run_from_json(r));
    return d;
}

// ---- CSV ----

inline void write_report_csv(std::ostream &out, const ExperimentReport &rep) {
    out << "method,filter,rmse,reduction_pct,reduction_vs_unfiltered_pct,retained_runs,total_runs,"
           "retained_samples,total_samples,epsilon_source\n";
    auto opt = [](const std::optional<double> &v) { return v ? format_double(*v) : std::string(); };
    for (const auto &a : rep.arms) {
        out << method_name(a.method) << ',' << filter_name(a.filter) << ',' << format_double(a.rmse) << ','
            << opt(a.reduction_vs_szne) << ',' << opt(a.reduction_vs_unfiltered) << ',' << a.retained_runs << ','
            << a.total_runs << ',' << a.retained_samples << ',' << a.total_samples << ','
            << (a.filter == FilterKind::epsilon0 ? a.epsilon_source : "") << '\n';
    }
}

inline void write_samples_csv(std::ostream &out, const ExperimentReport &rep) {
    out << "method,filter,run,factor_index,lambda,twirl,x,value,retained,reason\n";
    for (const auto &a : rep.arms) {
        for (const auto &d : a.decisions) {
            out << method_name(a.method) << ',' << filter_name(a.filter) << ',' << d.run_id << ',' << d.factor_index
                << ',' << d.lambda.str() << ',' << d.twirl << ',' << format_double(d.x) << ','
                << format_double(d.value) << ',' << (d.decision.retained ? 1 : 0) << ','
                << reason_name(d.decision.reason) << '\n';
        }
    }
}

inline void write_sweep_csv(std::ostream &out, const std::string &benchmark, const std::vector<SweepRow> &rows) {
    out << "benchmark,xi,method,filter,rmse,retained_runs,deepest_factor_mean\n";
    for (const auto &r : rows) {
        out << benchmark << ',' << format_double(r.xi) << ',' << method_name(r.method) << ',' << filter_name(r.filter)
            << ',' << format_double(r.rmse) << ',' << r.retained_runs << ',' << format_double(r.deepest_mean)
            << '\n';
    }
}

/// Writes runs.json, report.csv and samples.csv into `dir`.
inline void write_outputs(const std::filesystem::path &dir, const ExperimentReport &rep) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char *name) {
        std::ofstream f(dir / name);
        if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
        return f;
    };
    {
        auto f = open("runs.json");
        f << to_json_text(runs_document(rep));
    }
    {
        auto f = open("report.csv");
        write_report_csv(f, rep);
    }
    {
        auto f = open("samples.csv");
        write_samples_csv(f, rep);
    }
}

}  // namespace azne

#endif
