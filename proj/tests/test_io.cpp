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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "azne/io.hpp"

namespace azne {
namespace {

TEST(FormatTest, SeventeenDigits) {
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(-2.5e-7), "-2.4999999999999999e-07");
    EXPECT_EQ(format_double(std::nan("")), "nan");
    EXPECT_EQ(format_double(-INFINITY), "-inf");
    for (double v : {0.1, 1.0 / 3.0, 0.30094415309675765, 6.02214076e23, 5e-324}) {
        EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
    }
}

TEST(FormatTest, JsonFloatsUseSeventeenDigits) {
    Json j{{"a", 0.1}, {"b", {1.0 / 3.0, 2}}, {"c", std::nan("")}};
    std::string text = to_json_text(j);
    EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
    EXPECT_NE(text.find("0.33333333333333331"), std::string::npos);
    EXPECT_NE(text.find("\"c\": null"), std::string::npos);
    Json back = Json::parse(text);
    EXPECT_EQ(back["b"][0].get<double>(), 1.0 / 3.0);
}

TEST(CircuitJsonTest, RoundTrip) {
    for (const auto &name : benchmark_names()) {
        Benchmark b = build_benchmark(name);
        Json j = Json::parse(to_json_text(circuit_to_json(b.circuit)));
        Circuit c = circuit_from_json(j);
        ASSERT_EQ(c.gates().size(), b.circuit.gates().size()) << name;
        EXPECT_EQ(c.width(), b.circuit.width());
        for (std::size_t i = 0; i < c.gates().size(); ++i) {
            EXPECT_EQ(c.gates()[i].kind, b.circuit.gates()[i].kind);
            EXPECT_EQ(c.gates()[i].qubits, b.circuit.gates()[i].qubits);
            EXPECT_EQ(c.gates()[i].angle, b.circuit.gates()[i].angle);
        }
    }
}

TEST(CircuitJsonTest, ArrayFormWithWidthRecord) {
    Json j = Json::parse(R"([
        {"kind": "h", "qubits": [0], "params": []},
        {"kind": "cx", "qubits": [0, 1], "params": []},
        {"kind": "rz", "qubits": [1], "params": [0.5]},
        {"width": 2}
    ])");
    Circuit c = circuit_from_json(j);
    EXPECT_EQ(c.width(), 2u);
    EXPECT_EQ(c.gates().size(), 3u);
    EXPECT_EQ(c.cnot_count(), 1u);
    EXPECT_EQ(c.gates()[2].angle, 0.5);
}

TEST(CircuitJsonTest, Rejections) {
    EXPECT_THROW(circuit_from_json(Json::parse(R"([{"kind": "h", "qubits": [0]}])")), std::invalid_argument);
    EXPECT_THROW(circuit_from_json(Json::parse(R"({"width": 2, "gates": [{"kind": "cx", "qubits": [0]}]})")),
                 std::invalid_argument);
    EXPECT_THROW(circuit_from_json(Json::parse(R"({"width": 1, "gates": [{"kind": "rz", "qubits": [0]}]})")),
                 std::invalid_argument);
    EXPECT_THROW(circuit_from_json(Json::parse(R"({"width": 1, "gates": [{"kind": "ccx", "qubits": [0]}]})")),
                 std::invalid_argument);
    EXPECT_THROW(circuit_from_json(Json::parse("3")), std::invalid_argument);
    EXPECT_THROW(benchmark_from_json(Json::parse(R"({"width": 1, "gates": []})")), std::invalid_argument);
}

TEST(CircuitJsonTest, BenchmarkWithObservable) {
    Json j = Json::parse(R"({"width": 2, "gates": [{"kind": "x", "qubits": [1]}],
                              "observable": {"bitstrings": ["01", ["10", 0.5]], "ideal": 1.0}})");
    Benchmark b = benchmark_from_json(j);
    EXPECT_EQ(b.observable.ideal_value(), 1.0);
    EXPECT_EQ(b.observable.weight(bitstring_to_index("01")), 1.0);
    EXPECT_EQ(b.observable.weight(bitstring_to_index("10")), 0.5);
}

TEST(NoiseJsonTest, ProfileKeys) {
    NoiseProcess p = noise_from_json(Json::parse(R"({"uniform_cx": 0.02, "drift_sigma": 0.1, "readout": true})"));
    ASSERT_TRUE(p.uniform_cx.has_value());
    EXPECT_EQ(*p.uniform_cx, 0.02);
    EXPECT_EQ(p.drift_sigma, 0.1);
    EXPECT_TRUE(p.readout_enabled);
    EXPECT_EQ(p.scale, 1.0);
    EXPECT_THROW(noise_from_json(Json::parse(R"({"drfit_sigma": 0.1})")), std::invalid_argument);
    EXPECT_THROW(noise_from_json(Json::parse(R"({"outlier_prob": 1.5})")), std::invalid_argument);
}

TEST(NoiseJsonTest, ShippedProfilesLoad) {
    const std::filesystem::path dir = std::filesystem::path(AZNE_DATA_DIR) / "profiles";
    std::size_t n = 0;
    for (const auto &e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() != ".json") continue;
        EXPECT_NO_THROW(load_noise_profile(e.path())) << e.path();
        ++n;
    }
    EXPECT_GE(n, 4u);
}

ExperimentConfig io_config() {
    ExperimentConfig cfg;
    cfg.benchmark = "grover";
    cfg.runs = 4;
    cfg.twirls = 4;
    cfg.methods = all_methods();
    cfg.filters = all_filters();
    cfg.noise.base = default_calibration();
    cfg.noise.drift_sigma = 0.1;
    cfg.noise.common_sigma = 0.3;
    cfg.seed = 11;
    return cfg;
}

TEST(RunsJsonTest, RoundTripReanalysis) {
    ExperimentReport rep = run_experiment(io_config());
    Json j = Json::parse(to_json_text(runs_document(rep)));
    RunsDocument doc = runs_from_json(j);
    EXPECT_EQ(doc.benchmark, "grover");
    EXPECT_EQ(doc.ideal, rep.ideal);
    EXPECT_EQ(doc.config.xi, rep.config.xi);
    EXPECT_EQ(doc.config.methods, rep.config.methods);
    EXPECT_EQ(doc.config.filters, rep.config.filters);
    ASSERT_EQ(doc.runs.size(), rep.runs.size());
    for (std::size_t i = 0; i < doc.runs.size(); ++i) {
        const auto &a = rep.runs[i], &b = doc.runs[i];
        EXPECT_EQ(a.outlier, b.outlier);
        EXPECT_EQ(a.common_factor, b.common_factor);
        EXPECT_EQ(a.measured->epsilon0, b.measured->epsilon0);
        EXPECT_EQ(a.calibration->epsilon0, b.calibration->epsilon0);
        EXPECT_EQ(a.plans.at(PlanKind::measured).lambdas, b.plans.at(PlanKind::measured).lambdas);
        ASSERT_EQ(a.samples.size(), b.samples.size());
        for (std::size_t k = 0; k < a.samples.size(); ++k) {
            EXPECT_EQ(a.samples[k].lambda, b.samples[k].lambda);
            EXPECT_EQ(a.samples[k].value, b.samples[k].value);
            EXPECT_EQ(a.samples[k].epsilon, b.samples[k].epsilon);
        }
    }
    ExperimentReport again = analyze(doc.config, doc.benchmark, doc.ideal, doc.runs);
    ASSERT_EQ(again.arms.size(), rep.arms.size());
    for (std::size_t i = 0; i < rep.arms.size(); ++i) {
        EXPECT_EQ(again.arms[i].rmse, rep.arms[i].rmse);
        EXPECT_EQ(again.arms[i].retained_samples, rep.arms[i].retained_samples);
    }
    std::ostringstream r1, r2;
    write_report_csv(r1, rep);
    write_report_csv(r2, again);
    EXPECT_EQ(r1.str(), r2.str());
}

TEST(RunsJsonTest, CustomCircuitTravelsWithDocument) {
    ExperimentConfig cfg;
    Circuit c(2, {Gate::h(0), Gate::cnot(0, 1)}, "bell");
    cfg.custom = Benchmark{c, Observable::bitstrings(2, {{"00", 1.0}, {"11", 1.0}}, 1.0)};
    cfg.noise = NoiseProcess::uniform(0.02);
    cfg.runs = 2;
    cfg.twirls = 2;
    ExperimentReport rep = run_experiment(cfg);
    EXPECT_EQ(rep.benchmark, "bell");
    RunsDocument doc = runs_from_json(Json::parse(to_json_text(runs_document(rep))));
    ASSERT_TRUE(doc.config.custom.has_value());
    EXPECT_EQ(doc.config.custom->circuit.cnot_count(), 1u);
    EXPECT_THROW(runs_from_json(Json{{"format", "other"}}), std::invalid_argument);
}

TEST(CsvTest, HeadersAndRows) {
    ExperimentConfig cfg = io_config();
    cfg.runs = 2;
    cfg.twirls = 2;
    ExperimentReport rep = run_experiment(cfg);
    std::ostringstream report, samples;
    write_report_csv(report, rep);
    write_samples_csv(samples, rep);
    std::istringstream rin(report.str()), sin(samples.str());
    std::string line;
    std::getline(rin, line);
    EXPECT_EQ(line,
              "method,filter,rmse,reduction_pct,reduction_vs_unfiltered_pct,retained_runs,total_runs,"
              "retained_samples,total_samples,epsilon_source");
    std::size_t rows = 0;
    while (std::getline(rin, line)) ++rows;
    EXPECT_EQ(rows, rep.arms.size());
    std::getline(sin, line);
    EXPECT_EQ(line, "method,filter,run,factor_index,lambda,twirl,x,value,retained,reason");
    std::size_t decisions = 0;
    for (const auto &a : rep.arms) decisions += a.decisions.size();
    rows = 0;
    while (std::getline(sin, line)) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9);
    }
    EXPECT_EQ(rows, decisions);

    std::ostringstream sweep;
    write_sweep_csv(sweep, "grover", {{0.125, Method::asf_b, FilterKind::none, 0.1, 2, 0.5}});
    EXPECT_EQ(sweep.str(),
              "benchmark,xi,method,filter,rmse,retained_runs,deepest_factor_mean\n"
              "grover,0.125,ASF-B,none,0.10000000000000001,2,0.5\n");
}

TEST(CsvTest, WriteOutputsCreatesFiles) {
    ExperimentConfig cfg = io_config();
    cfg.runs = 2;
    cfg.twirls = 2;
    ExperimentReport rep = run_experiment(cfg);
    const auto dir = std::filesystem::temp_directory_path() / "azne_io_test";
    std::filesystem::remove_all(dir);
    write_outputs(dir, rep);
    for (const char *f : {"runs.json", "report.csv", "samples.csv"}) EXPECT_TRUE(std::filesystem::exists(dir / f));
    EXPECT_NO_THROW(runs_from_json(read_json_file(dir / "runs.json")));
    std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace azne
