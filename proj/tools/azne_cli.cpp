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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "azne/azne.hpp"

namespace {

struct CommonOptions {
    std::string benchmark = "grover";
    std::string methods = "sZNE,ASF-M,ASF-B,IC-ZNE";
    std::string filters = "none,global,epsilon0";
    std::size_t runs = 50;
    std::uint64_t shots = 625;
    std::size_t twirls = 16;
    double xi = 0.125;
    std::size_t k = 3;
    std::string noise_profile;
    std::uint64_t seed = 1;
    std::string out = "out";
    unsigned threads = 1;
    bool no_clamp = false;
    std::uint64_t epsilon_shots = 10000;
};

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void add_common(CLI::App *cmd, CommonOptions &o) {
    cmd->add_option("--benchmark", o.benchmark, "grover, hhl, ladder, or a circuit JSON file with an observable");
    cmd->add_option("--methods", o.methods, "comma list of sZNE, ASF-M, ASF-B, IC-ZNE, IC-ZNE+ASF-M, IC-ZNE+ASF-B");
    cmd->add_option("--filters", o.filters, "comma list of none, global, epsilon0, local2D, global2D");
    cmd->add_option("--runs", o.runs, "repetitions M")->check(CLI::PositiveNumber);
    cmd->add_option("--shots", o.shots, "shots per twirled circuit")->check(CLI::PositiveNumber);
    cmd->add_option("--twirls", o.twirls, "twirled circuits per scaling factor")->check(CLI::PositiveNumber);
    cmd->add_option("--xi", o.xi, "adaptive scaling parameter")->check(CLI::PositiveNumber);
    cmd->add_option("--k", o.k, "number of adaptive factors")->check(CLI::Range(2, 64));
    cmd->add_option("--noise-profile", o.noise_profile, "noise profile JSON")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "experiment seed");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--epsilon-shots", o.epsilon_shots, "shots for each inverted-circuit measurement")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--no-clamp", o.no_clamp, "do not raise lambda_max to the k-factor floor");
}

azne::ExperimentConfig make_config(const CommonOptions &o) {
    azne::ExperimentConfig c;
    if (std::filesystem::exists(o.benchmark) && !std::filesystem::is_directory(o.benchmark)) {
        c.custom = azne::benchmark_from_json(azne::read_json_file(o.benchmark));
        c.benchmark = c.custom->circuit.label().empty() ? std::filesystem::path(o.benchmark).stem().string()
                                                        : c.custom->circuit.label();
    } else {
        c.benchmark = o.benchmark;
        azne::build_benchmark(o.benchmark);
    }
    c.methods.clear();
    for (const auto &m : split_list(o.methods)) c.methods.push_back(azne::method_from_name(m));
    c.filters.clear();
    for (const auto &f : split_list(o.filters)) c.filters.push_back(azne::filter_from_name(f));
    c.runs = o.runs;
    c.shots = o.shots;
    c.twirls = o.twirls;
    c.xi = o.xi;
    c.k = o.k;
    c.seed = o.seed;
    c.threads = o.threads;
    c.clamp = !o.no_clamp;
    c.epsilon0_shots = o.epsilon_shots;
    c.epsilon_shots = o.epsilon_shots;
    if (o.noise_profile.empty()) {
        c.noise = azne::noise_from_json(azne::Json::object());
    } else {
        c.noise = azne::load_noise_profile(o.noise_profile);
    }
    c.noise.seed = o.seed;
    return c;
}

void print_report(const azne::ExperimentReport &rep) {
    std::cout << "benchmark " << rep.benchmark << ", ideal " << rep.ideal << ", runs " << rep.runs.size();
    if (rep.aborted_runs) std::cout << " (" << rep.aborted_runs << " aborted)";
    std::cout << "\n";
    azne::write_report_csv(std::cout, rep);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Noise-adaptive zero-noise extrapolation on a simulated noisy device"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    auto *run = app.add_subcommand("run", "simulate an experiment and write runs.json, report.csv, samples.csv");
    add_common(run, run_opts);

    CommonOptions sweep_opts;
    std::string grid = "0.05,0.1,0.125,0.2,0.25,0.5";
    auto *sweep = app.add_subcommand("sweep-xi", "repeat an experiment over a grid of xi values");
    add_common(sweep, sweep_opts);
    sweep->add_option("--grid", grid, "comma list of xi values");

    std::string report_in, report_out, report_filters, report_methods;
    auto *report = app.add_subcommand("report", "re-filter and re-fit persisted runs without simulating");
    report->add_option("--in", report_in, "directory or runs.json file")->required();
    report->add_option("--out", report_out, "output directory (default: the input directory)");
    report->add_option("--filters", report_filters, "override the filter list");
    report->add_option("--methods", report_methods, "override the method list");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto cfg = make_config(run_opts);
            auto rep = azne::run_experiment(cfg);
            azne::write_outputs(run_opts.out, rep);
            print_report(rep);
        } else if (*sweep) {
            auto cfg = make_config(sweep_opts);
            std::vector<double> xs;
            for (const auto &s : split_list(grid)) xs.push_back(std::stod(s));
            auto rows = azne::sweep_xi(cfg, xs);
            std::filesystem::create_directories(sweep_opts.out);
            std::ofstream f(std::filesystem::path(sweep_opts.out) / "sweep.csv");
            azne::write_sweep_csv(f, cfg.benchmark, rows);
            azne::write_sweep_csv(std::cout, cfg.benchmark, rows);
        } else if (*report) {
            std::filesystem::path in(report_in);
            if (std::filesystem::is_directory(in)) in /= "runs.json";
            auto doc = azne::runs_from_json(azne::read_json_file(in));
            if (!report_filters.empty()) {
                doc.config.filters.clear();
                for (const auto &f : split_list(report_filters)) doc.config.filters.push_back(azne::filter_from_name(f));
            }
            if (!report_methods.empty()) {
                doc.config.methods.clear();
                for (const auto &m : split_list(report_methods)) doc.config.methods.push_back(azne::method_from_name(m));
            }
            auto rep = azne::analyze(doc.config, doc.benchmark, doc.ideal, std::move(doc.runs));
            std::filesystem::path out = report_out.empty() ? in.parent_path() : std::filesystem::path(report_out);
            if (out.empty()) out = ".";
            std::filesystem::create_directories(out);
            {
                std::ofstream f(out / "report.csv");
                azne::write_report_csv(f, rep);
            }
            {
                std::ofstream f(out / "samples.csv");
                azne::write_samples_csv(f, rep);
            }
            if (!report_out.empty()) {
                std::ofstream f(out / "runs.json");
                f << azne::to_json_text(azne::runs_document(rep));
            }
            print_report(rep);
        }
    } catch (const std::exception &ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
