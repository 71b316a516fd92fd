// SPDX-License-Identifier: Apache-2.0
//
// rrsel: figure data and network sweeps for adaptive rate-and-relay selection.

#include "rrsel/experiments.hpp"
#include "rrsel/simulator.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace {

using namespace rrsel;

constexpr int kUsage = 2;
constexpr int kPartial = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw UsageError(fmt::format("cannot write '{}'", path));
    out << text;
}

// Every ScenarioConfig key becomes a --<key> flag on the subcommands that
// run the simulator; explicit flags override --config.
struct ScenarioFlags {
    std::string configPath;
    bool full = false;
    std::map<std::string, std::string> values;

    void attach(CLI::App* app)
    {
        app->add_option("--config", configPath, "scenario file (key = value lines)");
        app->add_flag("--full", full, "start from the full-scale scenario instead of the desk defaults");
        for (const auto& key : sim::config_keys())
            app->add_option("--" + key, values[key], "scenario key " + key);
    }

    sim::ScenarioConfig resolve(CLI::App* app) const
    {
        auto cfg = full ? sim::ScenarioConfig::full() : sim::ScenarioConfig::desk();
        if (!configPath.empty())
            cfg = sim::load_config(configPath, cfg);
        for (const auto& [key, v] : values)
            if (app->count("--" + key) > 0)
                sim::set_config_value(cfg, key, v);
        cfg.validate();
        return cfg;
    }
};

template <typename T>
std::vector<T> parse_list(const std::string& s, const char* what)
{
    std::vector<T> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        try {
            std::size_t used = 0;
            if constexpr (std::is_same_v<T, int>)
                out.push_back(std::stoi(item, &used));
            else if constexpr (std::is_same_v<T, std::uint64_t>)
                out.push_back(std::stoull(item, &used));
            else
                out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(fmt::format("bad {} list entry '{}'", what, item));
        }
    }
    if (out.empty())
        throw UsageError(fmt::format("empty {} list", what));
    return out;
}

std::vector<mac::CsiScheme> parse_schemes(const std::string& s)
{
    std::vector<mac::CsiScheme> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) {
            auto sch = mac::parse_scheme(item);
            if (!sch)
                throw UsageError(fmt::format("unknown scheme '{}'", item));
            out.push_back(*sch);
        }
    if (out.empty())
        throw UsageError("empty scheme list");
    return out;
}

int write_sweep(const experiments::ExperimentPlan& plan, const std::string& outDir)
{
    std::error_code ec;
    std::filesystem::create_directories(outDir, ec);
    if (ec)
        throw UsageError(fmt::format("cannot create '{}': {}", outDir, ec.message()));
    const auto result = experiments::run_sweep(plan);
    const auto meta = experiments::metadata_header(plan.base, plan.seeds);
    emit(outDir + "/runs.csv", experiments::runs_csv(result, meta));
    emit(outDir + "/aggregate.csv", experiments::aggregate_csv(result, meta));
    for (const auto& f : result.failures)
        fmt::print(stderr, "run failed: vmax={} L={} scheme={} seed={}: {}\n", f.key.vMax, f.key.L,
                   mac::scheme_name(f.key.scheme), f.seed, f.message);
    return result.failures.empty() ? 0 : kPartial;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Adaptive rate-and-relay selection: link analysis and network simulation"};
    app.require_subcommand(1);

    std::string out;

    auto* fig2 = app.add_subcommand("fig2", "throughput vs average SNR: fixed rates and ideal adaptation");
    double snrStart = 0.0, snrStop = 30.0, snrStep = 1.0;
    int fig2L = 1;
    fig2->add_option("--snr-start", snrStart, "first average SNR (dB)");
    fig2->add_option("--snr-stop", snrStop, "last average SNR (dB)");
    fig2->add_option("--snr-step", snrStep, "SNR step (dB)");
    fig2->add_option("--L", fig2L, "relays for the adaptive curve")->check(CLI::PositiveNumber);
    fig2->add_option("-o,--out", out, "output CSV (default stdout)");

    auto* fig3 = app.add_subcommand("fig3", "throughput vs NMSE at fixed average SNR");
    std::string nmseList = "0.0001,0.001,0.002,0.005,0.01,0.02,0.05,0.1,0.2,0.3,0.5,0.7,0.9,0.99";
    double fig3Snr = 15.0;
    int fig3L = 1;
    fig3->add_option("--nmse", nmseList, "comma-separated NMSE values in [0, 1)");
    fig3->add_option("--snr-db", fig3Snr, "average SNR (dB)");
    fig3->add_option("--L", fig3L, "relays")->check(CLI::PositiveNumber);
    fig3->add_option("-o,--out", out, "output CSV (default stdout)");

    auto* fig5 = app.add_subcommand("fig5", "CSI error vs Doppler: outdated MRTS CSI and CTS prediction");
    std::string fdList = "10,25,50,75,100,150,200,250,300";
    int fig5L = 4, order = 50;
    double pilotSnr = 30.0;
    fig5->add_option("--fd", fdList, "comma-separated Doppler frequencies (Hz)");
    fig5->add_option("--L", fig5L, "relays")->check(CLI::PositiveNumber);
    fig5->add_option("--pilot-snr-db", pilotSnr, "effective pilot SNR (dB)");
    fig5->add_option("--order", order, "predictor taps")->check(CLI::Range(1, 50));
    fig5->add_option("-o,--out", out, "output CSV (default stdout)");

    auto* fig6 = app.add_subcommand("fig6", "network sweep over vMax, L and CSI scheme");
    ScenarioFlags fig6Flags;
    int fig6Seeds = 10, workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::string outDir = "fig6";
    fig6Flags.attach(fig6);
    fig6->add_option("--seeds", fig6Seeds, "seeds 1..N per cell")->check(CLI::Range(2, 100000));
    fig6->add_option("--workers", workers, "parallel runs")->check(CLI::PositiveNumber);
    fig6->add_option("--out-dir", outDir, "directory for runs.csv and aggregate.csv");

    auto* run = app.add_subcommand("run", "one scenario; prints its metrics CSV");
    ScenarioFlags runFlags;
    std::string tracePath;
    runFlags.attach(run);
    run->add_option("-o,--out", out, "output CSV (default stdout)");
    run->add_option("--trace-file", tracePath, "transmission trace (needs --trace 1)");

    auto* sweep = app.add_subcommand("sweep", "custom sweep plan");
    ScenarioFlags sweepFlags;
    std::string vmaxList = "1,10,20", lList = "3,4", schemeList = "RTS,CTS,IDEAL", seedList = "1,2,3,4,5";
    std::string sweepDir = "sweep";
    sweepFlags.attach(sweep);
    sweep->add_option("--vmax-list", vmaxList, "comma-separated vMax values (m/s)");
    sweep->add_option("--L-list", lList, "comma-separated candidate counts");
    sweep->add_option("--schemes", schemeList, "comma-separated schemes (RTS, CTS, IDEAL)");
    sweep->add_option("--seed-list", seedList, "comma-separated seeds");
    sweep->add_option("--workers", workers, "parallel runs")->check(CLI::PositiveNumber);
    sweep->add_option("--out-dir", sweepDir, "directory for runs.csv and aggregate.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*fig2) {
            const auto grid = experiments::linear_grid(snrStart, snrStop, snrStep);
            emit(out, experiments::curve_csv(experiments::fig2(grid, fig2L),
                                             fmt::format("# version: {}\n", experiments::kVersion)));
        } else if (*fig3) {
            const auto grid = parse_list<double>(nmseList, "NMSE");
            for (double s : grid)
                if (!(s >= 0.0 && s < 1.0))
                    throw UsageError("NMSE values must lie in [0, 1)");
            emit(out, experiments::curve_csv(experiments::fig3(grid, fig3Snr, fig3L),
                                             fmt::format("# version: {}\n", experiments::kVersion)));
        } else if (*fig5) {
            const auto grid = parse_list<double>(fdList, "Doppler");
            emit(out, experiments::fig5_csv(experiments::fig5(grid, fig5L, pilotSnr, order),
                                            fmt::format("# version: {}\n", experiments::kVersion)));
        } else if (*fig6) {
            auto plan = experiments::fig6_plan(fig6Flags.resolve(fig6), fig6Seeds);
            plan.workers = workers;
            return write_sweep(plan, outDir);
        } else if (*run) {
            const auto cfg = runFlags.resolve(run);
            sim::SimulatorOptions opt;
            std::ofstream trace;
            if (!tracePath.empty()) {
                trace.open(tracePath);
                if (!trace)
                    throw UsageError(fmt::format("cannot write '{}'", tracePath));
                opt.trace = &trace;
            }
            const auto m = sim::run(cfg, opt);
            emit(out, experiments::metadata_header(cfg, {cfg.seed}) + sim::metrics_csv_header() + "\n" +
                          sim::metrics_csv_row(m) + "\n");
        } else if (*sweep) {
            experiments::ExperimentPlan plan;
            plan.base = sweepFlags.resolve(sweep);
            plan.vMax = parse_list<double>(vmaxList, "vMax");
            plan.L = parse_list<int>(lList, "L");
            plan.schemes = parse_schemes(schemeList);
            plan.seeds = parse_list<std::uint64_t>(seedList, "seed");
            plan.workers = workers;
            return write_sweep(plan, sweepDir);
        }
    } catch (const UsageError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kUsage;
    } catch (const std::invalid_argument& e) { // ConfigError, bad grids and domains
        fmt::print(stderr, "error: {}\n", e.what());
        return kUsage;
    } catch (const std::domain_error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kUsage;
    }
    return 0;
}
