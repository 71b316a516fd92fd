// SPDX-License-Identifier: Apache-2.0
//
// Figure data generation and seed sweeps.

#pragma once

#include "rrsel/linkcalc.hpp"
#include "rrsel/mac.hpp"
#include "rrsel/scenario.hpp"
#include "rrsel/stats.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rrsel::experiments {

inline constexpr const char* kVersion = "rrsel 0.1.0";

struct CurveRow {
    double avgSnrDb = 0.0;
    int L = 1;
    double nmse = 0.0;
    linkcalc::Method method = linkcalc::Method::Ideal;
    std::optional<phy::Rate> rate;
    double throughputPps = 0.0;
    double quadError = 0.0;
};

/// Four fixed-rate curves plus the ideal adaptive curve for L relays.
std::vector<CurveRow> fig2(const std::vector<double>& snrDb, int L);

/// Optimal, suboptimal and realized-suboptimal curves over an NMSE grid.
std::vector<CurveRow> fig3(const std::vector<double>& nmse, double snrDb, int L);

std::string curve_csv(const std::vector<CurveRow>& rows, const std::string& metadata);

struct Fig5Row {
    double fdHz = 0.0;
    double tauS = 0.0;
    std::string scheme; // "RTS" or "CTS_l<k>"
    double nmse = 0.0;
};

/// Outdated-CSI NMSE at the RTS CSI age and predictor NMSE at every CTS slot
/// horizon for L candidates.
std::vector<Fig5Row> fig5(const std::vector<double>& fdHz, int L, double pilotSnrDb = 30.0, int order = 50);

std::string fig5_csv(const std::vector<Fig5Row>& rows, const std::string& metadata);

/// Closed grid start..stop with `step`; throws std::invalid_argument on an
/// empty or malformed range.
std::vector<double> linear_grid(double start, double stop, double step);

enum class FigureTag { Fig2, Fig3, Fig5, Fig6, Custom };

struct ExperimentPlan {
    FigureTag tag = FigureTag::Custom;
    sim::ScenarioConfig base = sim::ScenarioConfig::desk();
    std::vector<double> vMax;
    std::vector<int> L;
    std::vector<mac::CsiScheme> schemes;
    std::vector<std::uint64_t> seeds;
    int workers = 1;

    /// Throws sim::ConfigError on empty axes or an invalid base config.
    void validate() const;
    std::size_t cells() const { return vMax.size() * L.size() * schemes.size(); }
};

/// Figure 6 plan: vMax {1, 5, 10, 15, 20}, L {3, 4}, schemes RTS/CTS/IDEAL.
ExperimentPlan fig6_plan(const sim::ScenarioConfig& base, int seeds);

struct CellKey {
    double vMax = 0.0;
    int L = 0;
    mac::CsiScheme scheme = mac::CsiScheme::CtsCsi;
};

struct CellSummary {
    CellKey key;
    int runs = 0;
    stats::Summary throughput;
    stats::Summary delay;
    stats::Summary pdr;
    stats::Summary hops;
};

struct RunFailure {
    CellKey key;
    std::uint64_t seed = 0;
    std::string message;
};

struct SweepResult {
    std::vector<sim::RunMetrics> runs; // plan order: vMax, L, scheme, seed
    std::vector<RunFailure> failures;
    std::vector<CellSummary> cells;    // cells with at least two completed runs

    const CellSummary* find(double vMax, int L, mac::CsiScheme s) const;
};

/// Runs every (cell, seed) on a pool of plan.workers threads. Output order
/// depends only on the plan.
SweepResult run_sweep(const ExperimentPlan& plan);

/// `# ` lines naming the code version, config hash and seed list.
std::string metadata_header(const sim::ScenarioConfig& cfg, const std::vector<std::uint64_t>& seeds,
                            const std::vector<std::string>& extra = {});

std::string runs_csv(const SweepResult& r, const std::string& metadata);
std::string aggregate_csv(const SweepResult& r, const std::string& metadata);

} // namespace rrsel::experiments
