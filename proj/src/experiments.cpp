// SPDX-License-Identifier: Apache-2.0

#include "rrsel/experiments.hpp"

#include "rrsel/predictor.hpp"
#include "rrsel/simulator.hpp"

#include <fmt/format.h>

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace rrsel::experiments {

namespace {

double from_db(double db) { return std::pow(10.0, db / 10.0); }

} // namespace

std::vector<CurveRow> fig2(const std::vector<double>& snrDb, int L)
{
    std::vector<CurveRow> rows;
    for (double db : snrDb) {
        const double g = from_db(db);
        for (phy::Rate r : phy::kAllRates) {
            const auto res = linkcalc::fixed_rate_throughput(r, g);
            rows.push_back({db, 1, 0.0, linkcalc::Method::Fixed, r, res.packetsPerSecond, res.quadratureError});
        }
        const auto ideal = linkcalc::ideal_adaptive_throughput(g, L);
        rows.push_back({db, L, 0.0, linkcalc::Method::Ideal, std::nullopt, ideal.packetsPerSecond,
                        ideal.quadratureError});
    }
    return rows;
}

std::vector<CurveRow> fig3(const std::vector<double>& nmse, double snrDb, int L)
{
    const double g = from_db(snrDb);
    std::vector<CurveRow> rows;
    for (double s : nmse) {
        const auto q = linkcalc::CsiQuality::from_nmse(s);
        for (auto m : {linkcalc::Method::Optimal, linkcalc::Method::Suboptimal,
                       linkcalc::Method::SuboptimalRealized}) {
            const auto res = linkcalc::avg_imperfect_throughput(g, L, q, m);
            rows.push_back({snrDb, L, s, m, std::nullopt, res.packetsPerSecond, res.quadratureError});
        }
    }
    return rows;
}

std::string curve_csv(const std::vector<CurveRow>& rows, const std::string& metadata)
{
    std::string out = metadata + "avg_snr_db,L,nmse,method,rate,throughput_pps,quad_err\n";
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{},{},{:.9g},{:.3g}\n", r.avgSnrDb, r.L, r.nmse, linkcalc::method_name(r.method),
                           r.rate ? phy::rate_name(*r.rate) : std::string_view("adaptive"), r.throughputPps,
                           r.quadError);
    return out;
}

std::vector<Fig5Row> fig5(const std::vector<double>& fdHz, int L, double pilotSnrDb, int order)
{
    const auto t = mac::MacTiming::standard(L);
    std::vector<Fig5Row> rows;
    for (double fd : fdHz) {
        if (!(fd > 0.0))
            throw std::invalid_argument("fig5: Doppler frequencies must be positive");
        const double age = mac::rts_csi_age(L, t);
        rows.push_back({fd, age, "RTS", predictor::outdated_mse(fd, age)});
        for (int l = 1; l <= L; ++l) {
            predictor::PredictorConfig pc;
            pc.pilotSnrDb = pilotSnrDb;
            pc.order = order;
            pc.horizonSeconds = mac::cts_delay(L, l, t);
            rows.push_back({fd, pc.horizonSeconds, fmt::format("CTS_l{}", l), predictor::analytic_mse(fd, pc)});
        }
    }
    return rows;
}

std::string fig5_csv(const std::vector<Fig5Row>& rows, const std::string& metadata)
{
    std::string out = metadata + "fd_hz,tau_s,scheme,nmse\n";
    for (const auto& r : rows)
        out += fmt::format("{},{:.9g},{},{:.9g}\n", r.fdHz, r.tauS, r.scheme, r.nmse);
    return out;
}

std::vector<double> linear_grid(double start, double stop, double step)
{
    if (!std::isfinite(start) || !std::isfinite(stop) || stop < start)
        throw std::invalid_argument("grid: need start <= stop");
    if (start == stop)
        return {start};
    if (!(step > 0.0))
        throw std::invalid_argument("grid: step must be positive");
    std::vector<double> g;
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i)
        g.push_back(start + static_cast<double>(i) * step);
    return g;
}

void ExperimentPlan::validate() const
{
    if (vMax.empty() || L.empty() || schemes.empty() || seeds.empty())
        throw sim::ConfigError("plan: every sweep axis and the seed list must be non-empty");
    if (workers < 1)
        throw sim::ConfigError("plan: workers must be at least 1");
    base.validate();
}

ExperimentPlan fig6_plan(const sim::ScenarioConfig& base, int seeds)
{
    ExperimentPlan p;
    p.tag = FigureTag::Fig6;
    p.base = base;
    p.vMax = {1.0, 5.0, 10.0, 15.0, 20.0};
    p.L = {3, 4};
    p.schemes = {mac::CsiScheme::RtsCsi, mac::CsiScheme::CtsCsi, mac::CsiScheme::Ideal};
    for (int s = 1; s <= seeds; ++s)
        p.seeds.push_back(static_cast<std::uint64_t>(s));
    return p;
}

const CellSummary* SweepResult::find(double vMax, int L, mac::CsiScheme s) const
{
    for (const auto& c : cells)
        if (c.key.vMax == vMax && c.key.L == L && c.key.scheme == s)
            return &c;
    return nullptr;
}

SweepResult run_sweep(const ExperimentPlan& plan)
{
    plan.validate();
    struct Job {
        CellKey key;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (double v : plan.vMax)
        for (int L : plan.L)
            for (auto s : plan.schemes)
                for (auto seed : plan.seeds)
                    jobs.push_back({{v, L, s}, seed});

    std::vector<std::optional<sim::RunMetrics>> done(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            auto cfg = plan.base;
            cfg.vMax = jobs[i].key.vMax;
            cfg.L = jobs[i].key.L;
            cfg.csiScheme = jobs[i].key.scheme;
            cfg.seed = jobs[i].seed;
            try {
                done[i] = sim::run(cfg);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int nThreads = std::min<int>(plan.workers, static_cast<int>(jobs.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < nThreads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    SweepResult r;
    const std::size_t perCell = plan.seeds.size();
    for (std::size_t c = 0; c < jobs.size(); c += perCell) {
        std::vector<double> thr, delay, pdr, hops;
        for (std::size_t i = c; i < c + perCell; ++i) {
            if (!done[i]) {
                r.failures.push_back({jobs[i].key, jobs[i].seed, errors[i]});
                continue;
            }
            const auto& m = *done[i];
            r.runs.push_back(m);
            thr.push_back(m.endToEndThroughputPps);
            delay.push_back(m.meanEndToEndDelayS);
            pdr.push_back(m.packetDeliveryRatio);
            hops.push_back(m.meanHopCount);
        }
        if (thr.size() < 2)
            continue;
        r.cells.push_back({jobs[c].key, static_cast<int>(thr.size()), stats::summarize(thr), stats::summarize(delay),
                           stats::summarize(pdr), stats::summarize(hops)});
    }
    return r;
}

std::string metadata_header(const sim::ScenarioConfig& cfg, const std::vector<std::uint64_t>& seeds,
                            const std::vector<std::string>& extra)
{
    std::string s = fmt::format("# version: {}\n# config_hash: {:016x}\n# seeds:", kVersion, sim::config_hash(cfg));
    for (std::size_t i = 0; i < seeds.size(); ++i)
        s += fmt::format("{}{}", i ? "," : " ", seeds[i]);
    s += "\n";
    for (const auto& e : extra)
        s += "# " + e + "\n";
    return s;
}

std::string runs_csv(const SweepResult& r, const std::string& metadata)
{
    std::string out = metadata + sim::metrics_csv_header() + "\n";
    for (const auto& m : r.runs)
        out += sim::metrics_csv_row(m) + "\n";
    return out;
}

std::string aggregate_csv(const SweepResult& r, const std::string& metadata)
{
    std::string out = metadata +
                      "vmax,L,scheme,runs,throughput_pps,throughput_ci_low,throughput_ci_high,delay_s,delay_ci_low,"
                      "delay_ci_high,pdr,pdr_ci_low,pdr_ci_high,hops\n";
    for (const auto& c : r.cells)
        out += fmt::format("{},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.4f}\n",
                           c.key.vMax, c.key.L, mac::scheme_name(c.key.scheme), c.runs, c.throughput.mean,
                           c.throughput.ciLow, c.throughput.ciHigh, c.delay.mean, c.delay.ciLow, c.delay.ciHigh,
                           c.pdr.mean, c.pdr.ciLow, c.pdr.ciHigh, c.hops.mean);
    return out;
}

} // namespace rrsel::experiments
