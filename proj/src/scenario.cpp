// SPDX-License-Identifier: Apache-2.0

#include "rrsel/scenario.hpp"

#include "rrsel/rng.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

namespace rrsel::sim {

ScenarioConfig ScenarioConfig::desk() { return {}; }

ScenarioConfig ScenarioConfig::full()
{
    ScenarioConfig c;
    c.nodeCount = 50;
    c.arenaM = 500.0;
    c.simEndS = 1000.0;
    c.warmupStartMaxS = 200.0;
    return c;
}

void ScenarioConfig::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw ConfigError(std::string("invalid scenario: ") + what);
    };
    require(nodeCount >= 2, "nodeCount must be at least 2");
    require(arenaM > 0.0, "arenaM must be positive");
    require(vMax >= 0.0, "vMax must be non-negative");
    require(L >= 1, "L must be at least 1");
    require(flowCount >= 0, "flowCount must be non-negative");
    require(2 * flowCount <= nodeCount, "flows need distinct sources and destinations (2 * flowCount <= nodeCount)");
    require(packetBytes > 0, "packetBytes must be positive");
    require(packetIntervalS > 0.0, "packetIntervalS must be positive");
    require(helloIntervalS > 0.0, "helloIntervalS must be positive");
    require(simEndS > 0.0, "simEndS must be positive");
    require(warmupStartMinS >= 0.0 && warmupStartMaxS >= warmupStartMinS, "warm-up window must be ordered");
    require(warmupStartMaxS < simEndS, "flows must start before the end of the run");
    require(pauseS >= 0.0, "pauseS must be non-negative");
    require(drainS >= 0.0, "drainS must be non-negative");
    require(queueLimit >= 1, "queueLimit must be at least 1");
    require(retryLimit >= 0, "retryLimit must be non-negative");
    require(predictorOrder >= 1 && predictorOrder <= 50, "predictorOrder must lie in [1, 50]");
    require(std::isfinite(pilotSnrDb), "pilotSnrDb must be finite");
    require(txPowerW > 0.0, "txPowerW must be positive");
    require(std::isfinite(noiseDbm) && std::isfinite(sensitivityDbm), "noise and sensitivity must be finite");
}

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& v)
{
    T out{};
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        throw ConfigError(fmt::format("config: bad value '{}' for key '{}'", v, key));
    return out;
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "1" || v == "true")
        return true;
    if (v == "0" || v == "false")
        return false;
    throw ConfigError(fmt::format("config: bad boolean '{}' for key '{}'", v, key));
}

struct Field {
    std::string key;
    std::function<void(ScenarioConfig&, const std::string&)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

template <typename T>
Field number_field(std::string key, T ScenarioConfig::*member)
{
    return {key, [key, member](ScenarioConfig& c, const std::string& v) { c.*member = parse_number<T>(key, v); },
            [member](const ScenarioConfig& c) { return fmt::format("{}", c.*member); }};
}

const std::vector<Field>& fields()
{
    static const std::vector<Field> f = [] {
        std::vector<Field> v;
        v.push_back(number_field("nodeCount", &ScenarioConfig::nodeCount));
        v.push_back(number_field("arenaM", &ScenarioConfig::arenaM));
        v.push_back(number_field("vMax", &ScenarioConfig::vMax));
        v.push_back(number_field("L", &ScenarioConfig::L));
        v.push_back({"csiScheme",
                     [](ScenarioConfig& c, const std::string& s) {
                         auto sch = mac::parse_scheme(s);
                         if (!sch)
                             throw ConfigError(fmt::format("config: unknown csiScheme '{}'", s));
                         c.csiScheme = *sch;
                     },
                     [](const ScenarioConfig& c) { return std::string(mac::scheme_name(c.csiScheme)); }});
        v.push_back(number_field("flowCount", &ScenarioConfig::flowCount));
        v.push_back(number_field("packetBytes", &ScenarioConfig::packetBytes));
        v.push_back(number_field("packetIntervalS", &ScenarioConfig::packetIntervalS));
        v.push_back(number_field("helloIntervalS", &ScenarioConfig::helloIntervalS));
        v.push_back(number_field("simEndS", &ScenarioConfig::simEndS));
        v.push_back(number_field("seed", &ScenarioConfig::seed));
        v.push_back(number_field("warmupStartMinS", &ScenarioConfig::warmupStartMinS));
        v.push_back(number_field("warmupStartMaxS", &ScenarioConfig::warmupStartMaxS));
        v.push_back(number_field("pauseS", &ScenarioConfig::pauseS));
        v.push_back(number_field("drainS", &ScenarioConfig::drainS));
        v.push_back(number_field("queueLimit", &ScenarioConfig::queueLimit));
        v.push_back(number_field("retryLimit", &ScenarioConfig::retryLimit));
        v.push_back(number_field("predictorOrder", &ScenarioConfig::predictorOrder));
        v.push_back(number_field("pilotSnrDb", &ScenarioConfig::pilotSnrDb));
        v.push_back(number_field("txPowerW", &ScenarioConfig::txPowerW));
        v.push_back(number_field("noiseDbm", &ScenarioConfig::noiseDbm));
        v.push_back(number_field("sensitivityDbm", &ScenarioConfig::sensitivityDbm));
        v.push_back(number_field("dopplerOverrideHz", &ScenarioConfig::dopplerOverrideHz));
        v.push_back({"trace", [](ScenarioConfig& c, const std::string& s) { c.trace = parse_bool("trace", s); },
                     [](const ScenarioConfig& c) { return std::string(c.trace ? "1" : "0"); }});
        return v;
    }();
    return f;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

void set_config_value(ScenarioConfig& cfg, const std::string& key, const std::string& value)
{
    for (const auto& f : fields()) {
        if (f.key == key) {
            f.set(cfg, value);
            return;
        }
    }
    throw ConfigError(fmt::format("config: unknown key '{}'", key));
}

ScenarioConfig parse_config(const std::string& text, ScenarioConfig base)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(fmt::format("config line {}: expected key = value", lineno));
        set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

ScenarioConfig load_config(const std::string& path, ScenarioConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("config: cannot open '{}'", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), base);
}

std::string to_text(const ScenarioConfig& cfg)
{
    std::string out;
    for (const auto& f : fields())
        out += fmt::format("{} = {}\n", f.key, f.get(cfg));
    return out;
}

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& f : fields())
            k.push_back(f.key);
        return k;
    }();
    return keys;
}

std::uint64_t config_hash(const ScenarioConfig& cfg) { return fnv1a(to_text(cfg)); }

std::string_view drop_cause_name(DropCause c)
{
    switch (c) {
    case DropCause::NoProgress: return "nocand";
    case DropCause::RetryLimit: return "retry";
    case DropCause::QueueOverflow: return "queue";
    case DropCause::Duplicate: return "duplicate";
    case DropCause::EndOfRun: return "end";
    }
    return "?";
}

std::int64_t RunMetrics::total_drops() const { return std::accumulate(drops.begin(), drops.end(), std::int64_t{0}); }

std::string metrics_csv_header()
{
    return "seed,vmax,L,scheme,throughput_pps,delay_s,pdr,hops,drops_nocand,drops_retry,drops_queue,drops_end,"
           "sent,delivered";
}

std::string metrics_csv_row(const RunMetrics& m)
{
    return fmt::format("{},{},{},{},{:.6f},{:.6f},{:.6f},{:.4f},{},{},{},{},{},{}", m.seed, m.vMax, m.L,
                       mac::scheme_name(m.scheme), m.endToEndThroughputPps, m.meanEndToEndDelayS,
                       m.packetDeliveryRatio, m.meanHopCount, m.drop(DropCause::NoProgress),
                       m.drop(DropCause::RetryLimit), m.drop(DropCause::QueueOverflow),
                       m.drop(DropCause::EndOfRun) + m.drop(DropCause::Duplicate), m.sent, m.delivered);
}

} // namespace rrsel::sim
