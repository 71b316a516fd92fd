// SPDX-License-Identifier: Apache-2.0
//
// Scenario configuration, run metrics and their text formats.

#pragma once

#include "rrsel/mac.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rrsel::sim {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ScenarioConfig {
    int nodeCount = 20;
    double arenaM = 400.0;
    double vMax = 10.0;
    int L = 3;
    mac::CsiScheme csiScheme = mac::CsiScheme::CtsCsi;
    int flowCount = 10;
    int packetBytes = 256;
    double packetIntervalS = 0.25;
    double helloIntervalS = 1.5;
    double simEndS = 300.0;
    std::uint64_t seed = 1;
    double warmupStartMinS = 10.0;
    double warmupStartMaxS = 60.0;
    double pauseS = 2.0;
    double drainS = 2.0;
    int queueLimit = 50;
    int retryLimit = 7;
    int predictorOrder = 50;
    double pilotSnrDb = 30.0;
    double txPowerW = 1e-3;
    double noiseDbm = -102.0;
    double sensitivityDbm = -93.0;
    double dopplerOverrideHz = -1.0; // < 0: Doppler from relative node speed
    bool trace = false;

    /// Desk-scale defaults (20 nodes, 400 m, 300 s).
    static ScenarioConfig desk();
    /// Full-scale network: 50 nodes, 500 m, 1000 s, flows start in [10, 200] s.
    static ScenarioConfig full();

    /// Throws ConfigError on any violated constraint.
    void validate() const;
};

/// Parses flat `key = value` lines onto `base`; '#' starts a comment.
/// Unknown keys and malformed values throw ConfigError.
ScenarioConfig parse_config(const std::string& text, ScenarioConfig base = ScenarioConfig::desk());
ScenarioConfig load_config(const std::string& path, ScenarioConfig base = ScenarioConfig::desk());

/// Applies one `key`=`value` assignment.
void set_config_value(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Canonical `key = value` text; parse_config(to_text(c)) reproduces c.
std::string to_text(const ScenarioConfig& cfg);

/// All recognised keys, in to_text order.
const std::vector<std::string>& config_keys();

/// 64-bit FNV-1a hash of the canonical text.
std::uint64_t config_hash(const ScenarioConfig& cfg);

enum class DropCause { NoProgress = 0, RetryLimit, QueueOverflow, Duplicate, EndOfRun };
inline constexpr std::size_t kDropCauses = 5;
std::string_view drop_cause_name(DropCause c);

struct RunMetrics {
    std::uint64_t seed = 0;
    double vMax = 0.0;
    int L = 0;
    mac::CsiScheme scheme = mac::CsiScheme::CtsCsi;

    double endToEndThroughputPps = 0.0;
    double meanEndToEndDelayS = 0.0;
    double packetDeliveryRatio = 1.0;
    double meanHopCount = 0.0;
    std::int64_t sent = 0;
    std::int64_t delivered = 0;
    std::array<std::int64_t, kDropCauses> drops{};

    // Diagnostics.
    std::int64_t forwardingDecisions = 0;
    std::int64_t dataAttempts = 0;
    std::int64_t dataSuccesses = 0;
    std::int64_t exchangeFailures = 0;
    std::int64_t carrierSenseViolations = 0;
    double contentionTimeS = 0.0; // DIFS, backoff and deferral ahead of data attempts
    double successContentionTimeS = 0.0; // the same, for attempts that were acknowledged
    std::vector<double> flowThroughputPps;

    std::int64_t drop(DropCause c) const { return drops[static_cast<std::size_t>(c)]; }
    std::int64_t total_drops() const;
};

/// Header and one row in the per-run metrics CSV.
std::string metrics_csv_header();
std::string metrics_csv_row(const RunMetrics& m);

} // namespace rrsel::sim
