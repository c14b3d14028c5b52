#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mapdes/agents.hpp"
#include "mapdes/simulator.hpp"

namespace mapdes {

// One [farm:N] section. Profiles come either from CSV files (paths relative
// to the config file) or from the synthetic generators.
struct FarmConfig {
    int farm_id = 0;
    AgentKind agent = AgentKind::rule_based;
    bool battery_enabled = true;
    double annual_load_kwh = 35000.0;
    double pv_capacity_kw = 10.0;
    double wind_capacity_kw = 10.0;
    std::string load_csv;
    std::string pv_csv;
    std::string wind_csv;
};

struct CommunityConfig {
    std::size_t horizon_hours = kHoursPerYear;
    std::optional<std::uint64_t> seed; // unset = resolve from env / default
    TimeOfUseTariff tariff;
    FeedInPrice feed_in;
    BatterySpec battery; // shared spec; per-farm sections toggle it on/off
    Hyperparameters hp;
    std::vector<FarmConfig> farms; // ascending farm_id
    std::filesystem::path base_dir; // directory of the config file
};

// Flat key-value sections: [community], [battery], [qlearning], [farm:N].
// '#' starts a comment; unknown keys are rejected.
CommunityConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
CommunityConfig load_config(const std::filesystem::path& path);

// Builds runnable farm datasets: parses referenced CSVs or synthesizes
// profiles with per-farm sub-seeds derived from the community seed.
std::vector<FarmSetup> materialize_farms(const CommunityConfig& cfg, std::uint64_t seed);

SimulationConfig make_simulation_config(const CommunityConfig& cfg, ScenarioKind scenario,
                                        std::uint64_t seed,
                                        std::shared_ptr<const QTable> qtable);

// Canonical JSON echo of everything that defines the community; two runs are
// comparable exactly when their echoes are byte-equal.
std::string community_fingerprint_json(const CommunityConfig& cfg, std::uint64_t seed);

} // namespace mapdes
