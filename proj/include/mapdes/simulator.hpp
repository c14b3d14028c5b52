#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mapdes/agents.hpp"
#include "mapdes/auction.hpp"
#include "mapdes/battery.hpp"
#include "mapdes/pricing.hpp"
#include "mapdes/profiles.hpp"

namespace mapdes {

enum class ScenarioKind { no_re_no_p2p, re_no_p2p, re_p2p };

std::string scenario_name(ScenarioKind kind);
std::optional<ScenarioKind> scenario_from_name(std::string_view name);

struct FarmSetup {
    FarmDataset data;
    BatterySpec battery;
    bool battery_enabled = true;
    AgentKind agent = AgentKind::rule_based;
    double annual_load_kwh = 0.0; // config echo, 0 when profiles came from CSV
};

struct SimulationConfig {
    std::vector<FarmSetup> farms;
    TimeOfUseTariff tariff;
    FeedInPrice feed_in;
    ScenarioKind scenario = ScenarioKind::re_p2p;
    std::uint64_t seed = 42;
    std::size_t horizon_hours = kHoursPerYear;
    std::shared_ptr<const QTable> qtable; // required when a farm uses the Q agent

    void validate() const;
};

struct FarmHourRecord {
    double load = 0.0;
    double generation = 0.0;
    double e_buy = 0.0;
    double e_sell = 0.0;
    double e_charge = 0.0;
    double e_discharge = 0.0;
    double forced_purchase = 0.0;
    double e_curtailed = 0.0;
    double cash = 0.0; // EUR, positive = farm receives
    double soc = 0.0;  // kWh after the hour
};

struct HourRecord {
    std::size_t hour = 0;
    PriceQuote quote;          // feed-in / tariff pair in non-P2P scenarios
    double grid_import = 0.0;  // community kWh from the grid this hour
    double grid_export = 0.0;  // community kWh to the grid this hour
    std::vector<FarmHourRecord> farms;
};

struct FarmTotals {
    int farm_id = 0;
    double purchase_cost = 0.0; // EUR spent on net purchases
    double sales_revenue = 0.0; // EUR earned on net sales
};

struct ScenarioResult {
    ScenarioKind scenario = ScenarioKind::re_p2p;
    std::uint64_t seed = 0;
    std::vector<int> farm_ids;
    std::vector<HourRecord> hours;
    std::vector<FarmTotals> farm_totals;
    double total_purchase_cost = 0.0;
    double total_sales_revenue = 0.0;
    double total_grid_import = 0.0;
    double total_grid_export = 0.0;
};

// Runs the hourly loop: observe, decide, apply flows, settle (double auction
// in re_p2p, plain tariff / feed-in otherwise), advance batteries. Each
// farm's market position settles net per hour (a farm that both sells and
// force-buys in the same hour trades only the difference), which keeps one
// order per farm in the auction. In no_re_no_p2p, generation is zeroed and
// batteries are disabled.
ScenarioResult run_scenario(const SimulationConfig& cfg);

// Per-farm bus balance: gen + buy + discharge + forced == load + sell +
// charge + curtailed, within 1e-9 kWh.
bool check_energy_balance(const HourRecord& rec);

} // namespace mapdes
