#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mapdes/battery.hpp"
#include "mapdes/pricing.hpp"
#include "mapdes/profiles.hpp"
#include "mapdes/rng.hpp"

namespace mapdes {

// What a farm agent sees each hour.
struct AgentObservation {
    double load = 0.0;       // kWh this hour
    double generation = 0.0; // kWh this hour (pv + wind)
    double soc_frac = 0.0;   // 0..1
    int hour_of_day = 0;     // 0..23
};

enum class ActionId : int {
    buy = 0,
    sell = 1,
    self_consume_only = 2,
    charge_and_sell = 3,
    charge_and_buy = 4,
    discharge_and_sell = 5,
    discharge_and_buy = 6,
    self_utilize_and_charge = 7,
    self_utilize_and_discharge = 8,
};

inline constexpr int kActionCount = 9;

// Concrete bus-side energy flows induced by an action. All fields >= 0; at
// most one of e_buy/e_sell is positive and at most one of charge/discharge.
// forced_purchase is deficit energy the farm must buy even though the action
// did not ask to trade.
struct FlowDecision {
    double e_buy = 0.0;
    double e_sell = 0.0;
    double e_charge_bus = 0.0;
    double e_discharge_bus = 0.0;
    double e_curtailed = 0.0;
    double forced_purchase = 0.0;
};

struct ActionOutcome {
    FlowDecision flow;
    BatteryState battery;
    bool feasible = true;
};

// Fixed-threshold rule policy: store-then-sell surplus, discharge-then-buy
// deficit, do nothing on exact balance.
ActionId rule_decide(const AgentObservation& obs, const BatteryState& battery,
                     const BatterySpec& spec, bool battery_enabled = true);

// Deterministic semantics of the nine actions at maximal feasible quantities.
// An ill-posed action (selling into a deficit, discharging an empty battery,
// ...) is reported infeasible and falls back to self-consumption flows:
// surplus curtailed, deficit force-purchased. The returned flows always
// satisfy gen + e_buy + e_discharge + forced == load + e_sell + e_charge +
// e_curtailed.
ActionOutcome apply_action(const AgentObservation& obs, ActionId action,
                           const BatteryState& battery, const BatterySpec& spec,
                           bool battery_enabled = true, double dt = 1.0);

struct Hyperparameters {
    double alpha = 0.1;
    double gamma = 0.99;
    double epsilon_start = 1.0;
    double epsilon_decay = 0.99; // multiplicative, per episode
    double epsilon_min = 0.01;
    long long episodes = 300000;
    double invalid_penalty = 5.0; // reward units
    double peak_weight = 0.1;     // reward units per kWh bought in peak hours

    void validate() const;
};

// Reward: earn on sales, pay on purchases, extra penalty per kWh bought in
// the peak window; a flat penalty for infeasible actions.
double reward(const FlowDecision& flow, bool feasible, int hour_of_day, double sell_price,
              double buy_price, const TimeOfUseTariff& tariff, const Hyperparameters& hp);

// Observation binning: 24 hours x 10 SoC bins x 8 load bins x 8 generation
// bins = 15,360 states. Load/generation edges are series quantiles.
struct Discretizer {
    static constexpr int kValueBins = 8;
    static constexpr int kSocBins = 10;
    static constexpr int kHourBins = 24;

    std::array<double, kValueBins - 1> load_edges{};
    std::array<double, kValueBins - 1> gen_edges{};

    static constexpr int state_count() { return kHourBins * kSocBins * kValueBins * kValueBins; }
    void validate() const;

    static Discretizer from_series(std::span<const double> load, std::span<const double> gen);
};

int discretize(const AgentObservation& obs, const Discretizer& d);

// Epsilon-greedy over one Q row; greedy ties break to the lowest index.
// epsilon == 0 consumes no randomness.
ActionId select_action(std::span<const double> q_row, double epsilon, Pcg32& rng);

struct QTable {
    std::vector<double> values; // state_count x kActionCount, row major
    Discretizer discretizer;
    Hyperparameters hp;

    std::span<double> row(int state) {
        return {values.data() + static_cast<std::size_t>(state) * kActionCount, kActionCount};
    }
    std::span<const double> row(int state) const {
        return {values.data() + static_cast<std::size_t>(state) * kActionCount, kActionCount};
    }
    ActionId greedy_action(int state) const;
};

// Q(s,a) <- (1-alpha)*Q(s,a) + alpha*(r + gamma*max_a' Q(s',a')). Returns the
// updated entry.
double q_update(QTable& q, int state, ActionId action, double r, int next_state,
                const Hyperparameters& hp);

// Terminal form: no bootstrap term.
double q_update_terminal(QTable& q, int state, ActionId action, double r,
                         const Hyperparameters& hp);

// Episodic environment interface for the tabular trainer. States and actions
// are dense indices.
class Environment {
public:
    virtual ~Environment() = default;
    virtual int state_count() const = 0;
    virtual int action_count() const = 0;
    virtual int reset() = 0; // starts a new episode, returns the initial state

    struct StepResult {
        int next_state = 0;
        double reward = 0.0;
        bool done = false;
    };
    virtual StepResult step(int action) = 0;
};

struct EpisodicTrainResult {
    std::vector<double> values; // state_count x action_count
    std::vector<double> episode_rewards;
};

// Generic tabular Q-learning loop: epsilon-greedy selection, per-episode
// epsilon decay with a floor, deterministic for a fixed seed.
EpisodicTrainResult train_episodic(Environment& env, const Hyperparameters& hp,
                                   std::uint64_t seed);

struct TrainResult {
    QTable table;
    std::vector<double> episode_rewards; // raw per-episode totals
};

// Trains one farm solo against tariff / feed-in prices. An episode is one
// simulated day drawn cyclically from the year; the battery resets to its
// initial SoC each episode.
TrainResult train(const FarmDataset& farm, const BatterySpec& spec,
                  const TimeOfUseTariff& tariff, const FeedInPrice& feed_in,
                  const Hyperparameters& hp, std::uint64_t seed);

// Trailing moving average with the window clipped at the start of the series.
std::vector<double> moving_average(std::span<const double> series, std::size_t window);

// Versioned text format; the write is atomic (temp file + rename).
void save_qtable(const QTable& q, const std::filesystem::path& path);
QTable load_qtable(const std::filesystem::path& path);

} // namespace mapdes
