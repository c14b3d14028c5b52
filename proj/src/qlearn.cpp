#include <algorithm>
#include <cmath>

#include "mapdes/agents.hpp"
#include "mapdes/io_util.hpp"

namespace mapdes {

namespace {

int bin_of(std::span<const double> edges, double v) {
    int bin = 0;
    for (double e : edges) {
        if (v >= e)
            ++bin;
        else
            break;
    }
    return bin;
}

// Nearest-rank quantile edges at k/8, k = 1..7, of a sorted copy. Duplicate
// edges (heavy ties in the data) are nudged upward so edges stay strictly
// increasing and the state count keeps its fixed layout.
std::array<double, Discretizer::kValueBins - 1> quantile_edges(std::span<const double> series) {
    std::vector<double> sorted(series.begin(), series.end());
    std::sort(sorted.begin(), sorted.end());
    std::array<double, Discretizer::kValueBins - 1> edges{};
    const std::size_t n = sorted.size();
    for (int k = 1; k < Discretizer::kValueBins; ++k) {
        std::size_t idx = std::min(n - 1, k * n / Discretizer::kValueBins);
        edges[static_cast<std::size_t>(k - 1)] = sorted[idx];
    }
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (edges[i] <= edges[i - 1])
            edges[i] = edges[i - 1] + std::max(std::abs(edges[i - 1]), 1.0) * 1e-9;
    }
    return edges;
}

} // namespace

void Discretizer::validate() const {
    auto strictly_increasing = [](std::span<const double> edges) {
        for (std::size_t i = 1; i < edges.size(); ++i)
            if (!(edges[i] > edges[i - 1])) return false;
        return true;
    };
    if (!strictly_increasing(load_edges) || !strictly_increasing(gen_edges))
        throw Error(Errc::bad_config, "discretizer edges must be strictly increasing");
}

Discretizer Discretizer::from_series(std::span<const double> load, std::span<const double> gen) {
    if (load.empty() || gen.empty()) throw Error(Errc::empty_profile, "empty series");
    Discretizer d;
    d.load_edges = quantile_edges(load);
    d.gen_edges = quantile_edges(gen);
    d.validate();
    return d;
}

int discretize(const AgentObservation& obs, const Discretizer& d) {
    int soc_bin = std::min(static_cast<int>(obs.soc_frac * Discretizer::kSocBins),
                           Discretizer::kSocBins - 1);
    soc_bin = std::max(soc_bin, 0);
    int load_bin = bin_of(d.load_edges, obs.load);
    int gen_bin = bin_of(d.gen_edges, obs.generation);
    return ((obs.hour_of_day * Discretizer::kSocBins + soc_bin) * Discretizer::kValueBins +
            load_bin) *
               Discretizer::kValueBins +
           gen_bin;
}

ActionId select_action(std::span<const double> q_row, double epsilon, Pcg32& rng) {
    if (epsilon > 0.0 && rng.next_double() < epsilon)
        return static_cast<ActionId>(rng.uniform_int(static_cast<std::uint32_t>(q_row.size())));
    std::size_t best = 0;
    for (std::size_t a = 1; a < q_row.size(); ++a)
        if (q_row[a] > q_row[best]) best = a;
    return static_cast<ActionId>(best);
}

ActionId QTable::greedy_action(int state) const {
    auto r = row(state);
    std::size_t best = 0;
    for (std::size_t a = 1; a < r.size(); ++a)
        if (r[a] > r[best]) best = a;
    return static_cast<ActionId>(best);
}

double q_update(QTable& q, int state, ActionId action, double r, int next_state,
                const Hyperparameters& hp) {
    auto next = q.row(next_state);
    double best_next = *std::max_element(next.begin(), next.end());
    double& entry = q.row(state)[static_cast<std::size_t>(action)];
    entry = (1.0 - hp.alpha) * entry + hp.alpha * (r + hp.gamma * best_next);
    return entry;
}

double q_update_terminal(QTable& q, int state, ActionId action, double r,
                         const Hyperparameters& hp) {
    double& entry = q.row(state)[static_cast<std::size_t>(action)];
    entry = (1.0 - hp.alpha) * entry + hp.alpha * r;
    return entry;
}

EpisodicTrainResult train_episodic(Environment& env, const Hyperparameters& hp,
                                   std::uint64_t seed) {
    hp.validate();
    const int states = env.state_count();
    const int actions = env.action_count();

    EpisodicTrainResult result;
    result.values.assign(static_cast<std::size_t>(states) * actions, 0.0);
    result.episode_rewards.reserve(static_cast<std::size_t>(hp.episodes));

    Pcg32 rng(seed);
    double epsilon = hp.epsilon_start;
    auto row = [&](int s) {
        return std::span<const double>(result.values.data() +
                                           static_cast<std::size_t>(s) * actions,
                                       static_cast<std::size_t>(actions));
    };
    auto entry = [&](int s, int a) -> double& {
        return result.values[static_cast<std::size_t>(s) * actions + a];
    };

    for (long long episode = 0; episode < hp.episodes; ++episode) {
        int state = env.reset();
        double total = 0.0;
        bool done = false;
        while (!done) {
            int action = static_cast<int>(select_action(row(state), epsilon, rng));
            auto step = env.step(action);
            double target = step.done ? step.reward
                                      : step.reward +
                                            hp.gamma * *std::max_element(row(step.next_state).begin(),
                                                                         row(step.next_state).end());
            double& e = entry(state, action);
            e = (1.0 - hp.alpha) * e + hp.alpha * target;
            total += step.reward;
            state = step.next_state;
            done = step.done;
        }
        result.episode_rewards.push_back(total);
        epsilon = std::max(epsilon * hp.epsilon_decay, hp.epsilon_min);
    }
    return result;
}

namespace {

// Solo training environment: one farm, one day per episode, trades priced at
// the grid tariff (buy) and feed-in (sell). Days cycle through the year.
class FarmDayEnv final : public Environment {
public:
    FarmDayEnv(const FarmDataset& farm, const BatterySpec& spec, const TimeOfUseTariff& tariff,
               const FeedInPrice& feed_in, const Hyperparameters& hp, Discretizer disc)
        : farm_(farm),
          spec_(spec),
          tariff_(tariff),
          feed_in_(feed_in),
          hp_(hp),
          disc_(disc),
          days_(farm.load.horizon_hours() / 24) {
        // Strided cycle through the days of the year: every day is visited
        // equally often, and consecutive episodes mix seasons, so reward
        // moving averages track learning rather than the time of year.
        stride_ = 97 % days_;
        if (stride_ == 0) stride_ = 1;
    }

    int state_count() const override { return Discretizer::state_count(); }
    int action_count() const override { return kActionCount; }

    int reset() override {
        day_ = static_cast<std::size_t>(episode_ % static_cast<long long>(days_)) * stride_ %
               days_;
        ++episode_;
        hour_ = 0;
        battery_ = initial_state(spec_);
        return discretize(observe(), disc_);
    }

    StepResult step(int action) override {
        AgentObservation obs = observe();
        ActionOutcome outcome =
            apply_action(obs, static_cast<ActionId>(action), battery_, spec_);
        double r = reward(outcome.flow, outcome.feasible, hour_, feed_in_.lambda_sell,
                          rate_at(tariff_, hour_), tariff_, hp_);
        battery_ = outcome.battery;
        ++hour_;
        StepResult res;
        res.reward = r;
        res.done = hour_ >= 24;
        res.next_state = res.done ? 0 : discretize(observe(), disc_);
        return res;
    }

private:
    AgentObservation observe() const {
        std::size_t i = day_ * 24 + static_cast<std::size_t>(hour_);
        AgentObservation obs;
        obs.load = farm_.load.values[i];
        obs.generation = farm_.pv.values[i] + farm_.wind.values[i];
        obs.soc_frac = battery_.soc / spec_.capacity;
        obs.hour_of_day = hour_;
        return obs;
    }

    const FarmDataset& farm_;
    BatterySpec spec_;
    TimeOfUseTariff tariff_;
    FeedInPrice feed_in_;
    Hyperparameters hp_;
    Discretizer disc_;
    std::size_t days_;
    std::size_t stride_ = 1;
    long long episode_ = 0;
    std::size_t day_ = 0;
    int hour_ = 0;
    BatteryState battery_;
};

} // namespace

TrainResult train(const FarmDataset& farm, const BatterySpec& spec, const TimeOfUseTariff& tariff,
                  const FeedInPrice& feed_in, const Hyperparameters& hp, std::uint64_t seed) {
    hp.validate();
    spec.validate();
    tariff.validate();
    const std::size_t horizon = farm.load.horizon_hours();
    if (horizon < 24 || farm.pv.horizon_hours() != horizon || farm.wind.horizon_hours() != horizon)
        throw Error(Errc::empty_profile, "training profiles must share a horizon of >= 1 day");

    std::vector<double> gen(horizon);
    for (std::size_t i = 0; i < horizon; ++i)
        gen[i] = farm.pv.values[i] + farm.wind.values[i];
    Discretizer disc = Discretizer::from_series(farm.load.values, gen);

    FarmDayEnv env(farm, spec, tariff, feed_in, hp, disc);
    EpisodicTrainResult inner = train_episodic(env, hp, seed);

    TrainResult out;
    out.table.values = std::move(inner.values);
    out.table.discretizer = disc;
    out.table.hp = hp;
    out.episode_rewards = std::move(inner.episode_rewards);
    return out;
}

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
    std::vector<double> out(series.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        acc += series[i];
        if (i >= window) acc -= series[i - window];
        out[i] = acc / static_cast<double>(std::min(i + 1, window));
    }
    return out;
}

} // namespace mapdes
