#include "mapdes/agents.hpp"

#include <algorithm>
#include <cmath>

namespace mapdes {

namespace {

// Self-consumption flows: curtail surplus, force-purchase deficit. Also the
// fallback for infeasible actions.
FlowDecision self_consume_flows(double net) {
    FlowDecision f;
    if (net > 0.0)
        f.e_curtailed = net;
    else
        f.forced_purchase = -net;
    return f;
}

} // namespace

ActionId rule_decide(const AgentObservation& obs, const BatteryState& battery,
                     const BatterySpec& spec, bool battery_enabled) {
    double net = obs.generation - obs.load;
    double acc = battery_enabled ? max_accept(battery, spec) : 0.0;
    double del = battery_enabled ? max_deliver(battery, spec) : 0.0;
    if (net > 0.0) return acc > 0.0 ? ActionId::charge_and_sell : ActionId::sell;
    if (net < 0.0) return del > 0.0 ? ActionId::discharge_and_buy : ActionId::buy;
    return ActionId::self_consume_only;
}

ActionOutcome apply_action(const AgentObservation& obs, ActionId action,
                           const BatteryState& battery, const BatterySpec& spec,
                           bool battery_enabled, double dt) {
    const double net = obs.generation - obs.load;
    const double acc = battery_enabled ? max_accept(battery, spec, dt) : 0.0;
    const double del = battery_enabled ? max_deliver(battery, spec, dt) : 0.0;

    ActionOutcome out;
    out.battery = battery;
    FlowDecision& f = out.flow;

    switch (action) {
        case ActionId::buy:
            if (net > 0.0) {
                out.feasible = false;
                f = self_consume_flows(net);
            } else {
                f.e_buy = -net;
            }
            break;
        case ActionId::sell:
            if (net < 0.0) {
                out.feasible = false;
                f = self_consume_flows(net);
            } else {
                f.e_sell = net;
            }
            break;
        case ActionId::self_consume_only:
            f = self_consume_flows(net);
            break;
        case ActionId::charge_and_sell:
            if (net <= 0.0) {
                out.feasible = false;
                f = self_consume_flows(net);
            } else {
                f.e_charge_bus = std::min(net, acc);
                f.e_sell = net - f.e_charge_bus;
            }
            break;
        case ActionId::charge_and_buy:
            // Charges at full rate from the market; any surplus is curtailed,
            // not stored (charge_and_sell is the action that stores surplus).
            f.e_charge_bus = acc;
            f.e_buy = std::max(-net, 0.0) + acc;
            f.e_curtailed = std::max(net, 0.0);
            break;
        case ActionId::discharge_and_sell:
            if (del <= 0.0) {
                out.feasible = false;
                f = self_consume_flows(net);
            } else {
                f.e_discharge_bus = del;
                f.e_sell = std::max(net, 0.0) + del;
                f.forced_purchase = std::max(-net, 0.0);
            }
            break;
        case ActionId::discharge_and_buy:
            if (net >= 0.0 || del <= 0.0) {
                out.feasible = false;
                f = self_consume_flows(net);
            } else {
                f.e_discharge_bus = std::min(-net, del);
                f.e_buy = -net - f.e_discharge_bus;
            }
            break;
        case ActionId::self_utilize_and_charge:
            if (net > 0.0) {
                f.e_charge_bus = std::min(net, acc);
                f.e_curtailed = net - f.e_charge_bus;
            } else {
                f.forced_purchase = -net;
            }
            break;
        case ActionId::self_utilize_and_discharge:
            if (net < 0.0) {
                f.e_discharge_bus = std::min(-net, del);
                f.forced_purchase = -net - f.e_discharge_bus;
            } else {
                f.e_curtailed = net;
            }
            break;
    }

    if (f.e_charge_bus > 0.0) out.battery = apply_charge(battery, spec, f.e_charge_bus, dt).state;
    if (f.e_discharge_bus > 0.0)
        out.battery = apply_discharge(battery, spec, f.e_discharge_bus, dt).state;
    return out;
}

void Hyperparameters::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(Errc::bad_config, "alpha must be in (0, 1]");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(Errc::bad_config, "gamma must be in [0, 1)");
    if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0))
        throw Error(Errc::bad_config, "epsilon_decay must be in (0, 1]");
    if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_min >= 0.0 &&
          epsilon_min <= 1.0))
        throw Error(Errc::bad_config, "epsilon must be in [0, 1]");
    if (episodes < 0) throw Error(Errc::bad_config, "episodes must be >= 0");
}

double reward(const FlowDecision& flow, bool feasible, int hour_of_day, double sell_price,
              double buy_price, const TimeOfUseTariff& tariff, const Hyperparameters& hp) {
    if (!feasible) return -hp.invalid_penalty;
    double bought = flow.e_buy + flow.forced_purchase;
    double r = flow.e_sell * sell_price - bought * buy_price;
    if (is_peak(tariff, hour_of_day)) r -= hp.peak_weight * bought;
    return r;
}

} // namespace mapdes
