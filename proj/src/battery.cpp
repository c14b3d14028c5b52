#include "mapdes/battery.hpp"

#include <algorithm>

namespace mapdes {

void BatterySpec::validate() const {
    if (!(capacity > 0.0)) throw Error(Errc::bad_config, "battery capacity must be > 0");
    if (!(max_charge_power > 0.0 && max_discharge_power > 0.0))
        throw Error(Errc::bad_config, "battery power limits must be > 0");
    if (!(eta_c > 0.0 && eta_c <= 1.0 && eta_d > 0.0 && eta_d <= 1.0))
        throw Error(Errc::bad_config, "battery efficiencies must be in (0, 1]");
    if (!(soc_min_frac >= 0.0 && soc_min_frac < soc_max_frac && soc_max_frac <= 1.0))
        throw Error(Errc::bad_config, "require 0 <= soc_min_frac < soc_max_frac <= 1");
    if (!(initial_soc_frac >= soc_min_frac && initial_soc_frac <= soc_max_frac))
        throw Error(Errc::bad_config, "initial_soc_frac outside [soc_min_frac, soc_max_frac]");
}

BatteryState initial_state(const BatterySpec& spec) {
    return BatteryState{spec.initial_soc_frac * spec.capacity};
}

double max_accept(const BatteryState& state, const BatterySpec& spec, double dt) {
    double headroom = std::max(spec.soc_max() - state.soc, 0.0);
    return std::min(spec.max_charge_power * dt, headroom / spec.eta_c);
}

double max_deliver(const BatteryState& state, const BatterySpec& spec, double dt) {
    double margin = std::max(state.soc - spec.soc_min(), 0.0);
    return std::min(spec.max_discharge_power * dt, margin * spec.eta_d);
}

ChargeResult apply_charge(const BatteryState& state, const BatterySpec& spec, double e_bus,
                          double dt) {
    if (e_bus < 0.0) throw Error(Errc::negative_energy, "charge energy must be >= 0");
    double accepted = std::min(e_bus, max_accept(state, spec, dt));
    BatteryState next{std::min(state.soc + accepted * spec.eta_c, spec.soc_max())};
    return ChargeResult{next, accepted};
}

DischargeResult apply_discharge(const BatteryState& state, const BatterySpec& spec,
                                double e_bus_requested, double dt) {
    if (e_bus_requested < 0.0) throw Error(Errc::negative_energy, "discharge energy must be >= 0");
    double delivered = std::min(e_bus_requested, max_deliver(state, spec, dt));
    BatteryState next{std::max(state.soc - delivered / spec.eta_d, spec.soc_min())};
    return DischargeResult{next, delivered};
}

} // namespace mapdes
