#pragma once

#include "mapdes/errors.hpp"

namespace mapdes {

// PowerWall-class defaults; every field is configurable. Energy is accounted
// at the AC bus, losses apply at the battery boundary.
struct BatterySpec {
    double capacity = 13.5;           // kWh
    double max_charge_power = 5.0;    // kW, bus side
    double max_discharge_power = 5.0; // kW, bus side
    double eta_c = 0.95;              // charge efficiency (0,1]
    double eta_d = 0.95;              // discharge efficiency (0,1]
    double soc_min_frac = 0.1;
    double soc_max_frac = 1.0;
    double initial_soc_frac = 0.5;

    double soc_min() const { return soc_min_frac * capacity; }
    double soc_max() const { return soc_max_frac * capacity; }
    void validate() const;
};

// Stored energy in kWh. Value type; operations return the updated state.
struct BatteryState {
    double soc = 0.0;
};

BatteryState initial_state(const BatterySpec& spec);

// Most bus-side energy the battery can take in over dt hours:
// min(power limit, stored headroom / eta_c).
double max_accept(const BatteryState& state, const BatterySpec& spec, double dt = 1.0);

// Most bus-side energy the battery can put out over dt hours:
// min(power limit, stored margin * eta_d).
double max_deliver(const BatteryState& state, const BatterySpec& spec, double dt = 1.0);

struct ChargeResult {
    BatteryState state;
    double accepted_bus = 0.0; // kWh actually taken, measured at the bus
};

struct DischargeResult {
    BatteryState state;
    double delivered_bus = 0.0; // kWh actually delivered, measured at the bus
};

ChargeResult apply_charge(const BatteryState& state, const BatterySpec& spec, double e_bus,
                          double dt = 1.0);

DischargeResult apply_discharge(const BatteryState& state, const BatterySpec& spec,
                                double e_bus_requested, double dt = 1.0);

} // namespace mapdes
