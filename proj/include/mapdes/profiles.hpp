#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mapdes/errors.hpp"

namespace mapdes {

inline constexpr std::size_t kHoursPerYear = 8760;

// Year-long nonnegative hourly energy series in kWh.
struct HourlyProfile {
    std::vector<double> values;

    std::size_t horizon_hours() const { return values.size(); }
    void validate() const;
};

enum class AgentKind { rule_based, q_learning };

struct FarmDataset {
    int farm_id = 0;
    HourlyProfile load;
    HourlyProfile pv;
    HourlyProfile wind;
    double pv_capacity = 10.0;   // kW
    double wind_capacity = 10.0; // kW
};

// One value per line, optional single "kwh" header, decimal point, no
// thousands separators.
HourlyProfile parse_profile_csv(std::string_view text, std::size_t expected_horizon);

std::string serialize_profile_csv(const HourlyProfile& profile);

// Synthetic stand-ins for the external datasets. All three are pure functions
// of (parameters, seed) and produce bit-identical output on every platform.

// Bimodal dairy day: milking peaks in hours 05-07 and 16-18, mild seasonal
// swing, per-hour noise, rescaled so the year sums to annual_kwh.
HourlyProfile synth_dairy_load(double annual_kwh, std::uint64_t seed);

// Daylight bell per day with seasonal daylight length and amplitude plus a
// per-day clearness factor. Output is capacity * unit_series, so profiles at
// different capacities scale exactly.
HourlyProfile synth_pv_profile(double capacity_kw, std::uint64_t seed);

// Smoothed-noise series in [0, capacity]; an 8-hour moving average keeps the
// lag-1 autocorrelation high.
HourlyProfile synth_wind_profile(double capacity_kw, std::uint64_t seed);

} // namespace mapdes
