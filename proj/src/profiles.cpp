#include "mapdes/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mapdes/io_util.hpp"
#include "mapdes/rng.hpp"

namespace mapdes {

namespace {

constexpr int kDaysPerYear = 365;

bool is_kwh_header(std::string_view line) {
    std::string s;
    for (char c : trim(line)) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return s == "kwh";
}

// Hour-of-day weights for a twice-daily milking schedule: morning peak in
// hours 5-7, evening peak in 16-18, low overnight base.
constexpr double kDairyHourWeight[24] = {
    0.55, 0.55, 0.55, 0.55, 0.55, // 0-4
    1.70, 2.00, 1.50,             // 5-7 morning milking
    0.85, 0.85, 0.85, 0.85, 0.85, 0.85, 0.85, 0.85, // 8-15
    1.60, 1.90, 1.40,             // 16-18 evening milking
    0.70, 0.70, 0.70, 0.70, 0.70, // 19-23
};

} // namespace

void HourlyProfile::validate() const {
    for (double v : values) {
        if (!std::isfinite(v)) throw Error(Errc::malformed, "profile value not finite");
        if (v < 0.0) throw Error(Errc::negative_value, "profile value < 0");
    }
}

HourlyProfile parse_profile_csv(std::string_view text, std::size_t expected_horizon) {
    std::vector<std::string_view> lines = split(text, '\n');
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();

    HourlyProfile profile;
    profile.values.reserve(expected_horizon);
    std::size_t row = 0;
    for (std::string_view line : lines) {
        if (row == 0 && profile.values.empty() && is_kwh_header(line)) {
            ++row;
            continue;
        }
        double v = 0.0;
        if (!parse_double(line, v))
            throw Error(Errc::malformed, "row " + format_int(static_cast<long long>(row)) +
                                             ": not a number: '" + std::string(trim(line)) + "'");
        if (v < 0.0)
            throw Error(Errc::negative_value,
                        "row " + format_int(static_cast<long long>(row)) + ": negative value");
        profile.values.push_back(v);
        ++row;
    }
    if (profile.values.size() != expected_horizon)
        throw Error(Errc::wrong_length, "expected " + format_int(static_cast<long long>(expected_horizon)) +
                                            " rows, got " +
                                            format_int(static_cast<long long>(profile.values.size())));
    return profile;
}

std::string serialize_profile_csv(const HourlyProfile& profile) {
    std::string out;
    out.reserve(profile.values.size() * 8);
    for (double v : profile.values) {
        out += format_double(v);
        out += '\n';
    }
    return out;
}

HourlyProfile synth_dairy_load(double annual_kwh, std::uint64_t seed) {
    if (!(annual_kwh > 0.0)) throw Error(Errc::non_positive_total, "annual_kwh must be > 0");
    Pcg32 rng(seed);
    HourlyProfile profile;
    profile.values.resize(kHoursPerYear);

    double raw_total = 0.0;
    for (int day = 0; day < kDaysPerYear; ++day) {
        // Mild seasonal swing, highest in late spring.
        double season = 1.0 + 0.10 * std::cos(2.0 * std::numbers::pi * (day - 120) / 365.0);
        for (int hour = 0; hour < 24; ++hour) {
            double noise = 1.0 + 0.2 * (2.0 * rng.next_double() - 1.0);
            double v = kDairyHourWeight[hour] * season * noise;
            profile.values[static_cast<std::size_t>(day) * 24 + hour] = v;
            raw_total += v;
        }
    }
    double scale = annual_kwh / raw_total;
    for (double& v : profile.values) v *= scale;
    return profile;
}

HourlyProfile synth_pv_profile(double capacity_kw, std::uint64_t seed) {
    if (!(capacity_kw > 0.0)) throw Error(Errc::non_positive_capacity, "capacity must be > 0");
    Pcg32 rng(seed);
    HourlyProfile profile;
    profile.values.resize(kHoursPerYear);

    for (int day = 0; day < kDaysPerYear; ++day) {
        double day_angle = 2.0 * std::numbers::pi * (day - 172) / 365.0;
        double amplitude = 0.65 + 0.35 * std::cos(day_angle);  // summer high
        double half_width = 6.25 + 2.25 * std::cos(day_angle); // daylight half-span, hours
        double sunrise = 12.5 - half_width;
        double sunset = 12.5 + half_width;
        double clearness_u = rng.next_double();
        double clearness = 1.0 - 0.7 * clearness_u * clearness_u;
        for (int hour = 0; hour < 24; ++hour) {
            double jitter = 0.92 + 0.08 * rng.next_double();
            double t = hour + 0.5;
            double unit = 0.0;
            if (t > sunrise && t < sunset) {
                double phase = std::sin(std::numbers::pi * (t - sunrise) / (sunset - sunrise));
                unit = amplitude * clearness * jitter * phase * phase;
            }
            // Single multiply by capacity so different capacities scale exactly.
            profile.values[static_cast<std::size_t>(day) * 24 + hour] = capacity_kw * unit;
        }
    }
    return profile;
}

HourlyProfile synth_wind_profile(double capacity_kw, std::uint64_t seed) {
    if (!(capacity_kw > 0.0)) throw Error(Errc::non_positive_capacity, "capacity must be > 0");
    Pcg32 rng(seed);
    constexpr std::size_t window = 8;
    std::vector<double> noise(kHoursPerYear + window - 1);
    // Skewed draws put the mean near a 22% capacity factor, typical for a
    // farm-scale turbine at low hub height.
    for (double& n : noise) n = std::pow(rng.next_double(), 3.5);

    HourlyProfile profile;
    profile.values.resize(kHoursPerYear);
    for (std::size_t i = 0; i < kHoursPerYear; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < window; ++k) acc += noise[i + k];
        // Mild diurnal swing (thermally driven, strongest mid-afternoon) and
        // a winter-peaked seasonal swing.
        int hour = static_cast<int>(i % 24);
        std::size_t day = i / 24;
        double diurnal = 1.0 + 0.25 * std::cos(2.0 * std::numbers::pi * (hour - 15) / 24.0);
        double seasonal = 1.0 + 0.30 * std::cos(2.0 * std::numbers::pi * (day - 15.0) / 365.0);
        double unit = std::min((acc / window) * diurnal * seasonal, 1.0);
        profile.values[i] = capacity_kw * unit;
    }
    return profile;
}

} // namespace mapdes
