#include "mapdes/config.hpp"

#include <algorithm>
#include <cmath>

#include "mapdes/io_util.hpp"

namespace mapdes {

namespace {

struct KeyValue {
    std::string key;
    std::string value;
    std::size_t line_no = 0;
};

struct Section {
    std::string name;
    std::vector<KeyValue> entries;
};

std::vector<Section> parse_sections(std::string_view text) {
    std::vector<Section> sections;
    std::size_t line_no = 0;
    for (std::string_view raw : split(text, '\n')) {
        ++line_no;
        std::string_view line = raw;
        if (auto pos = line.find('#'); pos != std::string_view::npos) line = line.substr(0, pos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw Error(Errc::bad_config,
                            "line " + format_int(static_cast<long long>(line_no)) +
                                ": unterminated section header");
            sections.push_back(Section{std::string(trim(line.substr(1, line.size() - 2))), {}});
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos || sections.empty())
            throw Error(Errc::bad_config, "line " + format_int(static_cast<long long>(line_no)) +
                                              ": expected 'key = value' inside a section");
        sections.back().entries.push_back(KeyValue{std::string(trim(line.substr(0, eq))),
                                                   std::string(trim(line.substr(eq + 1))),
                                                   line_no});
    }
    return sections;
}

[[noreturn]] void bad_key(const KeyValue& kv, const std::string& section) {
    throw Error(Errc::bad_config, "line " + format_int(static_cast<long long>(kv.line_no)) +
                                      ": unknown key '" + kv.key + "' in [" + section + "]");
}

double num_value(const KeyValue& kv) {
    double v = 0.0;
    if (!parse_double(kv.value, v))
        throw Error(Errc::bad_config, "line " + format_int(static_cast<long long>(kv.line_no)) +
                                          ": '" + kv.key + "' needs a number, got '" + kv.value +
                                          "'");
    return v;
}

long long int_value(const KeyValue& kv) {
    double v = num_value(kv);
    if (v != std::floor(v))
        throw Error(Errc::bad_config, "line " + format_int(static_cast<long long>(kv.line_no)) +
                                          ": '" + kv.key + "' needs an integer");
    return static_cast<long long>(v);
}

bool bool_value(const KeyValue& kv) {
    if (kv.value == "true" || kv.value == "on" || kv.value == "yes" || kv.value == "1")
        return true;
    if (kv.value == "false" || kv.value == "off" || kv.value == "no" || kv.value == "0")
        return false;
    throw Error(Errc::bad_config, "line " + format_int(static_cast<long long>(kv.line_no)) +
                                      ": '" + kv.key + "' needs a boolean");
}

void apply_community(CommunityConfig& cfg, const Section& s) {
    for (const KeyValue& kv : s.entries) {
        if (kv.key == "horizon_hours")
            cfg.horizon_hours = static_cast<std::size_t>(int_value(kv));
        else if (kv.key == "seed")
            cfg.seed = static_cast<std::uint64_t>(int_value(kv));
        else if (kv.key == "night_rate")
            cfg.tariff.night_rate = num_value(kv);
        else if (kv.key == "day_rate")
            cfg.tariff.day_rate = num_value(kv);
        else if (kv.key == "peak_rate")
            cfg.tariff.peak_rate = num_value(kv);
        else if (kv.key == "night_start")
            cfg.tariff.night_window.start = static_cast<int>(int_value(kv));
        else if (kv.key == "night_end")
            cfg.tariff.night_window.end = static_cast<int>(int_value(kv));
        else if (kv.key == "peak_start")
            cfg.tariff.peak_window.start = static_cast<int>(int_value(kv));
        else if (kv.key == "peak_end")
            cfg.tariff.peak_window.end = static_cast<int>(int_value(kv));
        else if (kv.key == "feed_in")
            cfg.feed_in.lambda_sell = num_value(kv);
        else
            bad_key(kv, s.name);
    }
}

void apply_battery(BatterySpec& spec, const Section& s) {
    for (const KeyValue& kv : s.entries) {
        if (kv.key == "capacity_kwh")
            spec.capacity = num_value(kv);
        else if (kv.key == "max_charge_kw")
            spec.max_charge_power = num_value(kv);
        else if (kv.key == "max_discharge_kw")
            spec.max_discharge_power = num_value(kv);
        else if (kv.key == "eta_charge")
            spec.eta_c = num_value(kv);
        else if (kv.key == "eta_discharge")
            spec.eta_d = num_value(kv);
        else if (kv.key == "soc_min_frac")
            spec.soc_min_frac = num_value(kv);
        else if (kv.key == "soc_max_frac")
            spec.soc_max_frac = num_value(kv);
        else if (kv.key == "initial_soc_frac")
            spec.initial_soc_frac = num_value(kv);
        else
            bad_key(kv, s.name);
    }
}

void apply_qlearning(Hyperparameters& hp, const Section& s) {
    for (const KeyValue& kv : s.entries) {
        if (kv.key == "alpha")
            hp.alpha = num_value(kv);
        else if (kv.key == "gamma")
            hp.gamma = num_value(kv);
        else if (kv.key == "epsilon_start")
            hp.epsilon_start = num_value(kv);
        else if (kv.key == "epsilon_decay")
            hp.epsilon_decay = num_value(kv);
        else if (kv.key == "epsilon_min")
            hp.epsilon_min = num_value(kv);
        else if (kv.key == "episodes")
            hp.episodes = int_value(kv);
        else if (kv.key == "invalid_penalty")
            hp.invalid_penalty = num_value(kv);
        else if (kv.key == "peak_weight")
            hp.peak_weight = num_value(kv);
        else
            bad_key(kv, s.name);
    }
}

void apply_farm(FarmConfig& farm, const Section& s) {
    for (const KeyValue& kv : s.entries) {
        if (kv.key == "agent") {
            if (kv.value == "qlearning" || kv.value == "q-learning")
                farm.agent = AgentKind::q_learning;
            else if (kv.value == "rule" || kv.value == "rule-based")
                farm.agent = AgentKind::rule_based;
            else
                throw Error(Errc::bad_config,
                            "line " + format_int(static_cast<long long>(kv.line_no)) +
                                ": agent must be 'rule' or 'qlearning'");
        } else if (kv.key == "battery")
            farm.battery_enabled = bool_value(kv);
        else if (kv.key == "annual_load_kwh")
            farm.annual_load_kwh = num_value(kv);
        else if (kv.key == "pv_capacity_kw")
            farm.pv_capacity_kw = num_value(kv);
        else if (kv.key == "wind_capacity_kw")
            farm.wind_capacity_kw = num_value(kv);
        else if (kv.key == "load_csv")
            farm.load_csv = kv.value;
        else if (kv.key == "pv_csv")
            farm.pv_csv = kv.value;
        else if (kv.key == "wind_csv")
            farm.wind_csv = kv.value;
        else
            bad_key(kv, s.name);
    }
}

// Stable per-farm, per-series sub-seeds from the one community seed.
std::uint64_t series_seed(std::uint64_t seed, int farm_id, int series) {
    std::uint64_t state = seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(farm_id + 1));
    std::uint64_t value = 0;
    for (int i = 0; i <= series; ++i) value = splitmix64(state);
    return value;
}

} // namespace

CommunityConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    CommunityConfig cfg;
    cfg.base_dir = base_dir;
    for (const Section& s : parse_sections(text)) {
        if (s.name == "community")
            apply_community(cfg, s);
        else if (s.name == "battery")
            apply_battery(cfg.battery, s);
        else if (s.name == "qlearning")
            apply_qlearning(cfg.hp, s);
        else if (s.name.rfind("farm:", 0) == 0) {
            FarmConfig farm;
            double id = 0.0;
            if (!parse_double(s.name.substr(5), id) || id != std::floor(id) || id < 0)
                throw Error(Errc::bad_config, "bad farm section name '[" + s.name + "]'");
            farm.farm_id = static_cast<int>(id);
            apply_farm(farm, s);
            cfg.farms.push_back(std::move(farm));
        } else
            throw Error(Errc::bad_config, "unknown section [" + s.name + "]");
    }
    if (cfg.farms.empty()) throw Error(Errc::bad_config, "config declares no farms");
    std::sort(cfg.farms.begin(), cfg.farms.end(),
              [](const FarmConfig& a, const FarmConfig& b) { return a.farm_id < b.farm_id; });
    for (std::size_t i = 1; i < cfg.farms.size(); ++i)
        if (cfg.farms[i].farm_id == cfg.farms[i - 1].farm_id)
            throw Error(Errc::bad_config,
                        "duplicate farm id " + format_int(cfg.farms[i].farm_id));
    cfg.tariff.validate();
    cfg.battery.validate();
    cfg.hp.validate();
    if (!(cfg.feed_in.lambda_sell > 0.0 && cfg.feed_in.lambda_sell < cfg.tariff.night_rate))
        throw Error(Errc::bad_config, "feed_in must be in (0, night_rate)");
    if (cfg.horizon_hours == 0) throw Error(Errc::bad_config, "horizon_hours must be > 0");
    return cfg;
}

CommunityConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_text_file(path), path.parent_path());
}

std::vector<FarmSetup> materialize_farms(const CommunityConfig& cfg, std::uint64_t seed) {
    std::vector<FarmSetup> farms;
    farms.reserve(cfg.farms.size());
    for (const FarmConfig& fc : cfg.farms) {
        FarmSetup setup;
        setup.agent = fc.agent;
        setup.battery = cfg.battery;
        setup.battery_enabled = fc.battery_enabled;
        setup.annual_load_kwh = fc.load_csv.empty() ? fc.annual_load_kwh : 0.0;
        setup.data.farm_id = fc.farm_id;
        setup.data.pv_capacity = fc.pv_capacity_kw;
        setup.data.wind_capacity = fc.wind_capacity_kw;

        auto from_csv = [&](const std::string& rel) {
            return parse_profile_csv(read_text_file(cfg.base_dir / rel), cfg.horizon_hours);
        };
        // Generators always cover one year; shorter config horizons take a
        // prefix so quick runs stay cheap and deterministic.
        auto clip = [&](HourlyProfile p) {
            if (cfg.horizon_hours > p.horizon_hours())
                throw Error(Errc::horizon_mismatch,
                            "synthetic profiles cover at most " +
                                format_int(static_cast<long long>(p.horizon_hours())) + " hours");
            p.values.resize(cfg.horizon_hours);
            return p;
        };
        setup.data.load = fc.load_csv.empty()
                              ? clip(synth_dairy_load(fc.annual_load_kwh,
                                                      series_seed(seed, fc.farm_id, 0)))
                              : from_csv(fc.load_csv);
        setup.data.pv = fc.pv_csv.empty()
                            ? clip(synth_pv_profile(fc.pv_capacity_kw,
                                                    series_seed(seed, fc.farm_id, 1)))
                            : from_csv(fc.pv_csv);
        setup.data.wind = fc.wind_csv.empty()
                              ? clip(synth_wind_profile(fc.wind_capacity_kw,
                                                        series_seed(seed, fc.farm_id, 2)))
                              : from_csv(fc.wind_csv);
        farms.push_back(std::move(setup));
    }
    return farms;
}

SimulationConfig make_simulation_config(const CommunityConfig& cfg, ScenarioKind scenario,
                                        std::uint64_t seed,
                                        std::shared_ptr<const QTable> qtable) {
    SimulationConfig sim;
    sim.farms = materialize_farms(cfg, seed);
    sim.tariff = cfg.tariff;
    sim.feed_in = cfg.feed_in;
    sim.scenario = scenario;
    sim.seed = seed;
    sim.horizon_hours = cfg.horizon_hours;
    sim.qtable = std::move(qtable);
    return sim;
}

std::string community_fingerprint_json(const CommunityConfig& cfg, std::uint64_t seed) {
    std::string out = "{";
    out += "\"horizon_hours\": " + format_int(static_cast<long long>(cfg.horizon_hours));
    out += ", \"seed\": " + format_int(static_cast<long long>(seed));
    out += ", \"tariff\": {\"night_rate\": " + format_double(cfg.tariff.night_rate) +
           ", \"day_rate\": " + format_double(cfg.tariff.day_rate) +
           ", \"peak_rate\": " + format_double(cfg.tariff.peak_rate) + ", \"night_window\": [" +
           format_int(cfg.tariff.night_window.start) + ", " +
           format_int(cfg.tariff.night_window.end) + "], \"peak_window\": [" +
           format_int(cfg.tariff.peak_window.start) + ", " +
           format_int(cfg.tariff.peak_window.end) + "]}";
    out += ", \"feed_in\": " + format_double(cfg.feed_in.lambda_sell);
    out += ", \"battery\": {\"capacity_kwh\": " + format_double(cfg.battery.capacity) +
           ", \"max_charge_kw\": " + format_double(cfg.battery.max_charge_power) +
           ", \"max_discharge_kw\": " + format_double(cfg.battery.max_discharge_power) +
           ", \"eta_charge\": " + format_double(cfg.battery.eta_c) +
           ", \"eta_discharge\": " + format_double(cfg.battery.eta_d) +
           ", \"soc_min_frac\": " + format_double(cfg.battery.soc_min_frac) +
           ", \"soc_max_frac\": " + format_double(cfg.battery.soc_max_frac) +
           ", \"initial_soc_frac\": " + format_double(cfg.battery.initial_soc_frac) + "}";
    out += ", \"farms\": [";
    for (std::size_t i = 0; i < cfg.farms.size(); ++i) {
        const FarmConfig& f = cfg.farms[i];
        if (i) out += ", ";
        out += "{\"farm_id\": " + format_int(f.farm_id) + ", \"agent\": \"" +
               (f.agent == AgentKind::q_learning ? "qlearning" : "rule") +
               "\", \"battery\": " + (f.battery_enabled ? "true" : "false") +
               ", \"annual_load_kwh\": " + format_double(f.annual_load_kwh) +
               ", \"pv_capacity_kw\": " + format_double(f.pv_capacity_kw) +
               ", \"wind_capacity_kw\": " + format_double(f.wind_capacity_kw) +
               ", \"load_csv\": \"" + f.load_csv + "\", \"pv_csv\": \"" + f.pv_csv +
               "\", \"wind_csv\": \"" + f.wind_csv + "\"}";
    }
    out += "]}";
    return out;
}

} // namespace mapdes
