#include "mapdes/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <memory>
#include <ostream>

#include <json.hpp>

#include "mapdes/config.hpp"
#include "mapdes/io_util.hpp"
#include "mapdes/metrics.hpp"

namespace mapdes::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kArtifactVersion = "mapdes 1.0";

std::uint64_t env_seed_or_default() {
    if (const char* env = std::getenv("MAPDES_SEED")) {
        double v = 0.0;
        if (parse_double(env, v) && v >= 0.0) return static_cast<std::uint64_t>(v);
    }
    return 42;
}

void write_manifest(const fs::path& path, std::string_view command,
                    const std::string& config_path, std::uint64_t seed,
                    const std::string& out_location) {
    ordered_json m;
    m["artifact_version"] = std::string(kArtifactVersion);
    m["command"] = std::string(command);
    m["config"] = config_path;
    m["seed"] = seed;
    m["out"] = out_location;
    write_text_file_atomic(path, m.dump(2) + "\n");
}

int config_exit(std::ostream& err, const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
}

ordered_json metrics_json(const MetricsSummary& s) {
    ordered_json m;
    m["total_purchase_cost_eur"] = s.total_purchase_cost;
    m["total_sales_revenue_eur"] = s.total_sales_revenue;
    m["peak_window_grid_import_kwh"] = s.peak_window_grid_import;
    m["total_grid_import_kwh"] = s.total_grid_import;
    m["total_grid_export_kwh"] = s.total_grid_export;
    ordered_json farms = ordered_json::array();
    for (const FarmTotals& f : s.farm_totals) {
        ordered_json fj;
        fj["farm_id"] = f.farm_id;
        fj["purchase_cost_eur"] = f.purchase_cost;
        fj["sales_revenue_eur"] = f.sales_revenue;
        farms.push_back(fj);
    }
    m["per_farm"] = farms;
    return m;
}

struct LoadedRun {
    ordered_json summary;
    ScenarioResult result;
    TimeOfUseTariff tariff;
};

TimeOfUseTariff tariff_from_fingerprint(const ordered_json& community) {
    TimeOfUseTariff t;
    const auto& tj = community.at("tariff");
    t.night_rate = tj.at("night_rate").get<double>();
    t.day_rate = tj.at("day_rate").get<double>();
    t.peak_rate = tj.at("peak_rate").get<double>();
    t.night_window.start = tj.at("night_window").at(0).get<int>();
    t.night_window.end = tj.at("night_window").at(1).get<int>();
    t.peak_window.start = tj.at("peak_window").at(0).get<int>();
    t.peak_window.end = tj.at("peak_window").at(1).get<int>();
    return t;
}

LoadedRun load_run(const fs::path& dir) {
    LoadedRun run;
    run.summary = ordered_json::parse(read_text_file(dir / "summary.json"));
    run.tariff = tariff_from_fingerprint(run.summary.at("community"));
    run.result = parse_ledger_csv(read_text_file(dir / "ledger.csv"), run.tariff);
    return run;
}

} // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_seed,
                           std::optional<std::uint64_t> config_seed) {
    if (flag_seed) return *flag_seed;
    if (config_seed) return *config_seed;
    return env_seed_or_default();
}

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
    CommunityConfig cfg;
    try {
        cfg = load_config(args.config_path);
    } catch (const std::exception& e) {
        return config_exit(err, e);
    }

    const std::uint64_t seed = resolve_seed(args.seed, cfg.seed);
    Hyperparameters hp = cfg.hp;
    if (args.episodes) hp.episodes = *args.episodes;

    const FarmConfig* target = nullptr;
    for (const FarmConfig& f : cfg.farms) {
        if (args.farm_id ? f.farm_id == *args.farm_id : f.agent == AgentKind::q_learning) {
            target = &f;
            break;
        }
    }
    if (!target && !args.farm_id) target = &cfg.farms.front();
    if (!target) {
        err << "config error: farm " << *args.farm_id << " not in config\n";
        return kExitConfigError;
    }

    try {
        hp.validate();
        std::vector<FarmSetup> farms = materialize_farms(cfg, seed);
        const FarmSetup* setup = nullptr;
        for (const FarmSetup& s : farms)
            if (s.data.farm_id == target->farm_id) setup = &s;
        write_manifest(fs::path(args.out_path).string() + ".manifest.json", "train",
                       args.config_path, seed, args.out_path);

        TrainResult trained = train(setup->data, setup->battery, cfg.tariff, cfg.feed_in, hp, seed);
        save_qtable(trained.table, args.out_path);

        std::vector<double> ma = moving_average(trained.episode_rewards, 200);
        std::string curve = "episode,total_reward,moving_avg_200\n";
        for (std::size_t i = 0; i < trained.episode_rewards.size(); ++i) {
            curve += format_int(static_cast<long long>(i));
            curve += ',';
            curve += format_double(trained.episode_rewards[i]);
            curve += ',';
            curve += format_double(ma[i]);
            curve += '\n';
        }
        write_text_file_atomic(fs::path(args.out_path).string() + ".curve.csv", curve);

        out << "trained farm " << target->farm_id << " for " << hp.episodes << " episodes; "
            << "final moving-average reward (window 200): "
            << (ma.empty() ? std::string("n/a") : format_double(ma.back())) << "\n";
        return kExitOk;
    } catch (const Error& e) {
        if (e.code() == Errc::io_failure) {
            err << "i/o error: " << e.what() << "\n";
            return kExitIoError;
        }
        return config_exit(err, e);
    }
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    CommunityConfig cfg;
    ScenarioKind scenario;
    try {
        cfg = load_config(args.config_path);
        auto kind = scenario_from_name(args.scenario);
        if (!kind) throw Error(Errc::bad_config, "unknown scenario '" + args.scenario + "'");
        scenario = *kind;
    } catch (const std::exception& e) {
        return config_exit(err, e);
    }

    const std::uint64_t seed = resolve_seed(args.seed, cfg.seed);
    const bool needs_qtable =
        scenario != ScenarioKind::no_re_no_p2p &&
        std::any_of(cfg.farms.begin(), cfg.farms.end(),
                    [](const FarmConfig& f) { return f.agent == AgentKind::q_learning; });

    std::shared_ptr<const QTable> qtable;
    if (needs_qtable) {
        if (args.qtable_path.empty()) {
            err << "missing q-table: scenario '" << args.scenario
                << "' has a q-learning agent; pass --qtable\n";
            return kExitMissingQTable;
        }
        try {
            qtable = std::make_shared<QTable>(load_qtable(args.qtable_path));
        } catch (const std::exception& e) {
            err << "missing or unusable q-table: " << e.what() << "\n";
            return kExitMissingQTable;
        }
    }

    try {
        SimulationConfig sim = make_simulation_config(cfg, scenario, seed, qtable);
        sim.validate();

        fs::create_directories(args.out_dir);
        write_manifest(fs::path(args.out_dir) / "manifest.json", "simulate", args.config_path,
                       seed, args.out_dir);

        ScenarioResult result = run_scenario(sim);
        write_text_file_atomic(fs::path(args.out_dir) / "ledger.csv", emit_ledger_csv(result));

        MetricsSummary summary = summarize(result, cfg.tariff);
        ordered_json sj;
        sj["artifact_version"] = std::string(kArtifactVersion);
        sj["scenario"] = scenario_name(scenario);
        sj["seed"] = seed;
        sj["metrics"] = metrics_json(summary);
        sj["community"] = ordered_json::parse(community_fingerprint_json(cfg, seed));
        write_text_file_atomic(fs::path(args.out_dir) / "summary.json", sj.dump(2) + "\n");

        out << scenario_name(scenario) << ": cost " << format_double(summary.total_purchase_cost)
            << " EUR, revenue " << format_double(summary.total_sales_revenue)
            << " EUR, peak-window grid import "
            << format_double(summary.peak_window_grid_import) << " kWh\n";
        return kExitOk;
    } catch (const Error& e) {
        if (e.code() == Errc::io_failure) {
            err << "i/o error: " << e.what() << "\n";
            return kExitIoError;
        }
        if (e.code() == Errc::missing_qtable) {
            err << "missing q-table: " << e.what() << "\n";
            return kExitMissingQTable;
        }
        return config_exit(err, e);
    }
}

int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
    LoadedRun no_re;
    LoadedRun re_only;
    LoadedRun re_p2p;
    try {
        no_re = load_run(args.no_re_dir);
        re_only = load_run(args.re_no_p2p_dir);
        re_p2p = load_run(args.re_p2p_dir);

        auto check_kind = [&](const LoadedRun& run, ScenarioKind want, const std::string& dir) {
            if (run.summary.at("scenario").get<std::string>() != scenario_name(want))
                throw Error(Errc::bad_config, dir + " does not hold a " + scenario_name(want) +
                                                  " run");
        };
        check_kind(no_re, ScenarioKind::no_re_no_p2p, args.no_re_dir);
        check_kind(re_only, ScenarioKind::re_no_p2p, args.re_no_p2p_dir);
        check_kind(re_p2p, ScenarioKind::re_p2p, args.re_p2p_dir);

        if (no_re.summary.at("community") != re_only.summary.at("community") ||
            no_re.summary.at("community") != re_p2p.summary.at("community"))
            throw Error(Errc::bad_config, "runs come from different communities");
    } catch (const std::exception& e) {
        return config_exit(err, e);
    }

    try {
        const TimeOfUseTariff& tariff = no_re.tariff;
        MetricsSummary base = summarize(no_re.result, tariff);
        MetricsSummary only = summarize(re_only.result, tariff);
        MetricsSummary p2p = summarize(re_p2p.result, tariff);
        std::vector<ComparisonRow> rows = build_comparison(base, only, p2p);

        fs::create_directories(args.out_dir);
        const fs::path out_dir(args.out_dir);
        write_manifest(out_dir / "manifest.json", "compare",
                       args.no_re_dir + "," + args.re_no_p2p_dir + "," + args.re_p2p_dir,
                       no_re.summary.at("seed").get<std::uint64_t>(), args.out_dir);

        write_text_file_atomic(out_dir / "comparison.json", emit_comparison_json(rows));
        std::string text = emit_comparison_text(rows);
        write_text_file_atomic(out_dir / "comparison.txt", text);

        auto figure = [&](const ScenarioResult& r, DailyMetric m, const char* name) {
            write_text_file_atomic(out_dir / name, emit_figure_data(r, tariff, m));
        };
        figure(no_re.result, DailyMetric::purchase_cost, "fig_cost_no_re_daily.csv");
        figure(re_only.result, DailyMetric::purchase_cost, "fig_cost_re_no_p2p_daily.csv");
        figure(re_p2p.result, DailyMetric::purchase_cost, "fig_cost_re_p2p_daily.csv");
        figure(re_only.result, DailyMetric::sales_revenue, "fig_revenue_re_no_p2p_daily.csv");
        figure(re_p2p.result, DailyMetric::sales_revenue, "fig_revenue_re_p2p_daily.csv");
        figure(re_only.result, DailyMetric::peak_grid_import,
               "fig_peak_import_re_no_p2p_daily.csv");
        figure(re_p2p.result, DailyMetric::peak_grid_import, "fig_peak_import_re_p2p_daily.csv");

        out << text;
        return kExitOk;
    } catch (const Error& e) {
        if (e.code() == Errc::io_failure) {
            err << "i/o error: " << e.what() << "\n";
            return kExitIoError;
        }
        return config_exit(err, e);
    }
}

} // namespace mapdes::cli
