#include "mapdes/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mapdes/io_util.hpp"

namespace mapdes {

namespace {

double hour_grid_import(const HourRecord& rec, bool p2p) {
    double bids = 0.0;
    double offers = 0.0;
    for (const FarmHourRecord& f : rec.farms) {
        double net = f.e_sell - (f.e_buy + f.forced_purchase);
        if (net > 0.0)
            offers += net;
        else
            bids += -net;
    }
    return p2p ? std::max(bids - offers, 0.0) : bids;
}

double hour_grid_export(const HourRecord& rec, bool p2p) {
    double bids = 0.0;
    double offers = 0.0;
    for (const FarmHourRecord& f : rec.farms) {
        double net = f.e_sell - (f.e_buy + f.forced_purchase);
        if (net > 0.0)
            offers += net;
        else
            bids += -net;
    }
    return p2p ? std::max(offers - bids, 0.0) : offers;
}

} // namespace

std::vector<double> daily_series(const ScenarioResult& result, const TimeOfUseTariff& tariff,
                                 DailyMetric metric) {
    const bool p2p = result.scenario == ScenarioKind::re_p2p;
    std::size_t days = result.hours.empty() ? 0 : (result.hours.back().hour / 24) + 1;
    std::vector<double> out(days, 0.0);
    for (const HourRecord& rec : result.hours) {
        std::size_t day = rec.hour / 24;
        int hour_of_day = static_cast<int>(rec.hour % 24);
        double v = 0.0;
        switch (metric) {
            case DailyMetric::purchase_cost:
                for (const FarmHourRecord& f : rec.farms)
                    if (f.cash < 0.0) v += -f.cash;
                break;
            case DailyMetric::sales_revenue:
                for (const FarmHourRecord& f : rec.farms)
                    if (f.cash > 0.0) v += f.cash;
                break;
            case DailyMetric::peak_grid_import:
                if (is_peak(tariff, hour_of_day)) v = hour_grid_import(rec, p2p);
                break;
        }
        out[day] += v;
    }
    return out;
}

MetricsSummary summarize(const ScenarioResult& result, const TimeOfUseTariff& tariff) {
    const bool p2p = result.scenario == ScenarioKind::re_p2p;
    MetricsSummary s;
    for (double v : daily_series(result, tariff, DailyMetric::purchase_cost))
        s.total_purchase_cost += v;
    for (double v : daily_series(result, tariff, DailyMetric::sales_revenue))
        s.total_sales_revenue += v;
    for (double v : daily_series(result, tariff, DailyMetric::peak_grid_import))
        s.peak_window_grid_import += v;

    s.farm_totals.resize(result.farm_ids.size());
    for (std::size_t i = 0; i < result.farm_ids.size(); ++i)
        s.farm_totals[i].farm_id = result.farm_ids[i];
    for (const HourRecord& rec : result.hours) {
        s.total_grid_import += hour_grid_import(rec, p2p);
        s.total_grid_export += hour_grid_export(rec, p2p);
        for (std::size_t i = 0; i < rec.farms.size() && i < s.farm_totals.size(); ++i) {
            double cash = rec.farms[i].cash;
            if (cash < 0.0)
                s.farm_totals[i].purchase_cost += -cash;
            else
                s.farm_totals[i].sales_revenue += cash;
        }
    }
    return s;
}

double percent_reduction(double baseline, double treatment) {
    if (!(baseline > 0.0)) throw Error(Errc::zero_baseline, "baseline must be > 0");
    return (baseline - treatment) / baseline * 100.0;
}

double percent_increase(double baseline, double treatment) {
    if (!(baseline > 0.0)) throw Error(Errc::zero_baseline, "baseline must be > 0");
    return (treatment - baseline) / baseline * 100.0;
}

std::vector<ComparisonRow> build_comparison(const MetricsSummary& no_re,
                                            const MetricsSummary& re_only,
                                            const MetricsSummary& re_p2p) {
    using Kind = ComparisonRow::Kind;
    auto absolute = [](std::string label, double v) {
        return ComparisonRow{std::move(label), Kind::absolute, v, v, 0.0};
    };
    auto reduction = [](std::string label, double baseline, double treatment) {
        return ComparisonRow{std::move(label), Kind::reduction, baseline, treatment,
                             percent_reduction(baseline, treatment)};
    };
    auto increase = [](std::string label, double baseline, double treatment) {
        return ComparisonRow{std::move(label), Kind::increase, baseline, treatment,
                             percent_increase(baseline, treatment)};
    };

    std::vector<ComparisonRow> rows;
    rows.reserve(12);
    rows.push_back(absolute("Electricity cost with no RE (EUR)", no_re.total_purchase_cost));
    rows.push_back(
        absolute("Electricity cost with RE no P2P (EUR)", re_only.total_purchase_cost));
    rows.push_back(
        absolute("Electricity cost with P2P and RE (EUR)", re_p2p.total_purchase_cost));
    rows.push_back(reduction("Electricity cost reduction with P2P and RE vs without RE (%)",
                             no_re.total_purchase_cost, re_only.total_purchase_cost));
    rows.push_back(
        reduction("Electricity cost reduction with P2P and RE vs without RE, strict (%)",
                  no_re.total_purchase_cost, re_p2p.total_purchase_cost));
    rows.push_back(reduction("Electricity cost reduction with P2P and RE vs with RE only (%)",
                             re_only.total_purchase_cost, re_p2p.total_purchase_cost));
    rows.push_back(absolute("Electricity revenue without P2P (EUR)", re_only.total_sales_revenue));
    rows.push_back(absolute("Electricity revenue with P2P (EUR)", re_p2p.total_sales_revenue));
    rows.push_back(increase("Electricity revenue increase P2P vs no P2P (%)",
                            re_only.total_sales_revenue, re_p2p.total_sales_revenue));
    rows.push_back(
        absolute("Peak demand without P2P (kWh)", re_only.peak_window_grid_import));
    rows.push_back(absolute("Peak demand with P2P (kWh)", re_p2p.peak_window_grid_import));
    rows.push_back(reduction("Peak demand reduction using P2P vs no P2P (%)",
                             re_only.peak_window_grid_import, re_p2p.peak_window_grid_import));
    return rows;
}

std::string emit_ledger_csv(const ScenarioResult& result) {
    std::string out =
        "hour,farm_id,load_kwh,gen_kwh,buy_kwh,sell_kwh,charge_kwh,discharge_kwh,forced_kwh,"
        "curtailed_kwh,cash_eur,soc_kwh,isp,ibp,scenario\n";
    const std::string scenario = scenario_name(result.scenario);
    for (const HourRecord& rec : result.hours) {
        for (std::size_t i = 0; i < rec.farms.size(); ++i) {
            const FarmHourRecord& f = rec.farms[i];
            out += format_int(static_cast<long long>(rec.hour));
            out += ',';
            out += format_int(result.farm_ids[i]);
            for (double v : {f.load, f.generation, f.e_buy, f.e_sell, f.e_charge, f.e_discharge,
                             f.forced_purchase, f.e_curtailed, f.cash, f.soc, rec.quote.isp,
                             rec.quote.ibp}) {
                out += ',';
                out += format_double(v);
            }
            out += ',';
            out += scenario;
            out += '\n';
        }
    }
    return out;
}

ScenarioResult parse_ledger_csv(std::string_view text, const TimeOfUseTariff& tariff) {
    std::vector<std::string_view> lines = split(text, '\n');
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw Error(Errc::malformed, "empty ledger");

    ScenarioResult result;
    bool scenario_seen = false;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        auto fields = split(lines[li], ',');
        if (fields.size() != 15) throw Error(Errc::malformed, "ledger row needs 15 fields");
        auto num = [&](std::size_t idx) {
            double v = 0.0;
            if (!parse_double(fields[idx], v))
                throw Error(Errc::malformed, "bad ledger number: '" + std::string(fields[idx]) + "'");
            return v;
        };
        std::size_t hour = static_cast<std::size_t>(num(0));
        int farm_id = static_cast<int>(num(1));
        if (!scenario_seen) {
            auto kind = scenario_from_name(trim(fields[14]));
            if (!kind) throw Error(Errc::malformed, "unknown scenario in ledger");
            result.scenario = *kind;
            scenario_seen = true;
        }
        if (result.hours.empty() || result.hours.back().hour != hour) {
            HourRecord rec;
            rec.hour = hour;
            rec.quote = PriceQuote{num(12), num(13), 0.0};
            result.hours.push_back(std::move(rec));
        }
        if (result.hours.size() == 1) result.farm_ids.push_back(farm_id);
        FarmHourRecord f;
        f.load = num(2);
        f.generation = num(3);
        f.e_buy = num(4);
        f.e_sell = num(5);
        f.e_charge = num(6);
        f.e_discharge = num(7);
        f.forced_purchase = num(8);
        f.e_curtailed = num(9);
        f.cash = num(10);
        f.soc = num(11);
        result.hours.back().farms.push_back(f);
    }

    const bool p2p = result.scenario == ScenarioKind::re_p2p;
    for (HourRecord& rec : result.hours) {
        rec.grid_import = hour_grid_import(rec, p2p);
        rec.grid_export = hour_grid_export(rec, p2p);
    }
    MetricsSummary summary = summarize(result, tariff);
    result.farm_totals = summary.farm_totals;
    result.total_purchase_cost = summary.total_purchase_cost;
    result.total_sales_revenue = summary.total_sales_revenue;
    result.total_grid_import = summary.total_grid_import;
    result.total_grid_export = summary.total_grid_export;
    return result;
}

std::string emit_comparison_json(const std::vector<ComparisonRow>& rows) {
    // Assembled by hand to keep full control of number formatting.
    std::string out = "{\n  \"rows\": [\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ComparisonRow& r = rows[i];
        const char* kind = r.kind == ComparisonRow::Kind::absolute
                               ? "absolute"
                               : (r.kind == ComparisonRow::Kind::reduction ? "reduction"
                                                                           : "increase");
        out += "    {\"label\": \"" + r.label + "\", \"kind\": \"" + kind + "\", \"baseline\": " +
               format_double(r.baseline) + ", \"treatment\": " + format_double(r.treatment) +
               ", \"percent_delta\": " + format_double(r.percent_delta) +
               ", \"value\": " + format_double(r.value()) + "}";
        out += (i + 1 < rows.size()) ? ",\n" : "\n";
    }
    out += "  ]\n}\n";
    return out;
}

std::string emit_comparison_text(const std::vector<ComparisonRow>& rows) {
    std::size_t width = 0;
    for (const ComparisonRow& r : rows) width = std::max(width, r.label.size());
    std::string out;
    for (const ComparisonRow& r : rows) {
        std::string value = format_double(r.value());
        out += r.label;
        out.append(width + 2 - r.label.size(), ' ');
        out += value;
        out += '\n';
    }
    return out;
}

std::string emit_figure_data(const ScenarioResult& result, const TimeOfUseTariff& tariff,
                             DailyMetric metric) {
    std::vector<double> days = daily_series(result, tariff, metric);
    std::string out = "date,value\n";
    for (std::size_t d = 0; d < days.size(); ++d) {
        out += format_int(static_cast<long long>(d + 1));
        out += ',';
        out += format_double(days[d]);
        out += '\n';
    }
    return out;
}

} // namespace mapdes
