#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mapdes/io_util.hpp"
#include "mapdes/metrics.hpp"
#include "mapdes/rng.hpp"

using namespace mapdes;

namespace {

ScenarioResult single_hour_result(std::size_t hour, double buy_kwh, ScenarioKind kind) {
    ScenarioResult r;
    r.scenario = kind;
    r.farm_ids = {0};
    HourRecord rec;
    rec.hour = hour;
    TimeOfUseTariff tariff;
    double rate = rate_at(tariff, static_cast<int>(hour % 24));
    FarmHourRecord f;
    f.load = buy_kwh;
    f.e_buy = buy_kwh;
    f.cash = -buy_kwh * rate;
    rec.farms.push_back(f);
    rec.quote = PriceQuote{0.09, rate, 0.0};
    r.hours.push_back(rec);
    return r;
}

ScenarioResult random_result(Pcg32& rng, std::size_t hours, std::size_t farms) {
    ScenarioResult r;
    r.scenario = ScenarioKind::re_p2p;
    for (std::size_t i = 0; i < farms; ++i) r.farm_ids.push_back(static_cast<int>(i));
    for (std::size_t t = 0; t < hours; ++t) {
        HourRecord rec;
        rec.hour = t;
        rec.quote = PriceQuote{0.1, 0.2, 0.5};
        for (std::size_t i = 0; i < farms; ++i) {
            FarmHourRecord f;
            f.load = 5.0 * rng.next_double();
            f.generation = 5.0 * rng.next_double();
            if (rng.next_u32() & 1u)
                f.e_buy = 4.0 * rng.next_double();
            else
                f.e_sell = 4.0 * rng.next_double();
            f.cash = f.e_sell * 0.1 - f.e_buy * 0.2;
            f.soc = 3.0 * rng.next_double();
            rec.farms.push_back(f);
        }
        r.hours.push_back(std::move(rec));
    }
    return r;
}

} // namespace

TEST_CASE("summarize on an empty and a single-hour ledger") {
    TimeOfUseTariff tariff;
    ScenarioResult empty;
    MetricsSummary zero = summarize(empty, tariff);
    CHECK(zero.total_purchase_cost == 0.0);
    CHECK(zero.total_sales_revenue == 0.0);
    CHECK(zero.peak_window_grid_import == 0.0);

    // 5 kWh bought at hour 18 (peak): cost 1.50 EUR, peak import 5 kWh.
    MetricsSummary peak = summarize(single_hour_result(18, 5.0, ScenarioKind::re_no_p2p), tariff);
    CHECK(peak.total_purchase_cost == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(peak.peak_window_grid_import == doctest::Approx(5.0).epsilon(1e-12));

    // Same purchase at hour 10: nothing counts toward the peak metric.
    MetricsSummary off = summarize(single_hour_result(10, 5.0, ScenarioKind::re_no_p2p), tariff);
    CHECK(off.total_purchase_cost == doctest::Approx(5.0 * 0.21).epsilon(1e-12));
    CHECK(off.peak_window_grid_import == 0.0);
}

TEST_CASE("percent helpers reproduce the published arithmetic") {
    CHECK(percent_reduction(51710.0, 15284.0) == doctest::Approx(70.44).epsilon(0.0002));
    CHECK(percent_reduction(15284.0, 14653.0) == doctest::Approx(4.13).epsilon(0.0005));
    CHECK(percent_increase(46022.0, 46904.0) == doctest::Approx(1.92).epsilon(0.005));
    CHECK(percent_reduction(27837.0, 3382.0) == doctest::Approx(87.85).epsilon(0.0005));
    CHECK(percent_reduction(5.0, 5.0) == 0.0);
    CHECK(percent_increase(5.0, 5.0) == 0.0);
    CHECK_THROWS_AS(percent_reduction(0.0, 1.0), Error);
    CHECK_THROWS_AS(percent_increase(0.0, 1.0), Error);
}

TEST_CASE("reduction and increase are exact negatives") {
    Pcg32 rng(12);
    for (int i = 0; i < 1000; ++i) {
        double b = 0.5 + 100.0 * rng.next_double();
        double t = 100.0 * rng.next_double();
        CHECK(percent_reduction(b, t) == -percent_increase(b, t));
    }
}

TEST_CASE("build_comparison emits the 12-row table") {
    MetricsSummary base;
    base.total_purchase_cost = 51710.0;
    MetricsSummary re_only;
    re_only.total_purchase_cost = 15284.0;
    re_only.total_sales_revenue = 46022.0;
    re_only.peak_window_grid_import = 27837.0;
    MetricsSummary p2p;
    p2p.total_purchase_cost = 14653.0;
    p2p.total_sales_revenue = 46904.0;
    p2p.peak_window_grid_import = 3382.0;

    std::vector<ComparisonRow> rows = build_comparison(base, re_only, p2p);
    REQUIRE(rows.size() == 12);

    int pct_rows = 0;
    for (const ComparisonRow& r : rows)
        if (r.kind != ComparisonRow::Kind::absolute) ++pct_rows;
    CHECK(pct_rows == 5);

    // Absolute rows echo their inputs exactly.
    CHECK(rows[0].value() == 51710.0);
    CHECK(rows[1].value() == 15284.0);
    CHECK(rows[2].value() == 14653.0);
    CHECK(rows[6].value() == 46022.0);
    CHECK(rows[7].value() == 46904.0);
    CHECK(rows[9].value() == 27837.0);
    CHECK(rows[10].value() == 3382.0);

    // Percentage rows, at the table's published precision.
    CHECK(rows[3].percent_delta == doctest::Approx(70.44).epsilon(0.001));
    CHECK(rows[5].percent_delta == doctest::Approx(4.13).epsilon(0.001));
    CHECK(rows[8].percent_delta == doctest::Approx(1.91).epsilon(0.005));
    CHECK(rows[11].percent_delta == doctest::Approx(87.84).epsilon(0.001));

    std::vector<ComparisonRow> same = build_comparison(re_only, re_only, re_only);
    for (const ComparisonRow& r : same)
        if (r.kind != ComparisonRow::Kind::absolute) CHECK(r.percent_delta == 0.0);
}

TEST_CASE("ledger round trip reproduces the summary exactly") {
    Pcg32 rng(55);
    ScenarioResult r = random_result(rng, 72, 4);
    TimeOfUseTariff tariff;
    std::string csv = emit_ledger_csv(r);

    // Shape: one header plus hours x farms rows.
    std::size_t newlines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(newlines == 1 + 72 * 4);

    ScenarioResult parsed = parse_ledger_csv(csv, tariff);
    CHECK(parsed.scenario == r.scenario);
    CHECK(parsed.farm_ids == r.farm_ids);
    REQUIRE(parsed.hours.size() == r.hours.size());

    MetricsSummary original = summarize(r, tariff);
    MetricsSummary reparsed = summarize(parsed, tariff);
    CHECK(reparsed.total_purchase_cost == original.total_purchase_cost); // bitwise
    CHECK(reparsed.total_sales_revenue == original.total_sales_revenue);
    CHECK(reparsed.peak_window_grid_import == original.peak_window_grid_import);
    CHECK(emit_ledger_csv(parsed) == csv);
}

TEST_CASE("daily figure data partitions the annual totals") {
    Pcg32 rng(56);
    ScenarioResult r = random_result(rng, 24 * 10, 3);
    TimeOfUseTariff tariff;
    MetricsSummary s = summarize(r, tariff);

    for (auto [metric, total] :
         {std::pair{DailyMetric::purchase_cost, s.total_purchase_cost},
          std::pair{DailyMetric::sales_revenue, s.total_sales_revenue},
          std::pair{DailyMetric::peak_grid_import, s.peak_window_grid_import}}) {
        std::vector<double> days = daily_series(r, tariff, metric);
        CHECK(days.size() == 10);
        double acc = 0.0;
        for (double v : days) acc += v;
        CHECK(acc == total); // same fold order: bitwise

        std::string csv = emit_figure_data(r, tariff, metric);
        // Re-parse the emitted file and re-sum.
        double file_sum = 0.0;
        std::size_t rows = 0;
        for (std::string_view line : split(csv, '\n')) {
            if (line.empty() || line.rfind("date", 0) == 0) continue;
            auto fields = split(line, ',');
            REQUIRE(fields.size() == 2);
            double v = 0.0;
            REQUIRE(parse_double(fields[1], v));
            file_sum += v;
            ++rows;
        }
        CHECK(rows == 10);
        CHECK(file_sum == total);
    }
}

TEST_CASE("comparison emitters") {
    MetricsSummary a;
    a.total_purchase_cost = 100.0;
    a.total_sales_revenue = 10.0;
    a.peak_window_grid_import = 50.0;
    MetricsSummary b = a;
    b.total_purchase_cost = 80.0;
    MetricsSummary c = b;
    c.total_purchase_cost = 60.0;
    c.total_sales_revenue = 12.0;
    c.peak_window_grid_import = 25.0;

    std::vector<ComparisonRow> rows = build_comparison(a, b, c);
    std::string json = emit_comparison_json(rows);
    CHECK(json.find("\"rows\"") != std::string::npos);
    CHECK(json.find("Electricity cost with no RE (EUR)") != std::string::npos);
    CHECK(json.find("100") != std::string::npos);

    std::string text = emit_comparison_text(rows);
    CHECK(std::count(text.begin(), text.end(), '\n') == 12);
}
