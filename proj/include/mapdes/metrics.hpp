#pragma once

#include <string>
#include <vector>

#include "mapdes/simulator.hpp"

namespace mapdes {

// Annual totals behind the comparison table. Cost counts hours where a farm
// was a net buyer, revenue hours where it was a net seller; the peak metric
// sums community grid imports over peak-window hours (kWh; with 1-hour steps
// the kW reading is numerically the same).
struct MetricsSummary {
    double total_purchase_cost = 0.0;      // EUR
    double total_sales_revenue = 0.0;      // EUR
    double peak_window_grid_import = 0.0;  // kWh
    double total_grid_import = 0.0;        // kWh
    double total_grid_export = 0.0;        // kWh
    std::vector<FarmTotals> farm_totals;
};

enum class DailyMetric { purchase_cost, sales_revenue, peak_grid_import };

// One value per simulated day; summing a series reproduces the matching
// MetricsSummary total bitwise (annual totals are folded day by day).
std::vector<double> daily_series(const ScenarioResult& result, const TimeOfUseTariff& tariff,
                                 DailyMetric metric);

// Folds only ledger-visible fields, so summarizing a parsed ledger gives the
// same result as summarizing the original run.
MetricsSummary summarize(const ScenarioResult& result, const TimeOfUseTariff& tariff);

double percent_reduction(double baseline, double treatment);
double percent_increase(double baseline, double treatment);

struct ComparisonRow {
    enum class Kind { absolute, reduction, increase };

    std::string label;
    Kind kind = Kind::absolute;
    double baseline = 0.0;
    double treatment = 0.0;
    double percent_delta = 0.0; // meaningful for percentage rows

    // What the table prints for this row.
    double value() const { return kind == Kind::absolute ? treatment : percent_delta; }
};

// The 12-row comparison table: seven absolute rows and five percentage rows.
// The "vs without RE" reduction is reported both ways: against the RE-only
// cost (how the headline figure is conventionally quoted) and strictly
// against the P2P cost.
std::vector<ComparisonRow> build_comparison(const MetricsSummary& no_re,
                                            const MetricsSummary& re_only,
                                            const MetricsSummary& re_p2p);

std::string emit_ledger_csv(const ScenarioResult& result);
ScenarioResult parse_ledger_csv(std::string_view text, const TimeOfUseTariff& tariff);

std::string emit_comparison_json(const std::vector<ComparisonRow>& rows);
std::string emit_comparison_text(const std::vector<ComparisonRow>& rows);

// Two-column CSV (date = 1-based day index) feeding the report plots.
std::string emit_figure_data(const ScenarioResult& result, const TimeOfUseTariff& tariff,
                             DailyMetric metric);

} // namespace mapdes
