#pragma once

#include "mapdes/errors.hpp"

namespace mapdes {

// Half-open hour window [start, end) on the 0..23 clock. start > end wraps
// past midnight; start == end is the empty window.
struct HourWindow {
    int start = 0;
    int end = 0;

    bool contains(int hour_of_day) const {
        if (start == end) return false;
        if (start < end) return hour_of_day >= start && hour_of_day < end;
        return hour_of_day >= start || hour_of_day < end;
    }
};

// Three-tier time-of-use grid tariff. Hours outside the night and peak
// windows bill at the day rate.
struct TimeOfUseTariff {
    double night_rate = 0.12; // EUR/kWh
    double day_rate = 0.21;
    double peak_rate = 0.30;
    HourWindow night_window{23, 8};
    HourWindow peak_window{17, 19};

    void validate() const;
};

// Price the grid pays for exported energy.
struct FeedInPrice {
    double lambda_sell = 0.09; // EUR/kWh
};

// Hourly internal price pair derived from the supply-demand ratio.
struct PriceQuote {
    double isp = 0.0; // internal selling price, what sellers receive
    double ibp = 0.0; // internal buying price, what buyers pay
    double sdr = 0.0;
};

double rate_at(const TimeOfUseTariff& tariff, int hour_of_day);

bool is_peak(const TimeOfUseTariff& tariff, int hour_of_day);

// total_offer / total_bid. A zero-bid hour has no internal buyer, so the
// result routes to the sdr > 1 branch (sellers face feed-in terms).
double compute_sdr(double total_offer, double total_bid);

// SDR pricing scheme:
//   0 <= sdr <= 1:  isp = (ls*lb) / ((lb - ls)*sdr + ls)
//                   ibp = isp*sdr + lb*(1 - sdr)
//   sdr > 1:        isp = ibp = ls
// Satisfies ls <= isp <= ibp <= lb for all sdr >= 0 and is budget balanced
// under full-demand settlement at ibp.
PriceQuote internal_prices(double sdr, double lambda_buy, double lambda_sell);

} // namespace mapdes
