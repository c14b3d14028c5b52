#include "mapdes/pricing.hpp"

#include <limits>

namespace mapdes {

void TimeOfUseTariff::validate() const {
    if (!(night_rate > 0.0 && night_rate <= day_rate && day_rate <= peak_rate))
        throw Error(Errc::bad_config, "tariff rates must satisfy 0 < night <= day <= peak");
    for (int h = 0; h < 24; ++h) {
        if (night_window.contains(h) && peak_window.contains(h))
            throw Error(Errc::bad_config, "night and peak windows overlap");
    }
}

double rate_at(const TimeOfUseTariff& tariff, int hour_of_day) {
    if (tariff.peak_window.contains(hour_of_day)) return tariff.peak_rate;
    if (tariff.night_window.contains(hour_of_day)) return tariff.night_rate;
    return tariff.day_rate;
}

bool is_peak(const TimeOfUseTariff& tariff, int hour_of_day) {
    return tariff.peak_window.contains(hour_of_day);
}

double compute_sdr(double total_offer, double total_bid) {
    if (total_bid <= 0.0) return std::numeric_limits<double>::infinity();
    return total_offer / total_bid;
}

PriceQuote internal_prices(double sdr, double lambda_buy, double lambda_sell) {
    if (!(lambda_sell > 0.0 && lambda_sell < lambda_buy))
        throw Error(Errc::invalid_price_order, "require 0 < lambda_sell < lambda_buy");
    PriceQuote q;
    q.sdr = sdr;
    if (sdr > 1.0) {
        q.isp = lambda_sell;
        q.ibp = lambda_sell;
    } else {
        q.isp = (lambda_sell * lambda_buy) / ((lambda_buy - lambda_sell) * sdr + lambda_sell);
        q.ibp = q.isp * sdr + lambda_buy * (1.0 - sdr);
    }
    return q;
}

} // namespace mapdes
