#include "mapdes/auction.hpp"

#include <algorithm>
#include <cmath>

#include "mapdes/io_util.hpp"

namespace mapdes {

namespace {

// Pro-rata internal share per long-side order, with the final order absorbing
// the rounding residual so shares add up to the matched quantity.
std::vector<double> pro_rata_shares(const std::vector<const Order*>& side, double fraction,
                                    double matched) {
    std::vector<double> shares(side.size(), 0.0);
    double remaining = matched;
    for (std::size_t i = 0; i < side.size(); ++i) {
        double want = side[i]->quantity * fraction;
        double share = (i + 1 == side.size()) ? std::min(remaining, side[i]->quantity)
                                              : std::min(want, remaining);
        shares[i] = std::max(share, 0.0);
        remaining -= shares[i];
    }
    return shares;
}

// Bilateral decomposition of the internal pool: sweep buyers against sellers
// in ascending farm_id order.
void emit_internal_trades(const std::vector<const Order*>& buyers,
                          const std::vector<double>& buyer_internal,
                          const std::vector<const Order*>& sellers,
                          const std::vector<double>& seller_internal, double isp,
                          std::vector<Trade>& out) {
    std::size_t bi = 0;
    std::size_t si = 0;
    double b_left = buyers.empty() ? 0.0 : buyer_internal[0];
    double s_left = sellers.empty() ? 0.0 : seller_internal[0];
    while (bi < buyers.size() && si < sellers.size()) {
        double q = std::min(b_left, s_left);
        if (q > 0.0) out.push_back(Trade{buyers[bi]->farm_id, sellers[si]->farm_id, q, isp});
        b_left -= q;
        s_left -= q;
        if (b_left <= 0.0 && ++bi < buyers.size()) b_left = buyer_internal[bi];
        if (s_left <= 0.0 && ++si < sellers.size()) s_left = seller_internal[si];
    }
}

} // namespace

ClearingResult clear(const std::vector<Order>& orders, double lambda_buy, double lambda_sell) {
    if (!(lambda_sell > 0.0 && lambda_sell < lambda_buy))
        throw Error(Errc::invalid_price_order, "require 0 < lambda_sell < lambda_buy");

    std::vector<Order> book = orders;
    std::sort(book.begin(), book.end(),
              [](const Order& a, const Order& b) { return a.farm_id < b.farm_id; });
    for (std::size_t i = 0; i < book.size(); ++i) {
        if (!(book[i].quantity >= 0.0) || !std::isfinite(book[i].quantity))
            throw Error(Errc::negative_energy, "order quantity must be finite and >= 0");
        if (i > 0 && book[i].farm_id == book[i - 1].farm_id)
            throw Error(Errc::duplicate_order,
                        "farm " + format_int(book[i].farm_id) + " submitted more than one order");
    }

    std::vector<const Order*> buyers;
    std::vector<const Order*> sellers;
    double total_bid = 0.0;
    double total_offer = 0.0;
    for (const Order& o : book) {
        if (o.side == OrderSide::bid) {
            buyers.push_back(&o);
            total_bid += o.quantity;
        } else {
            sellers.push_back(&o);
            total_offer += o.quantity;
        }
    }

    ClearingResult res;
    res.total_offer = total_offer;
    res.total_bid = total_bid;
    res.quote = internal_prices(compute_sdr(total_offer, total_bid), lambda_buy, lambda_sell);
    res.matched_internal = std::min(total_offer, total_bid);
    res.grid_import = std::max(total_bid - total_offer, 0.0);
    res.grid_export = std::max(total_offer - total_bid, 0.0);

    const double sdr = res.quote.sdr;
    std::vector<double> buyer_internal;
    std::vector<double> seller_internal;
    if (sdr <= 1.0) {
        // Offers fully matched; buyers take internal energy pro rata and the
        // rest is imported on their behalf.
        buyer_internal = pro_rata_shares(buyers, sdr, res.matched_internal);
        seller_internal.reserve(sellers.size());
        for (const Order* s : sellers) seller_internal.push_back(s->quantity);
    } else {
        // Bids fully matched; sellers place internal energy pro rata and the
        // surplus is exported.
        seller_internal = pro_rata_shares(sellers, 1.0 / sdr, res.matched_internal);
        buyer_internal.reserve(buyers.size());
        for (const Order* b : buyers) buyer_internal.push_back(b->quantity);
    }

    emit_internal_trades(buyers, buyer_internal, sellers, seller_internal, res.quote.isp,
                         res.trades);
    if (sdr <= 1.0) {
        for (std::size_t i = 0; i < buyers.size(); ++i) {
            double from_grid = buyers[i]->quantity - buyer_internal[i];
            if (from_grid > 0.0)
                res.trades.push_back(Trade{buyers[i]->farm_id, kGridId, from_grid, lambda_buy});
        }
    } else {
        for (std::size_t i = 0; i < sellers.size(); ++i) {
            double to_grid = sellers[i]->quantity - seller_internal[i];
            if (to_grid > 0.0)
                res.trades.push_back(Trade{kGridId, sellers[i]->farm_id, to_grid, lambda_sell});
        }
    }

    res.cash.reserve(book.size());
    for (const Order& o : book) {
        double cash = (o.side == OrderSide::bid) ? -res.quote.ibp * o.quantity
                                                 : res.quote.isp * o.quantity;
        res.cash.push_back(FarmCash{o.farm_id, cash});
    }
    return res;
}

} // namespace mapdes
