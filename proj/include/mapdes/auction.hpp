#pragma once

#include <vector>

#include "mapdes/pricing.hpp"

namespace mapdes {

// Counterparty id for the utility grid in Trade records.
inline constexpr int kGridId = -1;

enum class OrderSide { bid, offer };

// One order per farm per hour; quantity is the only degree of freedom,
// prices are implied by the hourly quote.
struct Order {
    int farm_id = 0;
    OrderSide side = OrderSide::bid;
    double quantity = 0.0; // kWh, >= 0
};

struct Trade {
    int buyer_id = 0; // farm id or kGridId
    int seller_id = 0;
    double quantity = 0.0;   // kWh, > 0
    double unit_price = 0.0; // EUR/kWh
};

struct FarmCash {
    int farm_id = 0;
    double cash = 0.0; // EUR, positive = farm receives
};

// Settlement of one auction period. Buyers pay ibp on their full demand,
// sellers receive isp on their full supply; the short side's remainder is
// balanced against the grid at lambda_buy / lambda_sell. The trade list
// decomposes the same cash: internal trades at isp, buyer grid legs at
// lambda_buy, export legs at lambda_sell (the ibp identity makes the two
// views agree, which is what keeps the auctioneer at net zero).
struct ClearingResult {
    PriceQuote quote;
    std::vector<Trade> trades;
    double total_offer = 0.0;
    double total_bid = 0.0;
    double matched_internal = 0.0; // min(total_offer, total_bid)
    double grid_import = 0.0;      // kWh bought from the grid by the auctioneer
    double grid_export = 0.0;      // kWh sold to the grid
    std::vector<FarmCash> cash;    // ascending farm_id, one entry per order
};

// Clears one hourly double auction. Orders may arrive in any permutation;
// they are canonicalized by ascending farm_id, so the result is
// order-independent. Internal energy is allocated pro rata on the long side.
ClearingResult clear(const std::vector<Order>& orders, double lambda_buy, double lambda_sell);

} // namespace mapdes
