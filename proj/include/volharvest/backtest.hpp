#pragma once

// Two-asset historical backtests: a portfolio rebalanced every day to fixed
// weights against the same weights bought once and held ("initial balanced").

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "volharvest/simulation.hpp"

namespace volharvest {

using Date = std::chrono::year_month_day;

struct PricePoint {
    Date date;
    double price = 0.0;
};

struct PriceSeries {
    std::string asset_id;
    std::vector<PricePoint> observations;

    void validate() const;
};

struct ReturnPoint {
    Date date;
    double gross_return = 1.0;
};

struct ReturnSeries {
    std::string asset_id;
    std::vector<ReturnPoint> observations;
};

struct AlignedPair {
    ReturnSeries a;
    ReturnSeries b;
    std::vector<Date> dropped_a;  ///< dates of a with no match in b
    std::vector<Date> dropped_b;
};

struct CostModel {
    double half_spread = 0.0;
    int trading_days_per_year = 250;
    double assumed_daily_vol = 0.0075;

    void validate() const;
};

struct BacktestReport {
    std::string asset_a;
    std::string asset_b;
    std::int64_t n_days = 0;
    double theta = 0.5;

    double final_wealth_rebalanced = 1.0;  ///< net of turnover costs when a cost model is given
    double final_wealth_rebalanced_gross = 1.0;
    double final_wealth_initial_balanced = 1.0;

    double ann_return_rebalanced = 0.0;
    double ann_return_rebalanced_gross = 0.0;
    double ann_return_initial_balanced = 0.0;
    double ann_differential = 0.0;

    /// Sum over rebalances of traded notional (both legs) per unit of wealth.
    double turnover = 0.0;
    double est_annual_cost_flat = 0.0;
    double est_annual_cost_turnover = 0.0;
    bool net_of_costs = false;
};

ReturnSeries to_returns(const PriceSeries& prices);

/// Inner join on dates.
AlignedPair align(const ReturnSeries& a, const ReturnSeries& b);

/// `strategy` fixes the weights: balanced(theta) or initial_balanced(theta)
/// both compare daily rebalancing at theta with buy-and-hold from theta.
BacktestReport run_pair_backtest(const AlignedPair& pair, const StrategySpec& strategy,
                                 const std::optional<CostModel>& cost = std::nullopt);

/// 2 * days * daily vol * half-spread, per annum.
double estimate_annual_cost(const CostModel& cost);

/// ann = W^(days_per_year / n_days) - 1
double annualize(double final_wealth, std::int64_t n_days, int days_per_year = 250);

struct PairFailure {
    std::string asset_a;
    std::string asset_b;
    std::string message;
};

struct UniverseResult {
    std::vector<BacktestReport> reports;  ///< pair order (i, j), i < j
    std::vector<PairFailure> failures;
    std::size_t positive_differential = 0;
};

UniverseResult run_universe(const std::vector<ReturnSeries>& series, const std::optional<CostModel>& cost = std::nullopt,
                            const StrategySpec& strategy = StrategySpec::balanced(0.5), int workers = 0);

}  // namespace volharvest
