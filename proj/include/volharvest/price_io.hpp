#pragma once

// Delimited text I/O for price files and backtest reports.
//
// Price files: header row `date,<asset>,<asset>,...`, ISO-8601 dates in
// strictly increasing order, positive decimal levels. An empty cell means
// the asset has no quote that day.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "volharvest/backtest.hpp"

namespace volharvest {

std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& date);

/// Formats with 10 significant digits ("%.10g").
std::string format_rate(double value);

std::vector<PriceSeries> read_price_csv(std::istream& in);
std::vector<PriceSeries> read_price_file(const std::string& path);

inline constexpr std::string_view kReportHeader =
    "asset_a,asset_b,n_days,ann_rebalanced,ann_initial_balanced,ann_differential,turnover,"
    "est_annual_cost_flat,est_annual_cost_turnover";

void write_report_csv(std::ostream& out, const std::vector<BacktestReport>& reports);

}  // namespace volharvest
