#include "volharvest/backtest.hpp"

#include <omp.h>

#include <cmath>

#include "volharvest/error.hpp"
#include "volharvest/price_io.hpp"

namespace volharvest {

void PriceSeries::validate() const {
    if (observations.size() < 2) throw DataError("series '" + asset_id + "' needs at least two observations");
    for (std::size_t i = 0; i < observations.size(); ++i) {
        if (!(observations[i].price > 0.0))
            throw DataError("series '" + asset_id + "' has a non-positive price on " +
                            format_date(observations[i].date));
        if (i > 0 && !(observations[i - 1].date < observations[i].date))
            throw DataError("series '" + asset_id + "' dates are not strictly increasing at " +
                            format_date(observations[i].date));
    }
}

void CostModel::validate() const {
    if (!(half_spread >= 0.0)) throw PreconditionError("half_spread must be >= 0");
    if (trading_days_per_year <= 0) throw PreconditionError("trading_days_per_year must be > 0");
    if (!(assumed_daily_vol >= 0.0)) throw PreconditionError("assumed_daily_vol must be >= 0");
}

ReturnSeries to_returns(const PriceSeries& prices) {
    prices.validate();
    ReturnSeries out{prices.asset_id, {}};
    out.observations.reserve(prices.observations.size() - 1);
    for (std::size_t i = 1; i < prices.observations.size(); ++i)
        out.observations.push_back(
            {prices.observations[i].date, prices.observations[i].price / prices.observations[i - 1].price});
    return out;
}

AlignedPair align(const ReturnSeries& a, const ReturnSeries& b) {
    if (a.observations.empty() || b.observations.empty())
        throw PreconditionError("cannot align an empty return series");
    AlignedPair out;
    out.a.asset_id = a.asset_id;
    out.b.asset_id = b.asset_id;
    const auto& xa = a.observations;
    const auto& xb = b.observations;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < xa.size() || j < xb.size()) {
        if (j == xb.size() || (i < xa.size() && xa[i].date < xb[j].date)) {
            out.dropped_a.push_back(xa[i++].date);
        } else if (i == xa.size() || xb[j].date < xa[i].date) {
            out.dropped_b.push_back(xb[j++].date);
        } else {
            out.a.observations.push_back(xa[i++]);
            out.b.observations.push_back(xb[j++]);
        }
    }
    if (out.a.observations.empty())
        throw EmptyIntersection("series '" + a.asset_id + "' and '" + b.asset_id + "' share no dates");
    return out;
}

double estimate_annual_cost(const CostModel& cost) {
    cost.validate();
    return 2.0 * double(cost.trading_days_per_year) * cost.assumed_daily_vol * cost.half_spread;
}

double annualize(double final_wealth, std::int64_t n_days, int days_per_year) {
    if (n_days <= 0) throw PreconditionError("annualize requires at least one day");
    return std::pow(final_wealth, double(days_per_year) / double(n_days)) - 1.0;
}

BacktestReport run_pair_backtest(const AlignedPair& pair, const StrategySpec& strategy,
                                 const std::optional<CostModel>& cost) {
    strategy.validate();
    if (strategy.kind == StrategySpec::Kind::imbalanced)
        throw PreconditionError("pair backtest compares rebalanced and initial-balanced weights; got " +
                                strategy.name());
    const auto& ra = pair.a.observations;
    const auto& rb = pair.b.observations;
    if (ra.size() != rb.size() || ra.empty()) throw PreconditionError("pair backtest needs aligned, non-empty series");
    if (cost) cost->validate();

    const double theta = strategy.theta;
    const double half_spread = cost ? cost->half_spread : 0.0;
    const int days_per_year = cost ? cost->trading_days_per_year : 250;

    double gross = 1.0;
    double net = 1.0;
    double leg_a = theta;
    double leg_b = 1.0 - theta;
    double turnover = 0.0;
    const std::size_t n = ra.size();
    for (std::size_t t = 0; t < n; ++t) {
        const double x = ra[t].gross_return;
        const double y = rb[t].gross_return;
        const double g = x == y ? x : theta * x + (1.0 - theta) * y;
        if (!(g > 0.0) || !(x > 0.0) || !(y > 0.0))
            throw Error("non-positive return for " + pair.a.asset_id + "/" + pair.b.asset_id + " on " +
                        format_date(ra[t].date));
        gross *= g;
        net *= g;
        leg_a *= x;
        leg_b *= y;
        // Restore (theta, 1 - theta) before the next period; none after the last.
        if (t + 1 < n) {
            const double traded = 2.0 * theta * (1.0 - theta) * std::abs(x - y) / g;
            turnover += traded;
            net *= 1.0 - half_spread * traded;
        }
    }

    BacktestReport r;
    r.asset_a = pair.a.asset_id;
    r.asset_b = pair.b.asset_id;
    r.n_days = std::int64_t(n);
    r.theta = theta;
    r.final_wealth_rebalanced_gross = gross;
    r.final_wealth_rebalanced = net;
    r.final_wealth_initial_balanced = leg_a + leg_b;
    r.ann_return_rebalanced_gross = annualize(gross, r.n_days, days_per_year);
    r.ann_return_rebalanced = annualize(net, r.n_days, days_per_year);
    r.ann_return_initial_balanced = annualize(r.final_wealth_initial_balanced, r.n_days, days_per_year);
    r.ann_differential = r.ann_return_rebalanced - r.ann_return_initial_balanced;
    r.turnover = turnover;
    r.net_of_costs = cost.has_value();
    if (cost) {
        r.est_annual_cost_flat = estimate_annual_cost(*cost);
        r.est_annual_cost_turnover = half_spread * turnover * double(days_per_year) / double(n);
    }
    return r;
}

UniverseResult run_universe(const std::vector<ReturnSeries>& series, const std::optional<CostModel>& cost,
                            const StrategySpec& strategy, int workers) {
    if (series.size() < 2) throw PreconditionError("a universe needs at least two series");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < series.size(); ++i)
        for (std::size_t j = i + 1; j < series.size(); ++j) pairs.emplace_back(i, j);

    std::vector<std::optional<BacktestReport>> reports(pairs.size());
    std::vector<std::string> errors(pairs.size());
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& a = series[pairs[k].first];
        const auto& b = series[pairs[k].second];
        try {
            reports[k] = run_pair_backtest(align(a, b), strategy, cost);
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    }

    UniverseResult out;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (reports[k]) {
            if (reports[k]->ann_differential > 0.0) ++out.positive_differential;
            out.reports.push_back(std::move(*reports[k]));
        } else {
            out.failures.push_back({series[pairs[k].first].asset_id, series[pairs[k].second].asset_id, errors[k]});
        }
    }
    return out;
}

}  // namespace volharvest
