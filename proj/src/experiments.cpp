#include <algorithm>
#include <cmath>

#include "path_common.hpp"
#include "volharvest/error.hpp"
#include "volharvest/simulation.hpp"

namespace volharvest {

PairedComparison compare_ensembles(const PathEnsemble& a, const PathEnsemble& b) {
    if (a.steps != b.steps || a.n_paths != b.n_paths)
        throw PreconditionError("paired comparison needs ensembles of equal size and horizon");

    PairedComparison out;
    out.strategy_a = a.strategy.name();
    out.strategy_b = b.strategy.name();
    out.ruined_a = a.ruin_count;
    out.ruined_b = b.ruin_count;

    const double m = a.steps > 0 ? double(a.steps) : 1.0;
    std::vector<double> diffs;
    double wealth_diff = 0.0;
    std::size_t a_wins = 0;
    // Both index lists are increasing; walk them together.
    for (std::size_t i = 0, j = 0; i < a.path_index.size() && j < b.path_index.size();) {
        if (a.path_index[i] < b.path_index[j]) {
            ++i;
        } else if (b.path_index[j] < a.path_index[i]) {
            ++j;
        } else {
            diffs.push_back((a.log_terminal_wealth[i] - b.log_terminal_wealth[j]) / m);
            wealth_diff += a.terminal_wealth[i] - b.terminal_wealth[j];
            if (a.log_terminal_wealth[i] >= b.log_terminal_wealth[j]) ++a_wins;
            ++i;
            ++j;
        }
    }
    if (diffs.empty()) throw EmptyEnsemble("no path survived in both ensembles");

    const double n = double(diffs.size());
    out.n_pairs = diffs.size();
    out.prob_a_ge_b = double(a_wins) / n;
    out.mean_difference = wealth_diff / n;
    double sum = 0.0;
    for (double d : diffs) sum += d;
    out.log_growth_differential = sum / n;
    if (diffs.size() > 1) {
        double ss = 0.0;
        for (double d : diffs) ss += (d - out.log_growth_differential) * (d - out.log_growth_differential);
        out.differential_std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return out;
}

PairedComparison compare_strategies(const Market& market, const StrategySpec& a, const StrategySpec& b,
                                    std::int64_t n_paths, std::uint64_t seed, int workers) {
    EnsembleOptions options;
    options.workers = workers;
    return compare_ensembles(run_ensemble(market, a, n_paths, seed, options),
                             run_ensemble(market, b, n_paths, seed, options));
}

namespace {

Market with_rho(Market market, double rho) {
    std::visit([rho](auto& m) { m.rho = rho; }, market);
    return market;
}

Market with_steps(Market market, std::int64_t steps) {
    std::visit([steps](auto& m) { m.steps = steps; }, market);
    return market;
}

// Per-period growth gap between balanced(1/2) portfolios on the two markets.
double predicted_growth_gap(const Market& m1, const Market& m2) {
    if (const auto* g1 = std::get_if<GaussianParams>(&m1)) {
        return log_growth_balanced(0.5, *g1) - log_growth_balanced(0.5, std::get<GaussianParams>(m2));
    }
    auto b1 = std::get<BinomialParams>(m1);
    auto b2 = std::get<BinomialParams>(m2);
    b1.steps = b2.steps = 1;
    return std::log(balanced_modal_value(b1)) - std::log(balanced_modal_value(b2));
}

}  // namespace

std::vector<RatioPoint> correlation_ratio_experiment(const Market& market_template, double rho1, double rho2,
                                                     std::vector<std::int64_t> step_grid, std::int64_t n_paths,
                                                     std::uint64_t seed, int workers) {
    if (!(rho1 <= rho2)) throw PreconditionError("correlation experiment requires rho1 <= rho2");
    if (step_grid.empty()) throw PreconditionError("correlation experiment needs a non-empty horizon grid");
    for (std::size_t i = 1; i < step_grid.size(); ++i)
        if (step_grid[i] <= step_grid[i - 1]) throw PreconditionError("horizon grid must be strictly increasing");

    const Market low = with_steps(with_rho(market_template, rho1), step_grid.back());
    const Market high = with_steps(with_rho(market_template, rho2), step_grid.back());

    EnsembleOptions options;
    options.workers = workers;
    options.checkpoints = step_grid;
    const auto strategy = StrategySpec::balanced(0.5);
    const PathEnsemble a = run_ensemble(low, strategy, n_paths, seed, options);
    const PathEnsemble b = run_ensemble(high, strategy, n_paths, seed, options);

    const std::size_t c = step_grid.size();
    std::vector<std::vector<double>> log_ratios(c);
    for (std::size_t i = 0, j = 0; i < a.path_index.size() && j < b.path_index.size();) {
        if (a.path_index[i] < b.path_index[j]) {
            ++i;
        } else if (b.path_index[j] < a.path_index[i]) {
            ++j;
        } else {
            for (std::size_t k = 0; k < c; ++k)
                log_ratios[k].push_back(a.checkpoint_log_wealth[i * c + k] - b.checkpoint_log_wealth[j * c + k]);
            ++i;
            ++j;
        }
    }
    if (log_ratios.front().empty()) throw EmptyEnsemble("no path survived in both ensembles");

    const double gap = predicted_growth_gap(low, high);
    std::vector<RatioPoint> out;
    for (std::size_t k = 0; k < c; ++k) {
        auto& lr = log_ratios[k];
        double sum = 0.0;
        for (double x : lr) sum += x;
        std::vector<double> ratios(lr.size());
        std::transform(lr.begin(), lr.end(), ratios.begin(), [](double x) { return std::exp(x); });
        std::sort(ratios.begin(), ratios.end());
        out.push_back({step_grid[k], sorted_quantile(ratios, 0.5), sum / double(lr.size()),
                       std::exp(gap * double(step_grid[k]))});
    }
    return out;
}

ShannonDemo shannon_demo(double mu1, double sigma1, std::int64_t steps, std::int64_t n_paths, std::uint64_t seed,
                         int workers) {
    ShannonDemo demo;
    demo.analytic = shannon_growth(mu1, sigma1);
    if (!demo.analytic.in_window)
        demo.warning = "parameters outside sigma^2/4 < mu1 <= sigma^2/2; the asset alone does not lose";
    demo.market = GaussianParams{1.0 + mu1, 1.0, sigma1, 0.0, 0.0, steps};

    EnsembleOptions options;
    options.workers = workers;
    const PathEnsemble balanced = run_ensemble(demo.market, StrategySpec::balanced(0.5), n_paths, seed, options);
    const PathEnsemble asset = run_ensemble(demo.market, StrategySpec::imbalanced(1), n_paths, seed, options);
    demo.balanced = summarize(balanced);
    demo.asset_only = summarize(asset);
    demo.comparison = compare_ensembles(balanced, asset);
    return demo;
}

std::vector<WealthOutcome> enumerate_binomial(const BinomialParams& params, const StrategySpec& strategy) {
    params.validate();
    strategy.validate();
    if (params.steps > 200) throw PreconditionError("binomial enumeration supports at most 200 periods");

    const JointBernoulli law = joint_bernoulli(params.p, params.rho);
    const std::array<double, 4> prob{law.beta1, 0.5 * law.beta2, 0.5 * law.beta2, law.beta3};
    const double up = std::log(params.mu + params.r);
    const double down = std::log(params.mu);
    const double theta = strategy.theta;
    const double mixed_a = std::log(params.mu + theta * params.r);
    const double mixed_b = std::log(params.mu + (1.0 - theta) * params.r);

    const std::int64_t m = params.steps;
    const double log_m_fact = std::lgamma(double(m) + 1.0);
    std::vector<WealthOutcome> out;
    // n11: both up, n10: only asset 1 up, n01: only asset 2 up, n00: both down.
    for (std::int64_t n11 = 0; n11 <= m; ++n11) {
        for (std::int64_t n10 = 0; n11 + n10 <= m; ++n10) {
            for (std::int64_t n01 = 0; n11 + n10 + n01 <= m; ++n01) {
                const std::int64_t n00 = m - n11 - n10 - n01;
                const std::array<std::int64_t, 4> counts{n11, n10, n01, n00};
                double log_p = log_m_fact;
                bool possible = true;
                for (std::size_t k = 0; k < 4; ++k) {
                    if (counts[k] == 0) continue;
                    if (prob[k] <= 0.0) {
                        possible = false;
                        break;
                    }
                    log_p += double(counts[k]) * std::log(prob[k]) - std::lgamma(double(counts[k]) + 1.0);
                }
                if (!possible) continue;

                const double leg1 = double(n11 + n10) * up + double(n01 + n00) * down;
                const double leg2 = double(n11 + n01) * up + double(n10 + n00) * down;
                double lw = 0.0;
                switch (strategy.kind) {
                    case StrategySpec::Kind::balanced:
                        lw = double(n11) * up + double(n10) * mixed_a + double(n01) * mixed_b + double(n00) * down;
                        break;
                    case StrategySpec::Kind::imbalanced: lw = strategy.asset == 1 ? leg1 : leg2; break;
                    case StrategySpec::Kind::initial_balanced: lw = detail::log_mixture(theta, leg1, leg2); break;
                }
                out.push_back({lw, std::exp(log_p)});
            }
        }
    }
    return out;
}

BreakEvenProbabilities classify_outcomes(std::span<const WealthOutcome> outcomes) {
    BreakEvenProbabilities p;
    for (const auto& o : outcomes) {
        if (o.log_wealth > kBreakEvenLogTol) {
            p.above += o.probability;
        } else if (o.log_wealth < -kBreakEvenLogTol) {
            p.below += o.probability;
        } else {
            p.at += o.probability;
        }
    }
    return p;
}

}  // namespace volharvest
