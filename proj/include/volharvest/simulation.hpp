#pragma once

// Monte Carlo wealth ensembles for two-asset markets.
//
// Draws are addressed by (seed, path, step), so every strategy run with the
// same seed sees the same market (common random numbers) and the result is
// independent of the worker count. Non-positive period returns are absorbing
// ruin: the path is dropped from the statistics and counted.

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "volharvest/analytics.hpp"
#include "volharvest/dynamics.hpp"

namespace volharvest {

struct StrategySpec {
    enum class Kind { balanced, imbalanced, initial_balanced };

    Kind kind = Kind::balanced;
    double theta = 0.5;  ///< weight of asset 1; balanced and initial_balanced
    int asset = 1;       ///< imbalanced only

    static StrategySpec balanced(double theta = 0.5) { return {Kind::balanced, theta, 1}; }
    static StrategySpec imbalanced(int asset = 1) { return {Kind::imbalanced, 1.0, asset}; }
    static StrategySpec initial_balanced(double theta = 0.5) { return {Kind::initial_balanced, theta, 1}; }

    void validate() const;
    std::string name() const;

    /// Parses "balanced", "balanced:0.3", "imbalanced", "imbalanced:2",
    /// "initial-balanced" (underscores accepted).
    static StrategySpec parse(const std::string& text);

    friend bool operator==(const StrategySpec&, const StrategySpec&) = default;
};

using Market = std::variant<BinomialParams, GaussianParams>;

std::int64_t market_steps(const Market& market);
void validate_market(const Market& market);

/// Log wealth within this distance of zero counts as break-even.
inline constexpr double kBreakEvenLogTol = 1e-12;

struct EnsembleOptions {
    /// OpenMP thread count; 0 uses the runtime default. Never affects results.
    int workers = 0;
    bool record_trajectories = false;
    /// Period counts (each in [1, steps]) at which log wealth is captured.
    std::vector<std::int64_t> checkpoints;
};

struct PathEnsemble {
    std::int64_t n_paths = 0;
    std::int64_t steps = 0;
    std::uint64_t master_seed = 0;
    StrategySpec strategy;

    // Surviving paths only, in increasing path order.
    std::vector<std::uint64_t> path_index;
    std::vector<double> terminal_wealth;
    std::vector<double> log_terminal_wealth;
    std::int64_t ruin_count = 0;

    std::vector<std::int64_t> checkpoints;
    /// survivors x checkpoints, row-major.
    std::vector<double> checkpoint_log_wealth;
    /// survivors x (steps + 1), row-major; empty unless requested.
    std::vector<double> trajectories;

    std::size_t survivors() const noexcept { return terminal_wealth.size(); }
};

/// OpenMP-parallel ensemble generator (log-space accumulation).
PathEnsemble run_ensemble(const Market& market, const StrategySpec& strategy, std::int64_t n_paths,
                          std::uint64_t seed, const EnsembleOptions& options = {});

/// Serial reference generator: one path after another, wealth multiplied
/// directly. Kept for testing the parallel kernel and for benchmarks.
PathEnsemble run_ensemble_reference(const Market& market, const StrategySpec& strategy, std::int64_t n_paths,
                                    std::uint64_t seed, const EnsembleOptions& options = {});

struct DistributionSummary {
    std::size_t count = 0;
    std::int64_t ruin_count = 0;
    double mean = 0.0;
    double std_error = 0.0;  ///< standard error of the mean
    double median = 0.0;
    double mode_estimate = 0.0;
    double q05 = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    double q95 = 0.0;
    double prob_below_one = 0.0;
    double log_growth_mean = 0.0;
    double log_growth_median = 0.0;
};

DistributionSummary summarize(const PathEnsemble& ensemble);

/// Type-7 (linear interpolation) quantile of sorted data.
double sorted_quantile(std::span<const double> sorted, double q);

/// Midpoint of the fullest Freedman-Diaconis bin of `values`.
double histogram_mode(std::span<const double> values);

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    double density = 0.0;
};

/// Freedman-Diaconis histogram normalized to unit area.
std::vector<HistogramBin> density_histogram(std::span<const double> values);

struct PairedComparison {
    std::string strategy_a;
    std::string strategy_b;
    std::size_t n_pairs = 0;
    std::int64_t ruined_a = 0;
    std::int64_t ruined_b = 0;
    double prob_a_ge_b = 0.0;
    double mean_difference = 0.0;
    /// Mean of (log W_a - log W_b) / M over paired paths.
    double log_growth_differential = 0.0;
    double differential_std_error = 0.0;
};

PairedComparison compare_ensembles(const PathEnsemble& a, const PathEnsemble& b);

PairedComparison compare_strategies(const Market& market, const StrategySpec& a, const StrategySpec& b,
                                    std::int64_t n_paths, std::uint64_t seed, int workers = 0);

struct RatioPoint {
    std::int64_t steps = 0;
    double median_ratio = 0.0;
    double mean_log_ratio = 0.0;
    /// exp(M * growth differential) from the closed-form growth rates.
    double predicted_ratio = 0.0;
};

/// Median of Lambda_{rho1,M} / Lambda_{rho2,M} for two balanced(1/2)
/// strategies whose markets differ only in correlation.
std::vector<RatioPoint> correlation_ratio_experiment(const Market& market_template, double rho1, double rho2,
                                                     std::vector<std::int64_t> step_grid, std::int64_t n_paths,
                                                     std::uint64_t seed, int workers = 0);

struct ShannonDemo {
    GaussianParams market;  ///< gross returns: asset 1 + mu1 + sigma1 X, cash 1
    ShannonGrowth analytic;
    std::string warning;
    DistributionSummary balanced;
    DistributionSummary asset_only;
    PairedComparison comparison;
};

/// Rebalance half-and-half between a volatile asset of net drift `mu1` and
/// zero-rate cash, against holding the asset alone.
ShannonDemo shannon_demo(double mu1, double sigma1, std::int64_t steps, std::int64_t n_paths, std::uint64_t seed,
                         int workers = 0);

struct WealthOutcome {
    double log_wealth = 0.0;
    double probability = 0.0;
};

/// Exact terminal-wealth law of a strategy on a binomial market, by
/// enumeration of the per-category period counts (multinomial weights).
std::vector<WealthOutcome> enumerate_binomial(const BinomialParams& params, const StrategySpec& strategy);

struct BreakEvenProbabilities {
    double above = 0.0;
    double at = 0.0;
    double below = 0.0;
};

BreakEvenProbabilities classify_outcomes(std::span<const WealthOutcome> outcomes);

}  // namespace volharvest
