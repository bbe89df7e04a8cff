#pragma once

// Closed-form volatility-harvesting analytics: binomial modal values,
// expansion growth rates, the rebalancing bonus, Kelly weights and the
// Shannon rebalancing demon. Every function here is pure.

#include <array>
#include <cstdint>
#include <utility>

namespace volharvest {

/// Two-asset binomial market: each period asset i returns mu + r * B_i with
/// B_i ~ Bernoulli(p) and Corr(B_1, B_2) = rho.
struct BinomialParams {
    double p = 0.5;
    double mu = 0.98;
    double r = 0.04;
    double rho = 0.0;
    std::int64_t steps = 250;
    /// Require mu + r/2 == 1 (the fair-game normalization).
    bool normalized = false;

    /// Throws PreconditionError / InfeasibleCorrelation on a broken invariant.
    void validate() const;
};

struct JointBernoulli {
    double beta1 = 0.0;  ///< P[both up]
    double beta2 = 0.0;  ///< P[exactly one up]
    double beta3 = 0.0;  ///< P[both down]
};

/// Two-asset Gaussian market: asset i returns mu_i + sigma_i * X_i with
/// standard normal drivers of correlation rho. In the simulator mu_i is a
/// gross multiplier; the expansion formulas below read it as a drift.
struct GaussianParams {
    double mu1 = 1.0;
    double mu2 = 1.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double rho = 0.0;
    std::int64_t steps = 1;

    void validate() const;

    static GaussianParams symmetric(double mu, double sigma, double rho, std::int64_t steps) {
        return {mu, mu, sigma, sigma, rho, steps};
    }
};

struct KellyInputs {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double cov11 = 0.0;
    double cov12 = 0.0;
    double cov22 = 0.0;

    double determinant() const noexcept { return cov11 * cov22 - cov12 * cov12; }
};

struct KellyWeights {
    double w1 = 0.0;
    double w2 = 0.0;
};

enum class GameKind { balanced, imbalanced };

/// One row of the single-game vs. two-game outcome table. Probabilities are
/// exact dyadic rationals: count / 4^rounds.
struct OutcomeRow {
    int rounds = 0;
    GameKind game = GameKind::imbalanced;
    std::uint64_t denominator = 1;
    std::uint64_t above = 0;
    std::uint64_t at = 0;
    std::uint64_t below = 0;

    double prob_above() const noexcept { return double(above) / double(denominator); }
    double prob_at() const noexcept { return double(at) / double(denominator); }
    double prob_below() const noexcept { return double(below) / double(denominator); }
    double prob_at_least() const noexcept { return double(above + at) / double(denominator); }
};

struct ShannonGrowth {
    double growth = 0.0;
    bool in_window = false;
};

JointBernoulli joint_bernoulli(double p, double rho);

/// Median of a fair +/-r all-in game after an even number of rounds.
double fair_game_median(double r, std::int64_t rounds);

/// Exact enumeration of the fair game (p = 1/2, independent games) after
/// `rounds` rounds with win/loss size `swing`. Outcomes are classified against
/// break-even structurally, so the result does not depend on rounding.
OutcomeRow outcome_table(int rounds, GameKind game, double swing = 0.1);

double imbalanced_modal_value(const BinomialParams& params);
double balanced_modal_value(const BinomialParams& params);

/// Imbalanced over balanced modal value via ((mu + r) mu)^(beta2 M / 2).
/// Requires params.normalized.
double modal_ratio(const BinomialParams& params);

/// (mu + r p)^M, shared by every allocation.
double binomial_expected_value(const BinomialParams& params);

double rebalancing_bonus(double sigma, double rho);

/// Second-order expansion mu - sigma^2 / 2 of E log(mu + sigma X).
double log_growth_asset(double mu, double sigma);

/// Expansion growth of a portfolio rebalanced to (theta, 1 - theta).
double log_growth_balanced(double theta, const GaussianParams& params);

/// Maximizer of log_growth_balanced over theta in [0,1].
double optimal_theta(const GaussianParams& params);

KellyWeights kelly_weights(const KellyInputs& inputs);

/// Euclidean norm of Sigma * w - mu.
double kelly_residual(const KellyInputs& inputs, const KellyWeights& w);

ShannonGrowth shannon_growth(double mu1, double sigma1);

}  // namespace volharvest
