#pragma once

// Internal helpers shared by the parallel and reference ensemble generators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "volharvest/dynamics.hpp"
#include "volharvest/error.hpp"
#include "volharvest/simulation.hpp"

namespace volharvest::detail {

struct BinomialDraw {
    explicit BinomialDraw(const BinomialParams& p) : params(p), sampler(p.p, p.rho) {}

    ReturnPair operator()(const SeedSpec& seed) const noexcept { return binomial_returns(params, sampler(seed)); }

    BinomialParams params;
    BernoulliPairSampler sampler;
};

struct GaussianDraw {
    explicit GaussianDraw(const GaussianParams& p) : params(p), sampler(p.rho) {}

    ReturnPair operator()(const SeedSpec& seed) const noexcept { return gaussian_returns(params, sampler(seed)); }

    GaussianParams params;
    GaussianPairSampler sampler;
};

inline BinomialDraw make_draw(const BinomialParams& p) { return BinomialDraw(p); }
inline GaussianDraw make_draw(const GaussianParams& p) { return GaussianDraw(p); }

/// theta * r1 + (1 - theta) * r2, exact when the two returns coincide.
inline double portfolio_return(double theta, double r1, double r2) noexcept {
    return r1 == r2 ? r1 : theta * r1 + (1.0 - theta) * r2;
}

/// log(theta * exp(l1) + (1 - theta) * exp(l2)) without overflow.
inline double log_mixture(double theta, double l1, double l2) noexcept {
    if (theta == 1.0) return l1;
    if (theta == 0.0) return l2;
    if (l1 == l2) return l1;
    const double m = std::max(l1, l2);
    return m + std::log(theta * std::exp(l1 - m) + (1.0 - theta) * std::exp(l2 - m));
}

inline void check_ensemble_request(const Market& market, const StrategySpec& strategy, std::int64_t n_paths,
                                   const EnsembleOptions& options) {
    validate_market(market);
    strategy.validate();
    if (n_paths < 1) throw PreconditionError("ensemble requires at least one path");
    const std::int64_t steps = market_steps(market);
    const auto& cps = options.checkpoints;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (cps[i] < 1 || cps[i] > steps) throw PreconditionError("checkpoint outside [1, steps]");
        if (i > 0 && cps[i] <= cps[i - 1]) throw PreconditionError("checkpoints must be strictly increasing");
    }
}

}  // namespace volharvest::detail
