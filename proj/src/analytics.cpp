#include "volharvest/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "volharvest/error.hpp"

namespace volharvest {

namespace {

constexpr double kProbabilityTol = 1e-12;

template <typename Err>
[[noreturn]] void fail(const std::string& what) {
    throw Err(what);
}

std::string describe(double p, double rho) {
    std::ostringstream os;
    os << "p=" << p << ", rho=" << rho;
    return os.str();
}

}  // namespace

void BinomialParams::validate() const {
    if (!(p > 0.0 && p < 1.0)) fail<PreconditionError>("binomial market requires 0 < p < 1");
    if (!(r > 0.0)) fail<PreconditionError>("binomial market requires r > 0");
    if (!(mu - r > 0.0)) fail<PreconditionError>("binomial market requires mu - r > 0");
    if (steps < 0) fail<PreconditionError>("binomial market requires steps >= 0");
    if (normalized && !(std::abs(mu + 0.5 * r - 1.0) < 1e-12))
        fail<PreconditionError>("normalized binomial market requires mu + r/2 == 1");
    (void)joint_bernoulli(p, rho);
}

void GaussianParams::validate() const {
    if (!(sigma1 >= 0.0) || !(sigma2 >= 0.0))
        fail<PreconditionError>("gaussian market requires sigma1, sigma2 >= 0");
    if (!(rho >= -1.0 && rho <= 1.0)) fail<PreconditionError>("gaussian market requires -1 <= rho <= 1");
    if (steps < 1) fail<PreconditionError>("gaussian market requires steps >= 1");
}

JointBernoulli joint_bernoulli(double p, double rho) {
    if (!(p > 0.0 && p < 1.0)) fail<PreconditionError>("joint_bernoulli requires 0 < p < 1");
    const double q = 1.0 - p;
    const double shared = p * q * rho;
    JointBernoulli j{shared + p * p, 2.0 * p * q * (1.0 - rho), shared + q * q};
    for (double b : {j.beta1, j.beta2, j.beta3}) {
        if (!(b >= -kProbabilityTol && b <= 1.0 + kProbabilityTol))
            fail<InfeasibleCorrelation>("correlation infeasible for Bernoulli marginals (" + describe(p, rho) + ")");
    }
    // Snap rounding noise at the feasibility boundary.
    j.beta1 = std::clamp(j.beta1, 0.0, 1.0);
    j.beta2 = std::clamp(j.beta2, 0.0, 1.0);
    j.beta3 = std::clamp(j.beta3, 0.0, 1.0);
    return j;
}

double fair_game_median(double r, std::int64_t rounds) {
    if (!(r > 0.0 && r < 1.0)) fail<DomainError>("fair_game_median requires 0 < r < 1");
    if (rounds < 0 || rounds % 2 != 0) fail<PreconditionError>("fair_game_median requires an even, non-negative round count");
    return std::exp(0.5 * double(rounds) * std::log1p(-r * r));
}

OutcomeRow outcome_table(int rounds, GameKind game, double swing) {
    if (rounds < 1 || rounds > 16) fail<PreconditionError>("outcome_table supports 1..16 rounds");
    if (!(swing > 0.0 && swing < 1.0)) fail<DomainError>("outcome_table requires 0 < swing < 1");

    const long double h = game == GameKind::balanced ? 0.5L * swing : swing;
    const long double log_up = std::log1p(h);
    const long double log_down = std::log1p(-h);

    OutcomeRow row;
    row.rounds = rounds;
    row.game = game;
    row.denominator = std::uint64_t{1} << (2 * rounds);

    // Each round draws two fair coins; a sequence is a base-4 number.
    for (std::uint64_t seq = 0; seq < row.denominator; ++seq) {
        int ups = 0;
        int downs = 0;
        for (int k = 0; k < rounds; ++k) {
            const unsigned pair = (seq >> (2 * k)) & 3u;
            const bool first = pair & 1u;
            const bool second = pair & 2u;
            if (game == GameKind::imbalanced) {
                first ? ++ups : ++downs;
            } else if (first && second) {
                ++ups;
            } else if (!first && !second) {
                ++downs;
            }
        }
        if (ups == 0 && downs == 0) {
            ++row.at;
        } else if (ups <= downs) {
            // (1+h)^u (1-h)^d = (1-h^2)^u (1-h)^(d-u) < 1
            ++row.below;
        } else {
            const long double lw = ups * log_up + downs * log_down;
            lw > 0 ? ++row.above : ++row.below;
        }
    }
    return row;
}

double imbalanced_modal_value(const BinomialParams& params) {
    params.validate();
    const double m = double(params.steps);
    const double log_value =
        m * (params.p * std::log(params.mu + params.r) + (1.0 - params.p) * std::log(params.mu));
    return std::exp(log_value);
}

double balanced_modal_value(const BinomialParams& params) {
    params.validate();
    const JointBernoulli j = joint_bernoulli(params.p, params.rho);
    const double m = double(params.steps);
    const double log_value = m * (j.beta1 * std::log(params.mu + params.r) +
                                  j.beta2 * std::log(params.mu + 0.5 * params.r) +
                                  j.beta3 * std::log(params.mu));
    return std::exp(log_value);
}

double modal_ratio(const BinomialParams& params) {
    if (!params.normalized)
        fail<PreconditionError>("modal_ratio requires a normalized market (mu + r/2 == 1)");
    params.validate();
    const JointBernoulli j = joint_bernoulli(params.p, params.rho);
    const double exponent = 0.5 * j.beta2 * double(params.steps);
    return std::exp(exponent * std::log((params.mu + params.r) * params.mu));
}

double binomial_expected_value(const BinomialParams& params) {
    params.validate();
    return std::exp(double(params.steps) * std::log(params.mu + params.r * params.p));
}

double rebalancing_bonus(double sigma, double rho) {
    return 0.25 * sigma * sigma * (1.0 - rho);
}

double log_growth_asset(double mu, double sigma) {
    return mu - 0.5 * sigma * sigma;
}

double log_growth_balanced(double theta, const GaussianParams& params) {
    if (!(theta >= 0.0 && theta <= 1.0)) fail<PreconditionError>("theta must lie in [0,1]");
    const double a = theta;
    const double b = 1.0 - theta;
    const double s1 = params.sigma1;
    const double s2 = params.sigma2;
    return a * params.mu1 + b * params.mu2 - 0.5 * (a * a * s1 * s1 + b * b * s2 * s2) -
           a * b * s1 * s2 * params.rho;
}

double optimal_theta(const GaussianParams& params) {
    const double s1 = params.sigma1;
    const double s2 = params.sigma2;
    const double curvature = s1 * s1 + s2 * s2 - 2.0 * s1 * s2 * params.rho;
    if (!(curvature > 0.0))
        fail<DegenerateMarket>("optimal_theta: growth is linear in theta (sigma1^2 + sigma2^2 - 2 rho sigma1 sigma2 <= 0)");
    const double stationary = (params.mu1 - params.mu2 + s2 * s2 - s1 * s2 * params.rho) / curvature;
    return std::clamp(stationary, 0.0, 1.0);
}

KellyWeights kelly_weights(const KellyInputs& in) {
    const double det = in.determinant();
    if (!(in.cov11 > 0.0 && in.cov22 > 0.0 && det > 0.0))
        fail<SingularCovariance>("kelly_weights requires a positive-definite covariance matrix");
    return {(in.cov22 * in.mu1 - in.cov12 * in.mu2) / det, (in.cov11 * in.mu2 - in.cov12 * in.mu1) / det};
}

double kelly_residual(const KellyInputs& in, const KellyWeights& w) {
    const double e1 = in.cov11 * w.w1 + in.cov12 * w.w2 - in.mu1;
    const double e2 = in.cov12 * w.w1 + in.cov22 * w.w2 - in.mu2;
    return std::hypot(e1, e2);
}

ShannonGrowth shannon_growth(double mu1, double sigma1) {
    if (!(sigma1 > 0.0)) fail<PreconditionError>("shannon_growth requires sigma1 > 0");
    const double var = sigma1 * sigma1;
    return {0.5 * mu1 - 0.125 * var, 0.5 * var >= mu1 && mu1 > 0.25 * var};
}

}  // namespace volharvest
