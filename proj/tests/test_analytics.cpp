#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "volharvest/analytics.hpp"
#include "volharvest/error.hpp"

using namespace volharvest;
using doctest::Approx;

namespace {

BinomialParams figure_market(double rho = 0.0, std::int64_t steps = 250) {
    return BinomialParams{0.5, 0.98, 0.04, rho, steps, true};
}

}  // namespace

TEST_CASE("joint_bernoulli examples") {
    SUBCASE("independent symmetric") {
        const auto j = joint_bernoulli(0.5, 0.0);
        CHECK(j.beta1 == 0.25);
        CHECK(j.beta2 == 0.5);
        CHECK(j.beta3 == 0.25);
    }
    SUBCASE("perfect correlation never disagrees") {
        const auto j = joint_bernoulli(0.5, 1.0);
        CHECK(j.beta1 == 0.5);
        CHECK(j.beta2 == 0.0);
        CHECK(j.beta3 == 0.5);
    }
    SUBCASE("p=0.6 rho=0.5 against brute-force scan") {
        const auto law = oracle::joint_law_by_scan(0.6, 0.5);
        const auto j = joint_bernoulli(0.6, 0.5);
        CHECK(j.beta1 == Approx(law.p11).epsilon(1e-6));
        CHECK(j.beta2 == Approx(law.p10 + law.p01).epsilon(1e-6));
        CHECK(j.beta3 == Approx(law.p00).epsilon(1e-6));
        // Frozen from the scan.
        CHECK(j.beta1 == Approx(0.48).epsilon(1e-12));
        CHECK(j.beta2 == Approx(0.24).epsilon(1e-12));
        CHECK(j.beta3 == Approx(0.28).epsilon(1e-12));
    }
    SUBCASE("infeasible correlations are rejected") {
        // p = 0.9: beta3 = 0.09 rho + 0.01 < 0 once rho < -1/9.
        CHECK_THROWS_AS(joint_bernoulli(0.9, -0.5), InfeasibleCorrelation);
        CHECK_NOTHROW(joint_bernoulli(0.9, -0.1));
        CHECK_THROWS_AS(joint_bernoulli(0.5, 1.5), InfeasibleCorrelation);
        CHECK_THROWS_AS(joint_bernoulli(0.0, 0.0), PreconditionError);
    }
}

TEST_CASE("joint_bernoulli sums and marginals on a dense grid") {
    for (int i = 1; i < 100; ++i) {
        const double p = i / 100.0;
        for (int k = -100; k <= 100; ++k) {
            const double rho = k / 100.0;
            JointBernoulli j;
            try {
                j = joint_bernoulli(p, rho);
            } catch (const InfeasibleCorrelation&) {
                continue;
            }
            CHECK(std::abs(j.beta1 + j.beta2 + j.beta3 - 1.0) < 1e-12);
            CHECK(std::abs(j.beta1 + 0.5 * j.beta2 - p) < 1e-12);
        }
    }
}

TEST_CASE("fair_game_median") {
    CHECK(fair_game_median(0.1, 2) == Approx(0.99).epsilon(1e-14));
    CHECK(fair_game_median(0.5, 0) == 1.0);
    CHECK(fair_game_median(0.02, 250) == Approx(0.951219909716682666).epsilon(1e-13));
    CHECK(fair_game_median(0.02, 250) == Approx(imbalanced_modal_value(figure_market())).epsilon(1e-12));
    CHECK(fair_game_median(0.3, 10) < fair_game_median(0.3, 8));
    CHECK_THROWS_AS(fair_game_median(1.0, 2), DomainError);
    CHECK_THROWS_AS(fair_game_median(0.1, 3), PreconditionError);
}

TEST_CASE("outcome_table reproduces the two-game table") {
    struct Row {
        int rounds;
        GameKind game;
        double above, at, below, at_least;
    };
    const Row rows[] = {
        {1, GameKind::imbalanced, 0.5, 0.0, 0.5, 0.5},
        {1, GameKind::balanced, 0.25, 0.5, 0.25, 0.75},
        {2, GameKind::imbalanced, 0.25, 0.0, 0.75, 0.25},
        {2, GameKind::balanced, 0.3125, 0.25, 0.4375, 0.5625},
    };
    for (const auto& r : rows) {
        const auto t = outcome_table(r.rounds, r.game);
        CHECK(t.prob_above() == r.above);
        CHECK(t.prob_at() == r.at);
        CHECK(t.prob_below() == r.below);
        CHECK(t.prob_at_least() == r.at_least);
        CHECK(t.above + t.at + t.below == t.denominator);
    }
    for (int rounds : {1, 2}) {
        CHECK(outcome_table(rounds, GameKind::balanced).prob_at_least() >=
              outcome_table(rounds, GameKind::imbalanced).prob_at_least());
    }
    // Independent of the swing size for these two rounds.
    CHECK(outcome_table(2, GameKind::balanced, 0.6).prob_above() == 0.3125);
}

TEST_CASE("modal values") {
    const auto m = figure_market();
    CHECK(imbalanced_modal_value(m) == Approx(0.951219909716682666).epsilon(1e-12));
    CHECK(balanced_modal_value(m) == Approx(0.975305034190166921).epsilon(1e-12));
    CHECK(imbalanced_modal_value(figure_market(0.0, 0)) == 1.0);
    CHECK(balanced_modal_value(figure_market(0.3, 0)) == 1.0);
    CHECK(imbalanced_modal_value(figure_market(0.0, 2)) == Approx(1.02 * 0.98).epsilon(1e-14));
    CHECK(balanced_modal_value(figure_market(1.0)) == Approx(imbalanced_modal_value(figure_market(1.0))).epsilon(1e-14));
}

TEST_CASE("modal_ratio") {
    CHECK(modal_ratio(figure_market()) == Approx(0.975305034190166921).epsilon(1e-12));
    CHECK(modal_ratio(figure_market(0.0, 2)) == Approx(0.999799979995998999).epsilon(1e-13));
    CHECK(modal_ratio(figure_market(1.0)) == 1.0);

    auto unnormalized = figure_market();
    unnormalized.normalized = false;
    CHECK_THROWS_AS(modal_ratio(unnormalized), PreconditionError);

    SUBCASE("quotient identity, below one, decreasing in M") {
        for (double p : {0.2, 0.35, 0.5, 0.65, 0.8}) {
            for (double r : {0.01, 0.04, 0.1, 0.3}) {
                for (double rho : {-0.2, 0.0, 0.3, 0.7, 0.95}) {
                    BinomialParams b{p, 1.0 - 0.5 * r, r, rho, 40, true};
                    try {
                        b.validate();
                    } catch (const Error&) {
                        continue;
                    }
                    const double ratio = modal_ratio(b);
                    const double quotient = imbalanced_modal_value(b) / balanced_modal_value(b);
                    CHECK(std::abs(ratio / quotient - 1.0) < 1e-10);
                    CHECK(ratio < 1.0);
                    auto longer = b;
                    longer.steps += 2;
                    CHECK(modal_ratio(longer) < ratio);
                }
            }
        }
    }
}

TEST_CASE("binomial_expected_value") {
    CHECK(binomial_expected_value(figure_market()) == Approx(1.0).epsilon(1e-12));
    CHECK(binomial_expected_value(BinomialParams{0.6, 0.98, 0.04, 0.0, 1}) == Approx(1.004).epsilon(1e-14));
    CHECK(binomial_expected_value(figure_market(0.0)) == binomial_expected_value(figure_market(0.9)));
}

TEST_CASE("params validation") {
    CHECK_THROWS_AS(BinomialParams({0.5, 0.03, 0.04, 0.0, 10}).validate(), PreconditionError);  // mu - r <= 0
    CHECK_THROWS_AS(BinomialParams({0.5, 0.98, 0.05, 0.0, 10, true}).validate(), PreconditionError);
    CHECK_THROWS_AS(GaussianParams({1, 1, -0.1, 0.1, 0, 10}).validate(), PreconditionError);
    CHECK_THROWS_AS(GaussianParams({1, 1, 0.1, 0.1, 1.2, 10}).validate(), PreconditionError);
}

TEST_CASE("rebalancing bonus and expansion growth") {
    CHECK(rebalancing_bonus(0.2, 0.0) == Approx(0.01).epsilon(1e-14));
    CHECK(rebalancing_bonus(0.1, 1.0) == 0.0);
    CHECK(rebalancing_bonus(0.1, 0.5) == Approx(0.00125).epsilon(1e-14));
    CHECK(log_growth_asset(1.0, 0.0) == 1.0);
    CHECK(log_growth_asset(0.02, 0.2) == Approx(0.0).epsilon(1e-15));
    CHECK(log_growth_asset(0.015, 0.2) == Approx(-0.005).epsilon(1e-14));

    for (double rho = -1.0; rho <= 1.0; rho += 0.125) {
        CHECK(rebalancing_bonus(0.3, rho) >= rebalancing_bonus(0.3, rho + 0.125));
        const auto g = GaussianParams::symmetric(0.01, 0.3, rho, 1);
        CHECK(log_growth_balanced(0.5, g) - log_growth_asset(0.01, 0.3) ==
              Approx(rebalancing_bonus(0.3, rho)).epsilon(1e-12));
    }
}

TEST_CASE("log_growth_balanced") {
    const GaussianParams g{0.03, 0.01, 0.2, 0.1, 0.3, 1};
    CHECK(log_growth_balanced(1.0, g) == Approx(log_growth_asset(0.03, 0.2)).epsilon(1e-14));
    CHECK(log_growth_balanced(0.0, g) == Approx(log_growth_asset(0.01, 0.1)).epsilon(1e-14));
    CHECK(log_growth_balanced(0.5, GaussianParams{0.015, 0.0, 0.2, 0.0, 0.0, 1}) == Approx(0.0025).epsilon(1e-13));
    CHECK_THROWS_AS(log_growth_balanced(1.5, g), PreconditionError);
}

TEST_CASE("optimal_theta") {
    CHECK(optimal_theta(GaussianParams::symmetric(0.02, 0.2, 0.3, 1)) == Approx(0.5).epsilon(1e-14));

    const GaussianParams shannon{0.015, 0.0, 0.2, 0.0, 0.0, 1};
    const double grid = oracle::grid_argmax([&](double t) { return log_growth_balanced(t, shannon); });
    CHECK(grid == Approx(0.375).epsilon(1e-12));
    CHECK(optimal_theta(shannon) == Approx(0.375).epsilon(1e-12));

    CHECK_THROWS_AS(optimal_theta(GaussianParams::symmetric(0.0, 0.2, 1.0, 1)), DegenerateMarket);

    SUBCASE("matches a 1e-4 grid and dominates it") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> mu(-0.05, 0.05), sig(0.01, 0.4), rho(-0.95, 0.95);
        for (int trial = 0; trial < 50; ++trial) {
            const GaussianParams g{mu(rng), mu(rng), sig(rng), sig(rng), rho(rng), 1};
            const double t = optimal_theta(g);
            const double best = oracle::grid_argmax([&](double x) { return log_growth_balanced(x, g); });
            CHECK(std::abs(t - best) <= 1e-4 + 1e-12);
            for (int k = 0; k <= 100; ++k) CHECK(log_growth_balanced(t, g) >= log_growth_balanced(k / 100.0, g) - 1e-15);
        }
    }
}

TEST_CASE("kelly_weights") {
    auto w = kelly_weights({0.05, 0.05, 0.01, 0.0, 0.01});
    CHECK(w.w1 == Approx(5.0).epsilon(1e-13));
    CHECK(w.w1 == w.w2);

    w = kelly_weights({0.05, 0.05, 0.01, 0.005, 0.01});
    const auto solved = oracle::solve2(0.01, 0.005, 0.005, 0.01, 0.05, 0.05);
    CHECK(w.w1 == Approx(solved[0]).epsilon(1e-12));
    CHECK(w.w2 == Approx(solved[1]).epsilon(1e-12));
    CHECK(w.w1 == Approx(10.0 / 3.0).epsilon(1e-12));
    CHECK(w.w1 == w.w2);

    w = kelly_weights({0.05, 0.05, 0.01, 0.0, 0.04});
    CHECK(w.w1 == Approx(5.0).epsilon(1e-13));
    CHECK(w.w2 == Approx(1.25).epsilon(1e-13));

    CHECK_THROWS_AS(kelly_weights({0.05, 0.05, 0.01, 0.01, 0.01}), SingularCovariance);
    CHECK_THROWS_AS(kelly_weights({0.05, 0.05, 0.0, 0.0, 0.01}), SingularCovariance);

    SUBCASE("residual on random inputs") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> mu(0.001, 0.1), var(1e-4, 0.05), rho(-0.9, 0.9);
        for (int trial = 0; trial < 200; ++trial) {
            const double c11 = var(rng), c22 = var(rng);
            const KellyInputs in{mu(rng), mu(rng), c11, rho(rng) * std::sqrt(c11 * c22), c22};
            CHECK(kelly_residual(in, kelly_weights(in)) < 1e-10);
        }
    }
}

TEST_CASE("shannon_growth") {
    auto s = shannon_growth(0.015, 0.2);
    CHECK(s.growth == Approx(0.0025).epsilon(1e-13));
    CHECK(s.in_window);
    s = shannon_growth(0.01, 0.2);
    CHECK(std::abs(s.growth) < 1e-15);
    CHECK_FALSE(s.in_window);
    s = shannon_growth(0.03, 0.2);
    CHECK(s.growth == Approx(0.01).epsilon(1e-13));
    CHECK_FALSE(s.in_window);

    for (double mu = -0.05; mu < 0.05; mu += 0.0005) {
        for (double sigma : {0.05, 0.1, 0.2, 0.3}) {
            const auto g = shannon_growth(mu, sigma);
            if (g.in_window) {
                CHECK(g.growth > 0.0);
                CHECK(log_growth_asset(mu, sigma) <= 0.0);
            }
        }
    }
}
