#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "volharvest/error.hpp"
#include "volharvest/simulation.hpp"

using namespace volharvest;
using doctest::Approx;

namespace {

const BinomialParams kFigure{0.5, 0.98, 0.04, 0.0, 250, true};

bool same_ensemble(const PathEnsemble& a, const PathEnsemble& b) {
    return a.path_index == b.path_index && a.terminal_wealth == b.terminal_wealth &&
           a.log_terminal_wealth == b.log_terminal_wealth && a.ruin_count == b.ruin_count &&
           a.checkpoint_log_wealth == b.checkpoint_log_wealth && a.trajectories == b.trajectories;
}

}  // namespace

TEST_CASE("StrategySpec parsing") {
    CHECK(StrategySpec::parse("balanced") == StrategySpec::balanced(0.5));
    CHECK(StrategySpec::parse("balanced:0.3") == StrategySpec::balanced(0.3));
    CHECK(StrategySpec::parse("imbalanced:2") == StrategySpec::imbalanced(2));
    CHECK(StrategySpec::parse("initial_balanced") == StrategySpec::initial_balanced());
    CHECK_THROWS_AS(StrategySpec::parse("imbalanced:3"), PreconditionError);
    CHECK_THROWS_AS(StrategySpec::parse("balanced:1.5"), PreconditionError);
    CHECK_THROWS_AS(StrategySpec::parse("momentum"), PreconditionError);
}

TEST_CASE("parallel kernel matches the serial reference") {
    EnsembleOptions opt;
    opt.record_trajectories = true;
    opt.checkpoints = {1, 17, 60};
    const Market markets[] = {BinomialParams{0.55, 0.97, 0.05, 0.3, 60}, GaussianParams{1.01, 1.0, 0.3, 0.1, -0.4, 60}};
    const StrategySpec strategies[] = {StrategySpec::balanced(0.5), StrategySpec::balanced(0.2),
                                       StrategySpec::imbalanced(1), StrategySpec::imbalanced(2),
                                       StrategySpec::initial_balanced()};
    for (const auto& market : markets) {
        for (const auto& s : strategies) {
            const auto fast = run_ensemble(market, s, 300, 99, opt);
            const auto ref = run_ensemble_reference(market, s, 300, 99, opt);
            REQUIRE(fast.path_index == ref.path_index);
            CHECK(fast.ruin_count == ref.ruin_count);
            for (std::size_t i = 0; i < fast.survivors(); ++i)
                CHECK(fast.log_terminal_wealth[i] == Approx(ref.log_terminal_wealth[i]).epsilon(1e-11));
            for (std::size_t i = 0; i < fast.checkpoint_log_wealth.size(); ++i)
                CHECK(fast.checkpoint_log_wealth[i] == Approx(ref.checkpoint_log_wealth[i]).epsilon(1e-11));
            for (std::size_t i = 0; i < fast.trajectories.size(); ++i)
                CHECK(fast.trajectories[i] == Approx(ref.trajectories[i]).epsilon(1e-11));
        }
    }
}

TEST_CASE("ruin is absorbing and counted") {
    // sigma = 0.5 makes 1 + 0.5 X <= 0 reasonably frequent.
    const GaussianParams wild{1.0, 1.0, 0.5, 0.5, 0.0, 100};
    const auto e = run_ensemble(wild, StrategySpec::imbalanced(1), 2000, 3);
    CHECK(e.ruin_count > 0);
    CHECK(e.survivors() == std::size_t(e.n_paths - e.ruin_count));
    CHECK(std::all_of(e.terminal_wealth.begin(), e.terminal_wealth.end(), [](double w) { return w > 0.0; }));
    const auto s = summarize(e);
    CHECK(s.ruin_count == e.ruin_count);
    CHECK(s.count == e.survivors());
}

TEST_CASE("thread-count invariance") {
    const GaussianParams g{1.0, 1.0, 0.05, 0.05, 0.2, 200};
    EnsembleOptions opt;
    opt.checkpoints = {50, 200};
    opt.workers = 1;
    const auto one = run_ensemble(g, StrategySpec::balanced(), 1000, 5, opt);
    for (int workers : {2, 3, 8}) {
        opt.workers = workers;
        CHECK(same_ensemble(one, run_ensemble(g, StrategySpec::balanced(), 1000, 5, opt)));
    }
}

TEST_CASE("degenerate markets") {
    SUBCASE("rho = 1 binomial: balanced equals imbalanced path by path") {
        BinomialParams b = kFigure;
        b.rho = 1.0;
        const auto bal = run_ensemble(b, StrategySpec::balanced(), 500, 1);
        const auto imb = run_ensemble(b, StrategySpec::imbalanced(1), 500, 1);
        CHECK(bal.terminal_wealth == imb.terminal_wealth);
    }
    SUBCASE("unit gaussian returns leave wealth at exactly 1") {
        const GaussianParams g{1.0, 1.0, 0.0, 0.0, 0.0, 50};
        for (auto s : {StrategySpec::balanced(), StrategySpec::imbalanced(2), StrategySpec::initial_balanced()}) {
            const auto e = run_ensemble(g, s, 50, 2);
            CHECK(std::all_of(e.terminal_wealth.begin(), e.terminal_wealth.end(), [](double w) { return w == 1.0; }));
        }
    }
    SUBCASE("rho = 1 gaussian comparison is exactly zero") {
        const auto c = compare_strategies(GaussianParams::symmetric(1.0, 0.02, 1.0, 100), StrategySpec::balanced(),
                                          StrategySpec::imbalanced(1), 500, 4);
        CHECK(c.log_growth_differential == 0.0);
        CHECK(c.prob_a_ge_b == 1.0);
        CHECK(c.mean_difference == 0.0);
    }
}

TEST_CASE("enumeration reproduces the two-round table") {
    BinomialParams b = kFigure;
    b.steps = 2;
    const auto bal = enumerate_binomial(b, StrategySpec::balanced());
    const auto p = classify_outcomes(bal);
    CHECK(p.above == Approx(0.3125).epsilon(1e-12));
    CHECK(p.at == Approx(0.25).epsilon(1e-12));
    CHECK(p.below == Approx(0.4375).epsilon(1e-12));
    const auto q = classify_outcomes(enumerate_binomial(b, StrategySpec::imbalanced(1)));
    CHECK(q.above == Approx(0.25).epsilon(1e-12));
    CHECK(q.at == Approx(0.0).epsilon(1e-12));
    CHECK(q.below == Approx(0.75).epsilon(1e-12));

    double total = 0.0;
    for (const auto& o : enumerate_binomial(BinomialParams{0.6, 0.97, 0.05, 0.4, 30}, StrategySpec::initial_balanced()))
        total += o.probability;
    CHECK(total == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("enumeration agrees with Monte Carlo on P[W < 1]") {
    const BinomialParams markets[] = {{0.5, 0.98, 0.04, 0.0, 10, true}, {0.6, 0.97, 0.05, 0.4, 7}};
    for (const auto& b : markets) {
        for (auto s : {StrategySpec::balanced(), StrategySpec::imbalanced(1), StrategySpec::initial_balanced(0.3)}) {
            const double exact = classify_outcomes(enumerate_binomial(b, s)).below;
            const auto e = run_ensemble(b, s, 1'000'000, 21);
            const double mc = summarize(e).prob_below_one;
            const double se = std::sqrt(exact * (1.0 - exact) / 1e6);
            CHECK(std::abs(mc - exact) <= 3.0 * se + 1e-12);
        }
    }
}

TEST_CASE("summarize") {
    SUBCASE("constant ensemble") {
        PathEnsemble e;
        e.n_paths = 5;
        e.steps = 10;
        for (std::uint64_t i = 0; i < 5; ++i) {
            e.path_index.push_back(i);
            e.terminal_wealth.push_back(0.9);
            e.log_terminal_wealth.push_back(std::log(0.9));
        }
        const auto s = summarize(e);
        CHECK(s.mean == Approx(0.9).epsilon(1e-15));
        CHECK(s.median == 0.9);
        CHECK(s.mode_estimate == Approx(0.9).epsilon(1e-14));
        CHECK(s.prob_below_one == 1.0);
        CHECK(s.q05 == 0.9);
        CHECK(s.q95 == 0.9);
        CHECK(s.log_growth_mean == Approx(std::log(0.9) / 10).epsilon(1e-14));
    }
    SUBCASE("empty ensemble") {
        PathEnsemble e;
        CHECK_THROWS_AS(summarize(e), EmptyEnsemble);
    }
    SUBCASE("quantiles are monotone and the mode is near the peak") {
        // Continuous market: log wealth is near normal, so its histogram peak sits near the median.
        const auto e = run_ensemble(GaussianParams::symmetric(1.0, 0.02, 0.0, 250), StrategySpec::balanced(), 20000, 8);
        const auto s = summarize(e);
        CHECK(s.q05 <= s.q25);
        CHECK(s.q25 <= s.median);
        CHECK(s.median <= s.q75);
        CHECK(s.q75 <= s.q95);
        CHECK(s.prob_below_one >= 0.0);
        CHECK(s.prob_below_one <= 1.0);
        CHECK(s.mode_estimate == Approx(s.median).epsilon(0.05));
    }
    SUBCASE("type-7 quantile") {
        const std::vector<double> v{1, 2, 3, 4};
        CHECK(sorted_quantile(v, 0.5) == 2.5);
        CHECK(sorted_quantile(v, 0.0) == 1);
        CHECK(sorted_quantile(v, 1.0) == 4);
        CHECK(sorted_quantile(v, 0.25) == Approx(1.75));
    }
    SUBCASE("density histogram integrates to one") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> n;
        std::vector<double> x(5000);
        for (auto& v : x) v = n(rng);
        double area = 0.0;
        for (const auto& bin : density_histogram(x)) area += bin.density * (bin.upper - bin.lower);
        CHECK(area == Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(histogram_mode(x)) < 0.5);
    }
}

TEST_CASE("expectation is preserved by every allocation") {
    const double expected = binomial_expected_value(kFigure);
    for (auto s : {StrategySpec::balanced(), StrategySpec::imbalanced(1)}) {
        const auto sum = summarize(run_ensemble(kFigure, s, 100000, 13));
        CHECK(std::abs(sum.mean - expected) <= 3.0 * sum.std_error);
    }
}

TEST_CASE("paired comparisons") {
    const auto market = GaussianParams::symmetric(1.0, 0.05, 0.1, 300);
    const auto ab = compare_strategies(market, StrategySpec::balanced(), StrategySpec::imbalanced(1), 2000, 6);
    const auto ba = compare_strategies(market, StrategySpec::imbalanced(1), StrategySpec::balanced(), 2000, 6);
    CHECK(ab.log_growth_differential == -ba.log_growth_differential);
    CHECK(ab.mean_difference == -ba.mean_difference);
    CHECK(ab.n_pairs == 2000);

    SUBCASE("balanced beats imbalanced more often at longer horizons") {
        BinomialParams longer = kFigure;
        longer.steps = 500;
        const auto m250 = compare_strategies(kFigure, StrategySpec::balanced(), StrategySpec::imbalanced(1), 10000, 31);
        const auto m500 = compare_strategies(longer, StrategySpec::balanced(), StrategySpec::imbalanced(1), 10000, 31);
        CHECK(m250.prob_a_ge_b > 0.5);
        CHECK(m500.prob_a_ge_b > m250.prob_a_ge_b);
    }
}

TEST_CASE("correlation ratio experiment") {
    const auto market = GaussianParams::symmetric(1.0, 0.02, 0.0, 1);
    SUBCASE("equal correlations give a unit ratio") {
        for (const auto& pt : correlation_ratio_experiment(market, 0.3, 0.3, {10, 100}, 500, 2)) {
            CHECK(pt.median_ratio == 1.0);
            CHECK(pt.mean_log_ratio == 0.0);
        }
    }
    SUBCASE("lower partner correlation sits below the rho2 = 1 trajectory") {
        const auto full = correlation_ratio_experiment(market, 0.0, 1.0, {250, 1000}, 4000, 9);
        const auto half = correlation_ratio_experiment(market, 0.0, 0.5, {250, 1000}, 4000, 9);
        for (std::size_t k = 0; k < full.size(); ++k) {
            CHECK(half[k].median_ratio < full[k].median_ratio);
            CHECK(half[k].median_ratio > 1.0);
        }
    }
    CHECK_THROWS_AS(correlation_ratio_experiment(market, 0.5, 0.0, {10}, 10, 1), PreconditionError);
    CHECK_THROWS_AS(correlation_ratio_experiment(market, 0.0, 1.0, {10, 5}, 10, 1), PreconditionError);
}

TEST_CASE("Jensen concavity holds on every sample") {
    std::mt19937_64 rng(5);
    std::lognormal_distribution<double> ret(0.0, 0.3);
    int violations = 0;
    for (int n = 0; n < 20000; ++n) {
        const double x1 = ret(rng), x2 = ret(rng);
        for (int k = 0; k <= 10; ++k) {
            const double t = k / 10.0;
            if (std::log(t * x1 + (1 - t) * x2) < t * std::log(x1) + (1 - t) * std::log(x2) - 1e-15) ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("Shannon demo") {
    SUBCASE("inside the window: balanced grows, the asset decays") {
        const auto d = shannon_demo(0.015, 0.2, 2000, 4000, 3);
        CHECK(d.analytic.in_window);
        CHECK(d.warning.empty());
        CHECK(d.balanced.log_growth_median > 0.0);
        CHECK(d.asset_only.log_growth_median < 0.0);
    }
    SUBCASE("above the window both grow") {
        const auto d = shannon_demo(0.04, 0.2, 2000, 4000, 3);
        CHECK_FALSE(d.analytic.in_window);
        CHECK_FALSE(d.warning.empty());
        CHECK(d.balanced.log_growth_median > 0.0);
        CHECK(d.asset_only.log_growth_median > 0.0);
    }
    SUBCASE("lower boundary: balanced growth near zero") {
        const auto d = shannon_demo(0.01, 0.2, 4000, 10000, 4);
        // Exact E log(1.005 + 0.1 X) by quadrature; about -3.9e-5.
        const double exact = oracle::expected_log_normal(1.005, 0.1);
        CHECK(exact == Approx(-3.89118899916e-5).epsilon(1e-9));
        const double path_sd = 0.1 / std::sqrt(4000.0);
        const double median_se = 1.2533 * path_sd / std::sqrt(10000.0);
        CHECK(std::abs(d.balanced.log_growth_median - exact) < 4.0 * median_se);
    }
}
