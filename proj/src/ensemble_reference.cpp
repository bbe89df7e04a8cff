#include <cmath>

#include "path_common.hpp"
#include "volharvest/simulation.hpp"

namespace volharvest {

PathEnsemble run_ensemble_reference(const Market& market, const StrategySpec& strategy, std::int64_t n_paths,
                                    std::uint64_t seed, const EnsembleOptions& options) {
    detail::check_ensemble_request(market, strategy, n_paths, options);

    PathEnsemble out;
    out.n_paths = n_paths;
    out.steps = market_steps(market);
    out.master_seed = seed;
    out.strategy = strategy;
    out.checkpoints = options.checkpoints;

    const bool initial = strategy.kind == StrategySpec::Kind::initial_balanced;
    std::visit(
        [&](const auto& params) {
            const auto draw = detail::make_draw(params);
            std::vector<double> cps;
            std::vector<double> traj;
            for (std::int64_t path = 0; path < n_paths; ++path) {
                double wealth = 1.0;
                double leg1 = 1.0;
                double leg2 = 1.0;
                bool ruined = false;
                cps.clear();
                traj.assign(1, 1.0);
                for (std::int64_t j = 0; j < out.steps && !ruined; ++j) {
                    const ReturnPair r = draw(SeedSpec{seed, std::uint64_t(path), std::uint64_t(j)});
                    if (initial) {
                        ruined = r.r1 <= 0.0 || r.r2 <= 0.0;
                        leg1 *= r.r1;
                        leg2 *= r.r2;
                        wealth = leg1 == leg2 ? leg1 : strategy.theta * leg1 + (1.0 - strategy.theta) * leg2;
                    } else {
                        const double g = strategy.kind == StrategySpec::Kind::balanced
                                             ? detail::portfolio_return(strategy.theta, r.r1, r.r2)
                                             : (strategy.asset == 1 ? r.r1 : r.r2);
                        ruined = g <= 0.0;
                        wealth *= g;
                    }
                    for (std::int64_t c : options.checkpoints)
                        if (c == j + 1) cps.push_back(std::log(wealth));
                    if (options.record_trajectories) traj.push_back(wealth);
                }
                if (ruined) {
                    ++out.ruin_count;
                    continue;
                }
                out.path_index.push_back(std::uint64_t(path));
                out.terminal_wealth.push_back(wealth);
                out.log_terminal_wealth.push_back(std::log(wealth));
                out.checkpoint_log_wealth.insert(out.checkpoint_log_wealth.end(), cps.begin(), cps.end());
                if (options.record_trajectories)
                    out.trajectories.insert(out.trajectories.end(), traj.begin(), traj.end());
            }
        },
        market);
    return out;
}

}  // namespace volharvest
