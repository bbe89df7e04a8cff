#include <omp.h>

#include <cmath>
#include <cstdint>

#include "path_common.hpp"
#include "volharvest/simulation.hpp"

namespace volharvest {

namespace {

struct PathSlots {
    std::int64_t steps = 0;
    std::size_t n_checkpoints = 0;
    bool trajectories = false;

    std::vector<double> log_terminal;
    std::vector<unsigned char> ruined;
    std::vector<double> checkpoint_log;
    std::vector<double> trajectory;

    PathSlots(std::int64_t n_paths, std::int64_t m, std::size_t c, bool record)
        : steps(m), n_checkpoints(c), trajectories(record),
          log_terminal(std::size_t(n_paths)), ruined(std::size_t(n_paths)),
          checkpoint_log(std::size_t(n_paths) * c),
          trajectory(record ? std::size_t(n_paths) * std::size_t(m + 1) : 0) {}
};

// Advances one path through every period in log space. Returns false on ruin.
template <class Draw>
bool simulate_path(const Draw& draw, const StrategySpec& s, std::uint64_t seed, std::uint64_t path,
                   std::span<const std::int64_t> checkpoints, PathSlots& slots) {
    const std::int64_t steps = slots.steps;
    double* cp_out = slots.checkpoint_log.data() + path * slots.n_checkpoints;
    double* traj_out = slots.trajectories ? slots.trajectory.data() + path * std::size_t(steps + 1) : nullptr;

    // Log wealth of the whole portfolio, or of each leg for initial_balanced.
    double lead = 0.0;
    double second = 0.0;
    auto current = [&] {
        return s.kind == StrategySpec::Kind::initial_balanced ? detail::log_mixture(s.theta, lead, second) : lead;
    };

    if (traj_out) traj_out[0] = 1.0;
    std::size_t next_cp = 0;
    for (std::int64_t j = 0; j < steps; ++j) {
        const ReturnPair r = draw(SeedSpec{seed, path, std::uint64_t(j)});
        switch (s.kind) {
            case StrategySpec::Kind::balanced: {
                const double g = detail::portfolio_return(s.theta, r.r1, r.r2);
                if (!(g > 0.0)) return false;
                lead += std::log(g);
                break;
            }
            case StrategySpec::Kind::imbalanced: {
                const double g = s.asset == 1 ? r.r1 : r.r2;
                if (!(g > 0.0)) return false;
                lead += std::log(g);
                break;
            }
            case StrategySpec::Kind::initial_balanced:
                if (!(r.r1 > 0.0 && r.r2 > 0.0)) return false;
                lead += std::log(r.r1);
                second += std::log(r.r2);
                break;
        }
        const std::int64_t done = j + 1;
        if (next_cp < checkpoints.size() && checkpoints[next_cp] == done) cp_out[next_cp++] = current();
        if (traj_out) traj_out[done] = std::exp(current());
    }
    slots.log_terminal[path] = current();
    return true;
}

PathEnsemble compact(PathSlots& slots, std::int64_t n_paths, std::uint64_t seed, const StrategySpec& strategy,
                     const std::vector<std::int64_t>& checkpoints) {
    PathEnsemble out;
    out.n_paths = n_paths;
    out.steps = slots.steps;
    out.master_seed = seed;
    out.strategy = strategy;
    out.checkpoints = checkpoints;
    const std::size_t c = slots.n_checkpoints;
    const std::size_t width = std::size_t(slots.steps + 1);
    for (std::int64_t i = 0; i < n_paths; ++i) {
        const auto k = std::size_t(i);
        if (slots.ruined[k]) {
            ++out.ruin_count;
            continue;
        }
        out.path_index.push_back(std::uint64_t(i));
        out.log_terminal_wealth.push_back(slots.log_terminal[k]);
        out.terminal_wealth.push_back(std::exp(slots.log_terminal[k]));
        out.checkpoint_log_wealth.insert(out.checkpoint_log_wealth.end(), slots.checkpoint_log.begin() + k * c,
                                         slots.checkpoint_log.begin() + (k + 1) * c);
        if (slots.trajectories)
            out.trajectories.insert(out.trajectories.end(), slots.trajectory.begin() + k * width,
                                    slots.trajectory.begin() + (k + 1) * width);
    }
    return out;
}

}  // namespace

PathEnsemble run_ensemble(const Market& market, const StrategySpec& strategy, std::int64_t n_paths,
                          std::uint64_t seed, const EnsembleOptions& options) {
    detail::check_ensemble_request(market, strategy, n_paths, options);
    const std::int64_t steps = market_steps(market);
    PathSlots slots(n_paths, steps, options.checkpoints.size(), options.record_trajectories);
    const int threads = options.workers > 0 ? options.workers : omp_get_max_threads();
    const std::span<const std::int64_t> checkpoints(options.checkpoints);

    std::visit(
        [&](const auto& params) {
            const auto draw = detail::make_draw(params);
#pragma omp parallel for schedule(static) num_threads(threads)
            for (std::int64_t i = 0; i < n_paths; ++i) {
                const bool alive = simulate_path(draw, strategy, seed, std::uint64_t(i), checkpoints, slots);
                slots.ruined[std::size_t(i)] = alive ? 0 : 1;
            }
        },
        market);

    return compact(slots, n_paths, seed, strategy, options.checkpoints);
}

}  // namespace volharvest
