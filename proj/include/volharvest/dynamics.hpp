#pragma once

// Counter-based random drivers. Every draw is a pure function of
// (master_seed, path_index, step_index, stream), so ensembles can be
// generated in any order and on any number of threads with identical output.

#include <cstdint>

#include "volharvest/analytics.hpp"

namespace volharvest {

struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t path_index = 0;
    std::uint64_t step_index = 0;

    SeedSpec at(std::uint64_t path, std::uint64_t step) const noexcept { return {master_seed, path, step}; }
};

struct ReturnPair {
    double r1 = 1.0;
    double r2 = 1.0;
};

struct BitPair {
    bool b1 = false;
    bool b2 = false;
};

struct NormalPair {
    double x1 = 0.0;
    double x2 = 0.0;
};

/// Raw 64-bit hash of the counter tuple.
std::uint64_t counter_hash(const SeedSpec& seed, std::uint32_t stream) noexcept;

/// Uniform in the open interval (0, 1) with 53 bits of resolution.
double counter_uniform(const SeedSpec& seed, std::uint32_t stream) noexcept;

/// Cumulative thresholds of the joint Bernoulli law, in the order
/// (1,1), (1,0), (0,1), (0,0). Precomputed once per market.
class BernoulliPairSampler {
public:
    BernoulliPairSampler(double p, double rho);

    BitPair operator()(const SeedSpec& seed) const noexcept;

    const JointBernoulli& law() const noexcept { return law_; }

private:
    JointBernoulli law_;
    double t11_;
    double t10_;
    double t01_;
};

class GaussianPairSampler {
public:
    explicit GaussianPairSampler(double rho);

    NormalPair operator()(const SeedSpec& seed) const noexcept;

private:
    double rho_;
    double complement_;
};

BitPair sample_bernoulli_pair(double p, double rho, const SeedSpec& seed);
NormalPair sample_gaussian_pair(double rho, const SeedSpec& seed);

ReturnPair binomial_returns(const BinomialParams& params, BitPair bits) noexcept;
ReturnPair gaussian_returns(const GaussianParams& params, NormalPair x) noexcept;

ReturnPair binomial_return_pair(const BinomialParams& params, const SeedSpec& seed);
ReturnPair gaussian_return_pair(const GaussianParams& params, const SeedSpec& seed);

}  // namespace volharvest
