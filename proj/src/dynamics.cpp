#include "volharvest/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "volharvest/error.hpp"

namespace volharvest {

namespace {

// SplitMix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t counter_hash(const SeedSpec& seed, std::uint32_t stream) noexcept {
    std::uint64_t h = mix(seed.master_seed);
    h = mix(h ^ (seed.path_index * 0xd1b54a32d192ed03ULL));
    h = mix(h ^ (seed.step_index * 0xaef17502108ef2d9ULL));
    return mix(h ^ (std::uint64_t{stream} * 0x8cb92ba72f3d8dd7ULL));
}

double counter_uniform(const SeedSpec& seed, std::uint32_t stream) noexcept {
    return (double(counter_hash(seed, stream) >> 11) + 0.5) * 0x1.0p-53;
}

BernoulliPairSampler::BernoulliPairSampler(double p, double rho) : law_(joint_bernoulli(p, rho)) {
    t11_ = law_.beta1;
    t10_ = t11_ + 0.5 * law_.beta2;
    t01_ = t10_ + 0.5 * law_.beta2;
}

BitPair BernoulliPairSampler::operator()(const SeedSpec& seed) const noexcept {
    const double u = counter_uniform(seed, 0);
    if (u < t11_) return {true, true};
    if (u < t10_) return {true, false};
    if (u < t01_) return {false, true};
    return {false, false};
}

GaussianPairSampler::GaussianPairSampler(double rho) : rho_(rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw PreconditionError("gaussian sampler requires -1 <= rho <= 1");
    complement_ = std::sqrt(1.0 - rho * rho);
}

NormalPair GaussianPairSampler::operator()(const SeedSpec& seed) const noexcept {
    // Box-Muller on two independent counter uniforms.
    const double radius = std::sqrt(-2.0 * std::log(counter_uniform(seed, 0)));
    const double angle = 2.0 * std::numbers::pi * counter_uniform(seed, 1);
    const double z0 = radius * std::cos(angle);
    const double z1 = radius * std::sin(angle);
    return {z0, rho_ * z0 + complement_ * z1};
}

BitPair sample_bernoulli_pair(double p, double rho, const SeedSpec& seed) {
    return BernoulliPairSampler(p, rho)(seed);
}

NormalPair sample_gaussian_pair(double rho, const SeedSpec& seed) {
    return GaussianPairSampler(rho)(seed);
}

ReturnPair binomial_returns(const BinomialParams& params, BitPair bits) noexcept {
    return {bits.b1 ? params.mu + params.r : params.mu, bits.b2 ? params.mu + params.r : params.mu};
}

ReturnPair gaussian_returns(const GaussianParams& params, NormalPair x) noexcept {
    return {params.mu1 + params.sigma1 * x.x1, params.mu2 + params.sigma2 * x.x2};
}

ReturnPair binomial_return_pair(const BinomialParams& params, const SeedSpec& seed) {
    params.validate();
    return binomial_returns(params, sample_bernoulli_pair(params.p, params.rho, seed));
}

ReturnPair gaussian_return_pair(const GaussianParams& params, const SeedSpec& seed) {
    params.validate();
    return gaussian_returns(params, sample_gaussian_pair(params.rho, seed));
}

}  // namespace volharvest
