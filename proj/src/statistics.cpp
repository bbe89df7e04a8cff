#include <algorithm>
#include <cmath>
#include <numeric>

#include "volharvest/error.hpp"
#include "volharvest/simulation.hpp"

namespace volharvest {

namespace {

constexpr std::size_t kMaxBins = 10000;

struct Binning {
    double origin = 0.0;
    double width = 0.0;
    std::vector<std::size_t> counts;
};

// Freedman-Diaconis: width = 2 IQR n^(-1/3). Empty counts when the spread
// is degenerate.
Binning freedman_diaconis(std::span<const double> sorted) {
    Binning b;
    const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
    const double range = sorted.back() - sorted.front();
    if (!(iqr > 0.0) || !(range > 0.0)) return b;
    b.width = 2.0 * iqr / std::cbrt(double(sorted.size()));
    auto bins = std::size_t(std::ceil(range / b.width));
    bins = std::clamp<std::size_t>(bins, 1, kMaxBins);
    b.width = range / double(bins);
    b.origin = sorted.front();
    b.counts.assign(bins, 0);
    for (double v : sorted) {
        auto k = std::size_t((v - b.origin) / b.width);
        ++b.counts[std::min(k, bins - 1)];
    }
    return b;
}

}  // namespace

double sorted_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw EmptyEnsemble("quantile of an empty sample");
    const double h = q * double(sorted.size() - 1);
    const auto lo = std::size_t(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - double(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double histogram_mode(std::span<const double> values) {
    if (values.empty()) throw EmptyEnsemble("mode of an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const Binning b = freedman_diaconis(sorted);
    if (b.counts.empty()) return sorted_quantile(sorted, 0.5);
    const auto best = std::size_t(std::max_element(b.counts.begin(), b.counts.end()) - b.counts.begin());
    return b.origin + (double(best) + 0.5) * b.width;
}

std::vector<HistogramBin> density_histogram(std::span<const double> values) {
    if (values.empty()) throw EmptyEnsemble("histogram of an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const Binning b = freedman_diaconis(sorted);
    if (b.counts.empty()) return {{sorted.front(), sorted.back(), 0.0}};
    std::vector<HistogramBin> out;
    out.reserve(b.counts.size());
    const double norm = double(sorted.size()) * b.width;
    for (std::size_t k = 0; k < b.counts.size(); ++k)
        out.push_back({b.origin + double(k) * b.width, b.origin + double(k + 1) * b.width, double(b.counts[k]) / norm});
    return out;
}

DistributionSummary summarize(const PathEnsemble& ensemble) {
    const auto& w = ensemble.terminal_wealth;
    if (w.empty()) throw EmptyEnsemble("ensemble has no surviving paths");
    const double n = double(w.size());

    DistributionSummary s;
    s.count = w.size();
    s.ruin_count = ensemble.ruin_count;
    s.mean = std::accumulate(w.begin(), w.end(), 0.0) / n;
    if (w.size() > 1) {
        double ss = 0.0;
        for (double x : w) ss += (x - s.mean) * (x - s.mean);
        s.std_error = std::sqrt(ss / (n - 1.0) / n);
    }

    std::vector<double> sorted(w);
    std::sort(sorted.begin(), sorted.end());
    s.median = sorted_quantile(sorted, 0.5);
    s.q05 = sorted_quantile(sorted, 0.05);
    s.q25 = sorted_quantile(sorted, 0.25);
    s.q75 = sorted_quantile(sorted, 0.75);
    s.q95 = sorted_quantile(sorted, 0.95);

    const auto& lw = ensemble.log_terminal_wealth;
    s.mode_estimate = std::exp(histogram_mode(lw));
    s.prob_below_one =
        double(std::count_if(lw.begin(), lw.end(), [](double x) { return x < -kBreakEvenLogTol; })) / n;

    if (ensemble.steps > 0) {
        const double m = double(ensemble.steps);
        s.log_growth_mean = std::accumulate(lw.begin(), lw.end(), 0.0) / n / m;
        std::vector<double> sorted_log(lw);
        std::sort(sorted_log.begin(), sorted_log.end());
        s.log_growth_median = sorted_quantile(sorted_log, 0.5) / m;
    }
    return s;
}

}  // namespace volharvest
