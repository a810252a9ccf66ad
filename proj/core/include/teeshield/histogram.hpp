#pragma once

#include <cstddef>
#include <vector>

namespace teeshield {

inline constexpr size_t kDefaultHistogramBins = 64;
inline constexpr double kHistogramSmoothEps = 1e-9;

// Normalized histogram over fixed edges. Histograms built by
// make_histogram are smoothed so every bin carries positive mass.
struct Histogram {
    std::vector<double> bin_edges;  // B+1 ascending reals
    std::vector<double> mass;       // B entries, sums to 1

    size_t bins() const { return mass.size(); }
    void validate() const;
};

// Histograms `values` over [lo, hi] with `bins` equal-width bins, then adds
// `smooth_eps` floor mass and renormalizes. Values outside [lo, hi] clamp to
// the edge bins. A degenerate range (lo == hi) yields a single-bin histogram.
Histogram make_histogram(const std::vector<double>& values, double lo, double hi,
                         size_t bins = kDefaultHistogramBins,
                         double smooth_eps = kHistogramSmoothEps);

// Jensen-Shannon divergence with base-2 logarithms, in [0, 1].
// Requires identical bin edges. Zero-mass bins contribute zero.
double jsd(const Histogram& p, const Histogram& q);

}  // namespace teeshield
