#include "teeshield/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "teeshield/errors.hpp"

namespace teeshield {

void Histogram::validate() const {
    if (mass.empty() || bin_edges.size() != mass.size() + 1)
        throw ValidationError("histogram needs B+1 edges for B bins");
    for (size_t i = 0; i + 1 < bin_edges.size(); ++i)
        if (!(bin_edges[i] < bin_edges[i + 1]))
            throw ValidationError("histogram edges must be strictly ascending");
    double total = 0.0;
    for (double m : mass) {
        if (m < 0.0) throw ValidationError("histogram mass must be non-negative");
        total += m;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw ValidationError("histogram mass must sum to 1");
}

Histogram make_histogram(const std::vector<double>& values, double lo, double hi,
                         size_t bins, double smooth_eps) {
    if (values.empty()) throw ValidationError("make_histogram: empty population");
    if (bins == 0) throw ValidationError("make_histogram: need at least one bin");
    Histogram h;
    if (!(lo < hi)) {
        // Constant population: one bin centered on the value.
        h.bin_edges = {lo - 0.5, lo + 0.5};
        h.mass = {1.0};
        return h;
    }
    h.bin_edges.resize(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (size_t i = 0; i <= bins; ++i) h.bin_edges[i] = lo + width * static_cast<double>(i);
    h.mass.assign(bins, 0.0);
    const double inv_n = 1.0 / static_cast<double>(values.size());
    for (double v : values) {
        auto idx = static_cast<long>(std::floor((v - lo) / width));
        idx = std::clamp<long>(idx, 0, static_cast<long>(bins) - 1);
        h.mass[static_cast<size_t>(idx)] += inv_n;
    }
    if (smooth_eps > 0.0) {
        // Floor mass of ~1.1*eps per bin keeps every bin above eps after the
        // renormalization below.
        const double add = 1.1 * smooth_eps;
        const double denom = 1.0 + add * static_cast<double>(bins);
        for (auto& m : h.mass) m = (m + add) / denom;
    }
    return h;
}

double jsd(const Histogram& p, const Histogram& q) {
    if (p.bin_edges != q.bin_edges)
        throw ValidationError("jsd: histograms have different bin edges");
    if (p.mass.size() != q.mass.size())
        throw ValidationError("jsd: histograms have different bin counts");
    const double inv_log2 = 1.4426950408889634;  // 1/ln(2)
    double acc = 0.0;
    for (size_t i = 0; i < p.mass.size(); ++i) {
        const double pi = p.mass[i];
        const double qi = q.mass[i];
        const double mi = 0.5 * (pi + qi);
        if (pi > 0.0) acc += 0.5 * pi * std::log(pi / mi) * inv_log2;
        if (qi > 0.0) acc += 0.5 * qi * std::log(qi / mi) * inv_log2;
    }
    // Clamp float drift at the boundaries of the theoretical range.
    return std::clamp(acc, 0.0, 1.0);
}

}  // namespace teeshield
