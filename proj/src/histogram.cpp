#include "fusemot/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fusemot {

double ColourHistogram::total() const {
    return std::accumulate(bins.begin(), bins.end(), 0.0);
}

std::uint8_t luminance(Rgb colour) {
    const int y = (299 * colour[0] + 587 * colour[1] + 114 * colour[2] + 500) / 1000;
    return static_cast<std::uint8_t>(y);
}

ColourHistogram histogram_from_region(const Image& img, const BoundingBox& box, int n_bins) {
    if (n_bins <= 0 || n_bins > 256)
        throw std::invalid_argument("histogram bin count must be in [1, 256]");

    ColourHistogram hist;
    hist.bins.assign(static_cast<std::size_t>(n_bins), 0.0);

    auto bin_of = [&](std::uint8_t y) { return static_cast<std::size_t>(y) * n_bins / 256; };

    // A pixel belongs to the box when its center (x + 0.5, y + 0.5) is inside.
    int x0 = static_cast<int>(std::ceil(box.x_min - 0.5));
    int y0 = static_cast<int>(std::ceil(box.y_min - 0.5));
    int x1 = static_cast<int>(std::floor(box.x_max - 0.5));
    int y1 = static_cast<int>(std::floor(box.y_max - 0.5));
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, img.width - 1);
    y1 = std::min(y1, img.height - 1);

    if (x0 > x1 || y0 > y1) {
        // Sub-pixel sliver: sample the pixel under the box center.
        const int cx = std::clamp(static_cast<int>(box.center_x()), 0, img.width - 1);
        const int cy = std::clamp(static_cast<int>(box.center_y()), 0, img.height - 1);
        hist.bins[bin_of(luminance(img.at(cx, cy)))] += 1.0;
        return hist;
    }

    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) hist.bins[bin_of(luminance(img.at(x, y)))] += 1.0;
    return hist;
}

double bhattacharyya_similarity(const ColourHistogram& g, const ColourHistogram& h) {
    if (g.bins.size() != h.bins.size())
        throw std::invalid_argument("histogram bin counts differ");
    if (g.bins.empty()) throw std::invalid_argument("empty histogram");

    double overlap = 0.0;
    double sum_g = 0.0;
    double sum_h = 0.0;
    for (std::size_t i = 0; i < g.bins.size(); ++i) {
        if (g.bins[i] < 0.0 || h.bins[i] < 0.0)
            throw std::invalid_argument("histogram bins must be non-negative");
        overlap += std::sqrt(g.bins[i] * h.bins[i]);
        sum_g += g.bins[i];
        sum_h += h.bins[i];
    }
    if (sum_g <= 0.0 || sum_h <= 0.0) throw std::invalid_argument("histogram has zero mass");

    // The normalizer sqrt(sum_g * sum_h) equals N * sqrt(mean_g * mean_h);
    // this form keeps identical inputs at exactly zero.
    double radicand = 1.0 - overlap / std::sqrt(sum_g * sum_h);
    if (radicand < 0.0) {
        if (radicand < -1e-9) throw std::invalid_argument("histogram similarity out of range");
        radicand = 0.0;
    }
    return std::sqrt(radicand);
}

} // namespace fusemot
