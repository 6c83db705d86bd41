#pragma once

#include <cstdint>
#include <vector>

#include "fusemot/geometry.hpp"
#include "fusemot/image.hpp"

namespace fusemot {

// Greyscale intensity histogram over a box region. Counts are unnormalized;
// the similarity measure normalizes internally.
struct ColourHistogram {
    std::vector<double> bins;

    double total() const;
    bool operator==(const ColourHistogram&) const = default;
};

// Rec. 601 integer luma, range [0, 255].
std::uint8_t luminance(Rgb colour);

// Histogram of the pixels whose centers fall inside the box. A box too small
// to cover any pixel center contributes the single pixel under its center.
ColourHistogram histogram_from_region(const Image& img, const BoundingBox& box, int n_bins);

// Bhattacharyya-based dissimilarity in [0, 1]; 0 means identical shape.
// Throws std::invalid_argument on bin-count mismatch or an empty histogram.
double bhattacharyya_similarity(const ColourHistogram& g, const ColourHistogram& h);

} // namespace fusemot
