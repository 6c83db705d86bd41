#pragma once

#include <vector>

#include "fusemot/detection.hpp"
#include "fusemot/track.hpp"

namespace fusemot {

struct MotReport {
    long gt_instances = 0;
    long correct = 0;
    long misses = 0;
    long false_positives = 0;
    long mismatches = 0;
    double motp = 0.0; // mean overlap of matched pairs, 0 when nothing matched
    double mota = 0.0; // 1 - (misses + FP + mismatches) / gt_instances
};

// Frame-by-frame scoring: correspondences persist from the previous frame
// while their overlap stays at or above the threshold; the rest are matched
// by maximum overlap. A ground-truth object whose track id changes counts
// one mismatch, with the last id remembered across gaps.
MotReport evaluate(const std::vector<TrackRecord>& records,
                   const std::vector<GroundTruthEntry>& gt, double overlap_threshold);

} // namespace fusemot
