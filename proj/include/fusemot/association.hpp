#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fusemot/fusion.hpp"
#include "fusemot/geometry.hpp"
#include "fusemot/histogram.hpp"
#include "fusemot/hungarian.hpp"

namespace fusemot {

// Relative weights of the spatial, colour, and label costs. Must sum to 1.
struct CostWeights {
    double alpha = 0.6;
    double beta = 0.3;
    double gamma = 0.1;

    void validate() const;
};

struct AssociationParams {
    CostWeights weights;
    double t_d = 0.5;   // spatial distance scale
    double gate = 0.9;  // matches costlier than this are rejected
    double frame_width = 0.0;
    double frame_height = 0.0;

    void validate() const;
};

// What the cost computation needs to know about an active track.
struct TrackView {
    BoundingBox predicted_box;
    std::string label;
    double confidence = 0.0;
    const ColourHistogram* histogram = nullptr; // appearance of the last observed step
};

struct AssignmentResult {
    std::vector<std::pair<int, int>> matches; // (track index, detection index)
    std::vector<int> unmatched_tracks;
    std::vector<int> unmatched_detections;
};

using CostMatrix = Matrix;

// 1 - max(0, (t_d - mean corner distance) / t_d), saturating at 1.
double spatial_cost(const BoundingBox& det, const BoundingBox& trk, double t_d,
                    double frame_w, double frame_h);

double colour_cost(const ColourHistogram& det, const ColourHistogram& trk);

// 1 - (w_i + w_j)/2 when the labels agree, 1 otherwise.
double label_cost(const std::string& l_i, double w_i, const std::string& l_j, double w_j);

double final_cost(double c_d, double c_c, double c_l, const CostWeights& weights);

// Rows are tracks, columns detections. Colour cost participates only when
// beta > 0; it then requires histograms on both sides.
CostMatrix build_cost_matrix(const std::vector<TrackView>& tracks,
                             const std::vector<FusedObject>& dets,
                             const AssociationParams& params);

// Minimum-cost one-to-one matching; pairs costlier than the gate are
// demoted to unmatched on both sides.
AssignmentResult solve(const CostMatrix& matrix, double gate);

} // namespace fusemot
