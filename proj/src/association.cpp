#include "fusemot/association.hpp"

#include <algorithm>
#include <cmath>

#include "fusemot/error.hpp"

namespace fusemot {

void CostWeights::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma) ||
        alpha < 0.0 || beta < 0.0 || gamma < 0.0)
        throw DataError("cost weights must be non-negative");
    if (std::abs(alpha + beta + gamma - 1.0) > 1e-9)
        throw DataError("cost weights must sum to 1");
}

void AssociationParams::validate() const {
    weights.validate();
    if (!std::isfinite(t_d) || t_d <= 0.0)
        throw DataError("spatial distance scale must be positive");
    if (!std::isfinite(gate) || gate < 0.0 || gate > 1.0)
        throw DataError("association gate must be in [0, 1]");
    if (frame_width <= 0.0 || frame_height <= 0.0)
        throw DataError("frame dimensions must be positive");
}

double spatial_cost(const BoundingBox& det, const BoundingBox& trk, double t_d,
                    double frame_w, double frame_h) {
    const double sd = mean_corner_distance(det, trk, frame_w, frame_h);
    return 1.0 - std::max(0.0, (t_d - sd) / t_d);
}

double colour_cost(const ColourHistogram& det, const ColourHistogram& trk) {
    return bhattacharyya_similarity(det, trk);
}

double label_cost(const std::string& l_i, double w_i, const std::string& l_j, double w_j) {
    if (l_i != l_j) return 1.0;
    return 1.0 - 0.5 * (w_i + w_j);
}

double final_cost(double c_d, double c_c, double c_l, const CostWeights& weights) {
    return weights.alpha * c_d + weights.beta * c_c + weights.gamma * c_l;
}

CostMatrix build_cost_matrix(const std::vector<TrackView>& tracks,
                             const std::vector<FusedObject>& dets,
                             const AssociationParams& params) {
    params.validate();
    CostMatrix matrix(tracks.size(), dets.size());
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        for (std::size_t j = 0; j < dets.size(); ++j) {
            const double c_d = spatial_cost(dets[j].bbox, tracks[i].predicted_box, params.t_d,
                                            params.frame_width, params.frame_height);
            double c_c = 0.0;
            if (params.weights.beta > 0.0) {
                if (tracks[i].histogram == nullptr || !dets[j].histogram)
                    throw DataError("colour cost weight is positive but histograms are missing; "
                                    "supply frames or set the colour weight to 0");
                c_c = colour_cost(*dets[j].histogram, *tracks[i].histogram);
            }
            const double c_l = label_cost(dets[j].label, dets[j].confidence, tracks[i].label,
                                          tracks[i].confidence);
            matrix.at(i, j) = final_cost(c_d, c_c, c_l, params.weights);
        }
    }
    return matrix;
}

AssignmentResult solve(const CostMatrix& matrix, double gate) {
    const std::vector<int> row_to_col = solve_assignment(matrix, 1.0);

    AssignmentResult result;
    std::vector<char> det_matched(matrix.cols, 0);
    for (std::size_t i = 0; i < matrix.rows; ++i) {
        const int j = row_to_col[i];
        if (j >= 0 && matrix.at(i, j) <= gate) {
            result.matches.emplace_back(static_cast<int>(i), j);
            det_matched[j] = 1;
        } else {
            result.unmatched_tracks.push_back(static_cast<int>(i));
        }
    }
    for (std::size_t j = 0; j < matrix.cols; ++j)
        if (!det_matched[j]) result.unmatched_detections.push_back(static_cast<int>(j));
    return result;
}

} // namespace fusemot
