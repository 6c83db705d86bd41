#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fusemot/detection.hpp"
#include "fusemot/geometry.hpp"
#include "fusemot/histogram.hpp"
#include "fusemot/image.hpp"

namespace fusemot {

struct FusionParams {
    double t_o = 0.05;          // pairing overlap threshold
    double t_m = 0.5;           // minimum overlap before a fragment may merge
    double t_c = 0.5;           // maximum colour dissimilarity for merging
    double min_area = 64.0;     // foreground boxes smaller than this are noise
    double dummy_confidence = 0.5;
    int histogram_bins = 256;

    void validate() const;
};

// Tracker input produced by fusing the two detection streams of one frame.
// Source indices refer to the filtered per-frame input sequences.
struct FusedObject {
    BoundingBox bbox;
    std::string label = kDummyLabel;
    double confidence = 0.0;
    std::optional<ColourHistogram> histogram;
    std::vector<int> imot_sources;
    std::vector<int> mod_sources;
};

// Row i, column j set when iou(imot_i, mod_j) >= t_o.
struct PairingMatrix {
    std::size_t imot_count = 0;
    std::size_t mod_count = 0;
    std::vector<char> paired;

    bool at(std::size_t i, std::size_t j) const { return paired[i * mod_count + j] != 0; }
    void set(std::size_t i, std::size_t j) { paired[i * mod_count + j] = 1; }
};

// Histogram lookup for one frame's detections. Prefers computing from the
// frame image; falls back to histograms carried on the detections. Results
// are cached per detection.
class StreamHistograms {
public:
    StreamHistograms(const std::vector<Detection>& dets, const Image* frame, int n_bins);

    // Throws DataError when neither the frame nor the detection supplies
    // colour data.
    const ColourHistogram& get(std::size_t index) const;
    bool available(std::size_t index) const;

private:
    const std::vector<Detection>& dets_;
    const Image* frame_;
    int n_bins_;
    mutable std::vector<std::optional<ColourHistogram>> cache_;
};

std::vector<Detection> filter_small(const std::vector<Detection>& imot, double min_area);

PairingMatrix pair_streams(const std::vector<Detection>& imot,
                           const std::vector<Detection>& mod, double t_o);

struct MergeOutcome {
    std::vector<char> imot_kept;            // index-aligned with the IMOT input
    std::vector<int> replacement_mods;      // MOD indices emitted as fused boxes
    std::vector<std::vector<int>> absorbed; // per replacement, the discarded IMOT indices
};

// For each MOD box still paired with more than one surviving IMOT box,
// discards every such fragment whose overlap reaches t_m and whose colour
// matches within t_c; a MOD that absorbed at least one fragment is emitted
// once in its place.
MergeOutcome merge_fragments(const PairingMatrix& pairing, const std::vector<Detection>& imot,
                             const std::vector<Detection>& mod, const FusionParams& params,
                             const StreamHistograms& imot_hists,
                             const StreamHistograms& mod_hists);

std::vector<FusedObject> transfer_labels(const MergeOutcome& merge, const PairingMatrix& pairing,
                                         const std::vector<Detection>& imot,
                                         const std::vector<Detection>& mod,
                                         const FusionParams& params,
                                         const StreamHistograms& imot_hists,
                                         const StreamHistograms& mod_hists);

// filter_small -> pair_streams -> merge_fragments -> transfer_labels.
// `frame` may be null when the detections carry their own histograms or when
// no merging/colour work is needed.
std::vector<FusedObject> fuse_frame(const std::vector<Detection>& imot,
                                    const std::vector<Detection>& mod,
                                    const FusionParams& params, const Image* frame = nullptr);

} // namespace fusemot
