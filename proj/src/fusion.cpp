#include "fusemot/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "fusemot/error.hpp"

namespace fusemot {

void FusionParams::validate() const {
    auto unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    if (!unit(t_o)) throw DataError("pairing threshold must be in [0, 1]");
    if (!unit(t_m)) throw DataError("merge overlap threshold must be in [0, 1]");
    if (!unit(t_c)) throw DataError("merge colour threshold must be in [0, 1]");
    if (!unit(dummy_confidence)) throw DataError("dummy confidence must be in [0, 1]");
    if (!std::isfinite(min_area) || min_area < 0.0)
        throw DataError("minimum blob area must be non-negative");
    if (histogram_bins < 1 || histogram_bins > 256)
        throw DataError("histogram bin count must be in [1, 256]");
}

StreamHistograms::StreamHistograms(const std::vector<Detection>& dets, const Image* frame,
                                   int n_bins)
    : dets_(dets), frame_(frame), n_bins_(n_bins), cache_(dets.size()) {}

bool StreamHistograms::available(std::size_t index) const {
    return frame_ != nullptr || dets_[index].histogram.has_value();
}

const ColourHistogram& StreamHistograms::get(std::size_t index) const {
    if (cache_[index]) return *cache_[index];
    if (frame_ != nullptr) {
        cache_[index] = histogram_from_region(*frame_, dets_[index].bbox, n_bins_);
    } else if (dets_[index].histogram) {
        cache_[index] = dets_[index].histogram;
    } else {
        throw DataError("colour comparison requested but no frame image or histogram is "
                        "available for a detection in frame " +
                        std::to_string(dets_[index].frame));
    }
    return *cache_[index];
}

std::vector<Detection> filter_small(const std::vector<Detection>& imot, double min_area) {
    std::vector<Detection> kept;
    kept.reserve(imot.size());
    for (const Detection& det : imot)
        if (det.bbox.area() >= min_area) kept.push_back(det);
    return kept;
}

PairingMatrix pair_streams(const std::vector<Detection>& imot,
                           const std::vector<Detection>& mod, double t_o) {
    PairingMatrix pairing;
    pairing.imot_count = imot.size();
    pairing.mod_count = mod.size();
    pairing.paired.assign(imot.size() * mod.size(), 0);
    for (std::size_t i = 0; i < imot.size(); ++i)
        for (std::size_t j = 0; j < mod.size(); ++j)
            if (iou(imot[i].bbox, mod[j].bbox) >= t_o) pairing.set(i, j);
    return pairing;
}

MergeOutcome merge_fragments(const PairingMatrix& pairing, const std::vector<Detection>& imot,
                             const std::vector<Detection>& mod, const FusionParams& params,
                             const StreamHistograms& imot_hists,
                             const StreamHistograms& mod_hists) {
    MergeOutcome outcome;
    outcome.imot_kept.assign(imot.size(), 1);

    for (std::size_t j = 0; j < mod.size(); ++j) {
        std::vector<int> candidates;
        for (std::size_t i = 0; i < imot.size(); ++i)
            if (outcome.imot_kept[i] && pairing.at(i, j)) candidates.push_back(static_cast<int>(i));
        if (candidates.size() < 2) continue;

        std::vector<int> discarded;
        for (int i : candidates) {
            const double s_o = iou(imot[i].bbox, mod[j].bbox);
            if (s_o < params.t_m) continue;
            const double s_c = bhattacharyya_similarity(imot_hists.get(i), mod_hists.get(j));
            if (s_c > params.t_c) continue;
            discarded.push_back(i);
        }
        if (discarded.empty()) continue;

        for (int i : discarded) outcome.imot_kept[i] = 0;
        outcome.replacement_mods.push_back(static_cast<int>(j));
        outcome.absorbed.push_back(std::move(discarded));
    }
    return outcome;
}

std::vector<FusedObject> transfer_labels(const MergeOutcome& merge, const PairingMatrix& pairing,
                                         const std::vector<Detection>& imot,
                                         const std::vector<Detection>& mod,
                                         const FusionParams& params,
                                         const StreamHistograms& imot_hists,
                                         const StreamHistograms& mod_hists) {
    std::vector<FusedObject> fused;

    for (std::size_t i = 0; i < imot.size(); ++i) {
        if (!merge.imot_kept[i]) continue;
        FusedObject obj;
        obj.bbox = imot[i].bbox;
        obj.imot_sources.push_back(static_cast<int>(i));
        if (imot_hists.available(i)) obj.histogram = imot_hists.get(i);

        std::vector<int> partners;
        for (std::size_t j = 0; j < mod.size(); ++j)
            if (pairing.at(i, j)) partners.push_back(static_cast<int>(j));

        if (partners.empty()) {
            obj.label = kDummyLabel;
            obj.confidence = params.dummy_confidence;
        } else if (partners.size() == 1) {
            obj.label = mod[partners[0]].label;
            obj.confidence = mod[partners[0]].confidence;
            obj.mod_sources = partners;
        } else {
            // Combined box/colour similarity decides the label; ties take
            // the earlier MOD detection.
            int best = partners[0];
            double best_score = -1.0;
            for (int j : partners) {
                const double s_o = iou(imot[i].bbox, mod[j].bbox);
                double s_c = 0.0;
                if (imot_hists.available(i) && mod_hists.available(j))
                    s_c = bhattacharyya_similarity(imot_hists.get(i), mod_hists.get(j));
                const double score = s_o * (1.0 - s_c);
                if (score > best_score) {
                    best_score = score;
                    best = j;
                }
            }
            obj.label = mod[best].label;
            obj.confidence = mod[best].confidence;
            obj.mod_sources.push_back(best);
        }
        fused.push_back(std::move(obj));
    }

    for (std::size_t k = 0; k < merge.replacement_mods.size(); ++k) {
        const int j = merge.replacement_mods[k];
        FusedObject obj;
        obj.bbox = mod[j].bbox;
        obj.label = mod[j].label;
        obj.confidence = mod[j].confidence;
        obj.mod_sources.push_back(j);
        obj.imot_sources = merge.absorbed[k];
        if (mod_hists.available(j)) obj.histogram = mod_hists.get(j);
        fused.push_back(std::move(obj));
    }
    return fused;
}

std::vector<FusedObject> fuse_frame(const std::vector<Detection>& imot,
                                    const std::vector<Detection>& mod,
                                    const FusionParams& params, const Image* frame) {
    params.validate();
    const std::vector<Detection> filtered = filter_small(imot, params.min_area);
    const PairingMatrix pairing = pair_streams(filtered, mod, params.t_o);
    const StreamHistograms imot_hists(filtered, frame, params.histogram_bins);
    const StreamHistograms mod_hists(mod, frame, params.histogram_bins);
    const MergeOutcome merge =
        merge_fragments(pairing, filtered, mod, params, imot_hists, mod_hists);
    return transfer_labels(merge, pairing, filtered, mod, params, imot_hists, mod_hists);
}

} // namespace fusemot
