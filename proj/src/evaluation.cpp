#include "fusemot/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "fusemot/error.hpp"
#include "fusemot/geometry.hpp"
#include "fusemot/hungarian.hpp"

namespace fusemot {

namespace {

struct FrameBox {
    int id = 0;
    BoundingBox bbox;
};

} // namespace

MotReport evaluate(const std::vector<TrackRecord>& records,
                   const std::vector<GroundTruthEntry>& gt, double overlap_threshold) {
    if (gt.empty()) throw DataError("ground truth is empty; the score is undefined");
    if (!std::isfinite(overlap_threshold) || overlap_threshold <= 0.0 ||
        overlap_threshold > 1.0)
        throw DataError("overlap threshold must be in (0, 1]");

    std::map<int, std::vector<FrameBox>> gt_by_frame;
    {
        std::set<std::pair<int, int>> seen;
        for (const GroundTruthEntry& entry : gt) {
            if (!seen.insert({entry.frame, entry.id}).second)
                throw DataError("duplicate ground truth entry for frame " +
                                std::to_string(entry.frame) + ", id " +
                                std::to_string(entry.id));
            gt_by_frame[entry.frame].push_back({entry.id, entry.bbox});
        }
    }
    std::map<int, std::vector<FrameBox>> hyp_by_frame;
    {
        std::set<std::pair<int, int>> seen;
        for (const TrackRecord& rec : records) {
            if (!seen.insert({rec.frame, rec.track_id}).second)
                throw DataError("track " + std::to_string(rec.track_id) +
                                " appears twice in frame " + std::to_string(rec.frame));
            hyp_by_frame[rec.frame].push_back({rec.track_id, rec.bbox});
        }
    }

    std::set<int> frames;
    for (const auto& [frame, boxes] : gt_by_frame) frames.insert(frame);
    for (const auto& [frame, boxes] : hyp_by_frame) frames.insert(frame);

    MotReport report;
    report.gt_instances = static_cast<long>(gt.size());
    double overlap_sum = 0.0;

    std::map<int, int> correspondence; // gt id -> track id, carried frame to frame
    std::map<int, int> last_assigned;  // gt id -> last matched track id, survives gaps

    constexpr double kInvalid = 1e6;

    for (int frame : frames) {
        const auto gt_it = gt_by_frame.find(frame);
        const auto hyp_it = hyp_by_frame.find(frame);
        const std::vector<FrameBox> empty;
        const std::vector<FrameBox>& gts = gt_it == gt_by_frame.end() ? empty : gt_it->second;
        const std::vector<FrameBox>& hyps =
            hyp_it == hyp_by_frame.end() ? empty : hyp_it->second;

        std::vector<char> gt_used(gts.size(), 0);
        std::vector<char> hyp_used(hyps.size(), 0);
        std::map<int, int> new_correspondence;

        auto commit = [&](std::size_t gi, std::size_t hi, double overlap) {
            gt_used[gi] = 1;
            hyp_used[hi] = 1;
            new_correspondence[gts[gi].id] = hyps[hi].id;
            ++report.correct;
            overlap_sum += overlap;
            const auto last = last_assigned.find(gts[gi].id);
            if (last != last_assigned.end() && last->second != hyps[hi].id)
                ++report.mismatches;
            last_assigned[gts[gi].id] = hyps[hi].id;
        };

        // Keep surviving pairings from the previous frame first.
        for (std::size_t gi = 0; gi < gts.size(); ++gi) {
            const auto held = correspondence.find(gts[gi].id);
            if (held == correspondence.end()) continue;
            for (std::size_t hi = 0; hi < hyps.size(); ++hi) {
                if (hyp_used[hi] || hyps[hi].id != held->second) continue;
                const double overlap = iou(gts[gi].bbox, hyps[hi].bbox);
                if (overlap >= overlap_threshold) commit(gi, hi, overlap);
                break;
            }
        }

        // Optimal matching over whatever remains.
        std::vector<std::size_t> free_gt, free_hyp;
        for (std::size_t gi = 0; gi < gts.size(); ++gi)
            if (!gt_used[gi]) free_gt.push_back(gi);
        for (std::size_t hi = 0; hi < hyps.size(); ++hi)
            if (!hyp_used[hi]) free_hyp.push_back(hi);

        if (!free_gt.empty() && !free_hyp.empty()) {
            Matrix cost(free_gt.size(), free_hyp.size());
            for (std::size_t r = 0; r < free_gt.size(); ++r) {
                for (std::size_t c = 0; c < free_hyp.size(); ++c) {
                    const double overlap = iou(gts[free_gt[r]].bbox, hyps[free_hyp[c]].bbox);
                    cost.at(r, c) = overlap >= overlap_threshold ? 1.0 - overlap : kInvalid;
                }
            }
            const std::vector<int> row_to_col = solve_assignment(cost, 1.0);
            for (std::size_t r = 0; r < free_gt.size(); ++r) {
                const int c = row_to_col[r];
                if (c < 0 || cost.at(r, static_cast<std::size_t>(c)) >= kInvalid) continue;
                commit(free_gt[r], free_hyp[static_cast<std::size_t>(c)],
                       1.0 - cost.at(r, static_cast<std::size_t>(c)));
            }
        }

        for (std::size_t gi = 0; gi < gts.size(); ++gi)
            if (!gt_used[gi]) ++report.misses;
        for (std::size_t hi = 0; hi < hyps.size(); ++hi)
            if (!hyp_used[hi]) ++report.false_positives;

        correspondence = std::move(new_correspondence);
    }

    report.motp = report.correct > 0 ? overlap_sum / static_cast<double>(report.correct) : 0.0;
    report.mota = 1.0 - static_cast<double>(report.misses + report.false_positives +
                                            report.mismatches) /
                            static_cast<double>(report.gt_instances);
    return report;
}

} // namespace fusemot
