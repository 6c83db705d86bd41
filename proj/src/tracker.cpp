#include "fusemot/tracker.hpp"

#include <algorithm>
#include <cmath>

#include "fusemot/error.hpp"

namespace fusemot {

void TrackerParams::validate() const {
    association.validate();
    kalman.validate();
    if (!std::isfinite(t_p) || t_p < 0.0 || t_p > 1.0)
        throw DataError("prediction overlap gate must be in [0, 1]");
    if (t_n < 1) throw DataError("miss tolerance must be at least 1 frame");
    if (!std::isfinite(max_bad_fraction) || max_bad_fraction < 0.0 || max_bad_fraction > 1.0)
        throw DataError("predicted-step fraction limit must be in [0, 1]");
    if (min_track_length < 1) throw DataError("minimum track length must be at least 1");
}

PredictionResolution resolve_prediction(StepState previous, bool overlap_ok) {
    if (previous == StepState::D || previous == StepState::GP) {
        if (overlap_ok) return {true, StepState::GP};
        return {false, StepState::BP};
    }
    return {true, StepState::UP};
}

TrackStep resolve_unmatched(const Track& track, const BoundingBox& prediction, double t_p) {
    const TrackStep& prev = track.steps.back();
    const bool overlap_ok = iou(prediction, prev.bbox) >= t_p;
    const PredictionResolution res = resolve_prediction(prev.state, overlap_ok);

    TrackStep step;
    step.frame = prev.frame + 1;
    step.bbox = res.use_prediction ? prediction : prev.bbox;
    step.state = res.state;
    step.label = prev.label;
    step.confidence = prev.confidence;
    step.histogram = prev.histogram;
    return step;
}

Track init_track(const FusedObject& obj, int frame, int id, const KalmanParams& params) {
    TrackStep step;
    step.frame = frame;
    step.bbox = obj.bbox;
    step.state = StepState::D;
    step.label = obj.label;
    step.confidence = obj.confidence;
    step.histogram = obj.histogram;
    return Track{id, {std::move(step)}, BoxKalmanFilter(obj.bbox, params), 0};
}

BoundingBox predict(const Track& track, double frame_w, double frame_h) {
    return clip_to_frame(track.filter.predicted_box(), frame_w, frame_h);
}

namespace {

// Appearance for cost computation comes from the last observed step.
const TrackStep& appearance_step(const Track& track) {
    for (auto it = track.steps.rbegin(); it != track.steps.rend(); ++it)
        if (it->state == StepState::D) return *it;
    return track.steps.back();
}

} // namespace

Tracker::Tracker(const TrackerParams& params) : params_(params) {
    params_.validate();
}

void Tracker::terminate_track(std::size_t index) {
    Track& track = active_[index];
    track.steps.resize(track.steps.size() - static_cast<std::size_t>(params_.t_n));
    track.consecutive_misses = 0;
    finished_.push_back(std::move(track));
    active_.erase(active_.begin() + static_cast<std::ptrdiff_t>(index));
}

FrameSummary Tracker::process_frame(int frame, const std::vector<FusedObject>& dets) {
    if (frame < 0) throw InternalError("frame index must be non-negative");
    if (started_ && frame != last_frame_ + 1)
        throw InternalError("frames must be processed consecutively (got " +
                            std::to_string(frame) + " after " + std::to_string(last_frame_) +
                            ")");
    started_ = true;
    last_frame_ = frame;

    FrameSummary summary;
    summary.frame = frame;

    std::vector<BoundingBox> predictions;
    predictions.reserve(active_.size());
    std::vector<TrackView> views;
    views.reserve(active_.size());
    for (const Track& track : active_) {
        predictions.push_back(
            predict(track, params_.association.frame_width, params_.association.frame_height));
        const TrackStep& app = appearance_step(track);
        TrackView view;
        view.predicted_box = predictions.back();
        view.label = app.label;
        view.confidence = app.confidence;
        view.histogram = app.histogram ? &*app.histogram : nullptr;
        views.push_back(view);
    }

    AssignmentResult assignment;
    if (!active_.empty() && !dets.empty()) {
        const CostMatrix matrix = build_cost_matrix(views, dets, params_.association);
        assignment = solve(matrix, params_.association.gate);
    } else {
        for (std::size_t i = 0; i < active_.size(); ++i)
            assignment.unmatched_tracks.push_back(static_cast<int>(i));
        for (std::size_t j = 0; j < dets.size(); ++j)
            assignment.unmatched_detections.push_back(static_cast<int>(j));
    }

    for (Track& track : active_) track.filter.advance();

    for (const auto& [ti, dj] : assignment.matches) {
        Track& track = active_[static_cast<std::size_t>(ti)];
        const FusedObject& det = dets[static_cast<std::size_t>(dj)];
        track.filter.update(det.bbox);
        TrackStep step;
        step.frame = frame;
        step.bbox = det.bbox;
        step.state = StepState::D;
        step.label = det.label;
        step.confidence = det.confidence;
        step.histogram = det.histogram;
        track.steps.push_back(std::move(step));
        track.consecutive_misses = 0;
        ++summary.matched;
    }

    std::vector<std::size_t> to_terminate;
    for (int ti : assignment.unmatched_tracks) {
        Track& track = active_[static_cast<std::size_t>(ti)];
        track.steps.push_back(
            resolve_unmatched(track, predictions[static_cast<std::size_t>(ti)], params_.t_p));
        ++track.consecutive_misses;
        if (track.consecutive_misses == params_.t_n)
            to_terminate.push_back(static_cast<std::size_t>(ti));
    }
    // Erase from the back so stored indices stay valid.
    std::sort(to_terminate.rbegin(), to_terminate.rend());
    for (std::size_t index : to_terminate) {
        terminate_track(index);
        ++summary.terminated;
    }

    for (int dj : assignment.unmatched_detections) {
        active_.push_back(
            init_track(dets[static_cast<std::size_t>(dj)], frame, next_id_++, params_.kalman));
        ++summary.births;
    }

    summary.active = static_cast<int>(active_.size());
    return summary;
}

std::vector<Track> Tracker::finalize() {
    for (Track& track : active_) {
        while (!track.steps.empty() && track.steps.back().state != StepState::D)
            track.steps.pop_back();
        if (!track.steps.empty()) finished_.push_back(std::move(track));
    }
    active_.clear();

    std::vector<Track> kept;
    for (Track& track : finished_) {
        const std::size_t len = track.steps.size();
        if (len < static_cast<std::size_t>(params_.min_track_length)) continue;
        std::size_t bad = 0;
        for (const TrackStep& step : track.steps)
            if (step.state == StepState::BP || step.state == StepState::UP) ++bad;
        if (static_cast<double>(bad) / static_cast<double>(len) > params_.max_bad_fraction)
            continue;
        kept.push_back(std::move(track));
    }
    finished_.clear();

    std::sort(kept.begin(), kept.end(),
              [](const Track& a, const Track& b) { return a.id < b.id; });
    return kept;
}

std::vector<TrackRecord> to_records(const std::vector<Track>& tracks) {
    std::vector<TrackRecord> records;
    for (const Track& track : tracks)
        for (const TrackStep& step : track.steps)
            records.push_back({track.id, step.frame, step.bbox, step.state});
    std::sort(records.begin(), records.end(), [](const TrackRecord& a, const TrackRecord& b) {
        if (a.track_id != b.track_id) return a.track_id < b.track_id;
        return a.frame < b.frame;
    });
    return records;
}

} // namespace fusemot
