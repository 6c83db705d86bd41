#pragma once

#include <vector>

#include "fusemot/association.hpp"
#include "fusemot/fusion.hpp"
#include "fusemot/kalman.hpp"
#include "fusemot/track.hpp"

namespace fusemot {

struct TrackerParams {
    AssociationParams association;
    KalmanParams kalman;
    double t_p = 0.01;            // prediction-vs-previous-box overlap gate
    int t_n = 10;                 // consecutive misses before termination
    double max_bad_fraction = 0.5;
    int min_track_length = 1;

    void validate() const;
};

struct Track {
    int id = 0;
    std::vector<TrackStep> steps;
    BoxKalmanFilter filter;
    int consecutive_misses = 0;
};

// Which box an unmatched track keeps for this frame, and its quality state.
struct PredictionResolution {
    bool use_prediction = false;
    StepState state = StepState::UP;
};

// Branch table for unmatched tracks:
//   previous D or GP, prediction still overlaps -> prediction, GP
//   previous D or GP, prediction drifted away   -> previous box, BP
//   previous BP or UP                           -> prediction, UP
PredictionResolution resolve_prediction(StepState previous, bool overlap_ok);

TrackStep resolve_unmatched(const Track& track, const BoundingBox& prediction, double t_p);

Track init_track(const FusedObject& obj, int frame, int id, const KalmanParams& params);

// One-step-ahead box clipped to the frame.
BoundingBox predict(const Track& track, double frame_w, double frame_h);

struct FrameSummary {
    int frame = 0;
    int matched = 0;
    int births = 0;
    int terminated = 0;
    int active = 0;
};

class Tracker {
public:
    explicit Tracker(const TrackerParams& params);

    // Frames must be processed consecutively.
    FrameSummary process_frame(int frame, const std::vector<FusedObject>& dets);

    // Trims trailing predicted runs on open tracks, drops tracks dominated by
    // BP/UP steps or shorter than the configured minimum, and returns the
    // survivors ordered by id. The tracker is spent afterwards.
    std::vector<Track> finalize();

    const std::vector<Track>& active() const { return active_; }

private:
    void terminate_track(std::size_t index);

    TrackerParams params_;
    std::vector<Track> active_;
    std::vector<Track> finished_;
    int next_id_ = 1;
    int last_frame_ = -1;
    bool started_ = false;
};

std::vector<TrackRecord> to_records(const std::vector<Track>& tracks);

} // namespace fusemot
