#pragma once

#include <optional>
#include <string>

#include "fusemot/geometry.hpp"
#include "fusemot/histogram.hpp"

namespace fusemot {

// How a track's box for a frame was obtained:
//   D  - taken from an associated detection
//   GP - motion-model prediction that still overlapped the previous box
//   BP - previous box carried forward after the prediction drifted away
//   UP - prediction resumed after a BP step, trusted unconditionally
enum class StepState { D, GP, BP, UP };

std::string to_string(StepState state);
StepState step_state_from_string(const std::string& text);

struct TrackStep {
    int frame = 0;
    BoundingBox bbox;
    StepState state = StepState::D;
    std::string label;
    double confidence = 0.0;
    std::optional<ColourHistogram> histogram;
};

// One line of the track output file.
struct TrackRecord {
    int track_id = 0;
    int frame = 0;
    BoundingBox bbox;
    StepState state = StepState::D;
};

} // namespace fusemot
