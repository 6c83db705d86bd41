#pragma once

#include <map>
#include <string>
#include <vector>

#include "fusemot/detection.hpp"
#include "fusemot/track.hpp"

namespace fusemot {

// JSON Lines detection files, one object per line:
//   {"frame": 3, "bbox": [x_min, y_min, x_max, y_max],
//    "source": "imot"|"mod"|"fused", "label": "car", "confidence": 0.9}
// plus an optional "histogram" array of non-negative bin counts.
std::map<int, std::vector<Detection>> read_detections(const std::string& path);
void write_detections(const std::map<int, std::vector<Detection>>& by_frame,
                      const std::string& path, bool with_histograms = false);

// Ground truth lines: {"frame": 3, "id": 7, "bbox": [...]}.
std::vector<GroundTruthEntry> read_ground_truth(const std::string& path);
void write_ground_truth(const std::vector<GroundTruthEntry>& entries, const std::string& path);

// Track output lines: {"track": 2, "frame": 3, "bbox": [...], "state": "D"}.
std::vector<TrackRecord> read_tracks(const std::string& path);
void write_tracks(const std::vector<TrackRecord>& records, const std::string& path);

} // namespace fusemot
