#pragma once

#include <map>
#include <string>
#include <vector>

#include "fusemot/config.hpp"
#include "fusemot/detection.hpp"
#include "fusemot/detection_io.hpp"
#include "fusemot/evaluation.hpp"
#include "fusemot/fusion.hpp"
#include "fusemot/tracker.hpp"

namespace fusemot {

// FUSEMOT_VERBOSITY: 0 silent, 1 summaries (default), 2 per-frame progress.
int verbosity();
void log_line(int level, const std::string& message);

struct FrameDims {
    double width = 0.0;
    double height = 0.0;
};

// Tightest integer bounds covering every detection box.
FrameDims infer_frame_dims(const std::map<int, std::vector<Detection>>& a,
                           const std::map<int, std::vector<Detection>>& b);

// Priority: frame images, then explicit config values, then inference.
FrameDims resolve_frame_dims(const RunConfig& config, const PatternFrameStore* frames,
                             const std::map<int, std::vector<Detection>>& a,
                             const std::map<int, std::vector<Detection>>& b);

std::map<int, std::vector<FusedObject>> fuse_all(
    const std::map<int, std::vector<Detection>>& imot,
    const std::map<int, std::vector<Detection>>& mod, const FusionParams& params,
    const FrameSource* frames);

// Runs the tracker over every frame from the first to the last key,
// treating absent frames as empty detection sets.
std::vector<Track> track_fused(const std::map<int, std::vector<FusedObject>>& fused,
                               const TrackerParams& params);

std::map<int, std::vector<Detection>> fused_to_detections(
    const std::map<int, std::vector<FusedObject>>& fused);
std::map<int, std::vector<FusedObject>> detections_to_fused(
    const std::map<int, std::vector<Detection>>& dets);

void run_fuse(const RunConfig& config, const std::string& imot_path,
              const std::string& mod_path, const std::string& out_path,
              const std::string& frame_pattern, int first_frame);

// Either both detection streams or a pre-fused file.
void run_track(const RunConfig& config, const std::string& imot_path,
               const std::string& mod_path, const std::string& fused_path,
               const std::string& out_path, const std::string& frame_pattern,
               int first_frame);

MotReport run_evaluate(const std::string& tracks_path, const std::string& gt_path,
                       double overlap, const std::string& json_out_path);

void run_synth(const std::string& scenario_path, const std::string& out_dir,
               bool write_frames, bool embed_histograms, int histogram_bins);

void run_overlay(const std::string& tracks_path, const std::string& frame_pattern,
                 int first_frame, int last_frame, const std::string& out_dir);

struct AblationRow {
    std::string selection;
    MotReport report;
};

// Reruns the pipeline once per cost selection (distance, colour, label: that
// single weight set to 1; all: configured weights) and scores each run.
std::vector<AblationRow> run_ablate(const RunConfig& config, const std::string& imot_path,
                                    const std::string& mod_path, const std::string& gt_path,
                                    const std::string& frame_pattern, int first_frame,
                                    const std::vector<std::string>& selections);

std::string format_report_table(const MotReport& report);
std::string format_report_json(const MotReport& report);
std::string format_ablation_table(const std::vector<AblationRow>& rows);

} // namespace fusemot
