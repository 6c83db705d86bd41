#include "fusemot/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fusemot/error.hpp"
#include "fusemot/synth.hpp"

namespace fusemot {

int verbosity() {
    static const int level = [] {
        const char* raw = std::getenv("FUSEMOT_VERBOSITY");
        if (raw == nullptr || *raw == '\0') return 1;
        char* end = nullptr;
        const long parsed = std::strtol(raw, &end, 10);
        if (end == raw || *end != '\0') return 1;
        return static_cast<int>(std::clamp(parsed, 0L, 9L));
    }();
    return level;
}

void log_line(int level, const std::string& message) {
    if (verbosity() >= level) std::cerr << message << "\n";
}

FrameDims infer_frame_dims(const std::map<int, std::vector<Detection>>& a,
                           const std::map<int, std::vector<Detection>>& b) {
    FrameDims dims;
    auto scan = [&](const std::map<int, std::vector<Detection>>& stream) {
        for (const auto& [frame, dets] : stream) {
            for (const Detection& det : dets) {
                dims.width = std::max(dims.width, det.bbox.x_max);
                dims.height = std::max(dims.height, det.bbox.y_max);
            }
        }
    };
    scan(a);
    scan(b);
    dims.width = std::ceil(dims.width);
    dims.height = std::ceil(dims.height);
    return dims;
}

FrameDims resolve_frame_dims(const RunConfig& config, const PatternFrameStore* frames,
                             const std::map<int, std::vector<Detection>>& a,
                             const std::map<int, std::vector<Detection>>& b) {
    if (frames != nullptr) return {static_cast<double>(frames->width()),
                                   static_cast<double>(frames->height())};
    if (config.frame_width > 0.0 && config.frame_height > 0.0)
        return {config.frame_width, config.frame_height};
    const FrameDims dims = infer_frame_dims(a, b);
    if (dims.width <= 0.0 || dims.height <= 0.0)
        throw DataError("cannot determine frame dimensions: no frames, no configured "
                        "dimensions, and no detections to infer from");
    log_line(1, "frame dimensions inferred from detections: " +
                    std::to_string(dims.width) + "x" + std::to_string(dims.height));
    return dims;
}

std::map<int, std::vector<FusedObject>> fuse_all(
    const std::map<int, std::vector<Detection>>& imot,
    const std::map<int, std::vector<Detection>>& mod, const FusionParams& params,
    const FrameSource* frames) {
    std::map<int, std::vector<FusedObject>> fused;
    const std::vector<Detection> empty;
    std::set<int> frame_ids;
    for (const auto& [frame, dets] : imot) frame_ids.insert(frame);
    for (const auto& [frame, dets] : mod) frame_ids.insert(frame);

    for (int frame : frame_ids) {
        const auto imot_it = imot.find(frame);
        const auto mod_it = mod.find(frame);
        const std::vector<Detection>& imot_dets = imot_it == imot.end() ? empty : imot_it->second;
        const std::vector<Detection>& mod_dets = mod_it == mod.end() ? empty : mod_it->second;

        Image img;
        const Image* img_ptr = nullptr;
        if (frames != nullptr) {
            img = frames->load(frame);
            img_ptr = &img;
        }
        std::vector<FusedObject> objs = fuse_frame(imot_dets, mod_dets, params, img_ptr);
        log_line(2, "frame " + std::to_string(frame) + ": " +
                        std::to_string(imot_dets.size()) + " foreground + " +
                        std::to_string(mod_dets.size()) + " detector -> " +
                        std::to_string(objs.size()) + " fused");
        fused.emplace(frame, std::move(objs));
    }
    return fused;
}

std::vector<Track> track_fused(const std::map<int, std::vector<FusedObject>>& fused,
                               const TrackerParams& params) {
    Tracker tracker(params);
    if (fused.empty()) return tracker.finalize();

    const int first = fused.begin()->first;
    const int last = fused.rbegin()->first;
    const std::vector<FusedObject> empty;
    for (int frame = first; frame <= last; ++frame) {
        const auto it = fused.find(frame);
        const FrameSummary summary =
            tracker.process_frame(frame, it == fused.end() ? empty : it->second);
        log_line(2, "frame " + std::to_string(frame) + ": matched " +
                        std::to_string(summary.matched) + ", births " +
                        std::to_string(summary.births) + ", terminated " +
                        std::to_string(summary.terminated) + ", active " +
                        std::to_string(summary.active));
    }
    return tracker.finalize();
}

std::map<int, std::vector<Detection>> fused_to_detections(
    const std::map<int, std::vector<FusedObject>>& fused) {
    std::map<int, std::vector<Detection>> dets;
    for (const auto& [frame, objs] : fused) {
        std::vector<Detection>& out = dets[frame];
        for (const FusedObject& obj : objs) {
            Detection det;
            det.frame = frame;
            det.bbox = obj.bbox;
            det.source = SourceKind::Fused;
            det.label = obj.label;
            det.confidence = obj.confidence;
            det.histogram = obj.histogram;
            out.push_back(std::move(det));
        }
    }
    return dets;
}

std::map<int, std::vector<FusedObject>> detections_to_fused(
    const std::map<int, std::vector<Detection>>& dets) {
    std::map<int, std::vector<FusedObject>> fused;
    for (const auto& [frame, frame_dets] : dets) {
        std::vector<FusedObject>& out = fused[frame];
        for (const Detection& det : frame_dets) {
            FusedObject obj;
            obj.bbox = det.bbox;
            obj.label = det.label;
            obj.confidence = det.confidence;
            obj.histogram = det.histogram;
            out.push_back(std::move(obj));
        }
    }
    return fused;
}

namespace {

std::unique_ptr<PatternFrameStore> open_frames(const std::string& pattern, int first_frame) {
    if (pattern.empty()) return nullptr;
    return std::make_unique<PatternFrameStore>(pattern, first_frame);
}

int first_frame_of(const std::map<int, std::vector<Detection>>& a,
                   const std::map<int, std::vector<Detection>>& b, int fallback) {
    int first = fallback;
    bool found = false;
    if (!a.empty()) {
        first = a.begin()->first;
        found = true;
    }
    if (!b.empty()) first = found ? std::min(first, b.begin()->first) : b.begin()->first;
    return first;
}

} // namespace

void run_fuse(const RunConfig& config, const std::string& imot_path,
              const std::string& mod_path, const std::string& out_path,
              const std::string& frame_pattern, int first_frame) {
    const auto imot = read_detections(imot_path);
    const auto mod = read_detections(mod_path);
    const auto frames =
        open_frames(frame_pattern, first_frame >= 0 ? first_frame
                                                    : first_frame_of(imot, mod, 0));
    const auto fused = fuse_all(imot, mod, config.fusion_params(), frames.get());

    std::size_t in_count = 0, out_count = 0;
    for (const auto& [frame, dets] : imot) in_count += dets.size();
    for (const auto& [frame, objs] : fused) out_count += objs.size();
    log_line(1, "fused " + std::to_string(in_count) + " foreground boxes into " +
                    std::to_string(out_count) + " tracker inputs across " +
                    std::to_string(fused.size()) + " frames");

    write_detections(fused_to_detections(fused), out_path, true);
}

void run_track(const RunConfig& config, const std::string& imot_path,
               const std::string& mod_path, const std::string& fused_path,
               const std::string& out_path, const std::string& frame_pattern,
               int first_frame) {
    std::map<int, std::vector<FusedObject>> fused;
    std::unique_ptr<PatternFrameStore> frames;
    FrameDims dims;

    if (!fused_path.empty()) {
        const auto dets = read_detections(fused_path);
        frames = open_frames(frame_pattern,
                             first_frame >= 0 ? first_frame : first_frame_of(dets, {}, 0));
        dims = resolve_frame_dims(config, frames.get(), dets, {});
        fused = detections_to_fused(dets);
    } else {
        const auto imot = read_detections(imot_path);
        const auto mod = read_detections(mod_path);
        frames = open_frames(frame_pattern, first_frame >= 0
                                                ? first_frame
                                                : first_frame_of(imot, mod, 0));
        dims = resolve_frame_dims(config, frames.get(), imot, mod);
        fused = fuse_all(imot, mod, config.fusion_params(), frames.get());
    }

    const std::vector<Track> tracks =
        track_fused(fused, config.tracker_params(dims.width, dims.height));

    std::size_t steps = 0;
    for (const Track& track : tracks) steps += track.steps.size();
    log_line(1, "tracked " + std::to_string(tracks.size()) + " objects over " +
                    std::to_string(fused.size()) + " frames (" + std::to_string(steps) +
                    " steps)");

    write_tracks(to_records(tracks), out_path);
}

MotReport run_evaluate(const std::string& tracks_path, const std::string& gt_path,
                       double overlap, const std::string& json_out_path) {
    const auto records = read_tracks(tracks_path);
    const auto gt = read_ground_truth(gt_path);
    const MotReport report = evaluate(records, gt, overlap);
    if (!json_out_path.empty()) {
        std::ofstream out(json_out_path);
        if (!out) throw DataError("cannot write report file: " + json_out_path);
        out << format_report_json(report) << "\n";
    }
    return report;
}

void run_synth(const std::string& scenario_path, const std::string& out_dir,
               bool write_frames, bool embed_histograms, int histogram_bins) {
    const ScenarioSpec spec = ScenarioSpec::from_json_file(scenario_path);
    const SynthOutput output = generate(spec, embed_histograms, histogram_bins);

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create output directory: " + out_dir);

    const fs::path base(out_dir);
    write_ground_truth(output.ground_truth, (base / "gt.jsonl").string());
    write_detections(output.imot, (base / "imot.jsonl").string(), embed_histograms);
    write_detections(output.mod, (base / "mod.jsonl").string(), embed_histograms);

    if (write_frames) {
        const fs::path frame_dir = base / "frames";
        fs::create_directories(frame_dir, ec);
        if (ec) throw DataError("cannot create frame directory: " + frame_dir.string());
        for (int frame = 0; frame < spec.frames; ++frame) {
            char name[32];
            std::snprintf(name, sizeof(name), "%06d.png", frame);
            save_image(render_frame(spec, frame), (frame_dir / name).string());
        }
    }

    log_line(1, "generated " + std::to_string(spec.frames) + " frames, " +
                    std::to_string(output.ground_truth.size()) + " ground truth boxes");
}

namespace {

Rgb state_colour(StepState state) {
    switch (state) {
        case StepState::D: return {34, 139, 34};    // green: observed
        case StepState::GP: return {255, 215, 0};   // gold: trusted prediction
        case StepState::BP: return {220, 20, 60};   // crimson: held previous box
        case StepState::UP: return {255, 140, 0};   // orange: uncertain prediction
    }
    throw InternalError("unknown step state");
}

} // namespace

void run_overlay(const std::string& tracks_path, const std::string& frame_pattern,
                 int first_frame, int last_frame, const std::string& out_dir) {
    const std::vector<TrackRecord> records = read_tracks(tracks_path);

    std::map<int, std::vector<TrackRecord>> by_frame;
    for (const TrackRecord& rec : records) by_frame[rec.frame].push_back(rec);

    if (first_frame < 0) first_frame = by_frame.empty() ? 0 : by_frame.begin()->first;
    if (last_frame < 0) last_frame = by_frame.empty() ? first_frame : by_frame.rbegin()->first;
    if (last_frame < first_frame) throw DataError("overlay frame range is empty");

    const PatternFrameStore frames(frame_pattern, first_frame);

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create output directory: " + out_dir);

    for (int frame = first_frame; frame <= last_frame; ++frame) {
        Image img = frames.load(frame);
        const auto it = by_frame.find(frame);
        if (it != by_frame.end()) {
            for (const TrackRecord& rec : it->second) {
                const Rgb colour = state_colour(rec.state);
                draw_rect_outline(img, rec.bbox, colour, 2);
                const int tx = static_cast<int>(std::lround(rec.bbox.x_min));
                const int ty = std::max(0, static_cast<int>(std::lround(rec.bbox.y_min)) - 12);
                draw_number(img, tx, ty, rec.track_id, colour, 2);
            }
        }
        char name[32];
        std::snprintf(name, sizeof(name), "%06d.png", frame);
        save_image(img, (fs::path(out_dir) / name).string());
    }
    log_line(1, "wrote " + std::to_string(last_frame - first_frame + 1) + " overlay frames");
}

std::vector<AblationRow> run_ablate(const RunConfig& config, const std::string& imot_path,
                                    const std::string& mod_path, const std::string& gt_path,
                                    const std::string& frame_pattern, int first_frame,
                                    const std::vector<std::string>& selections) {
    const auto imot = read_detections(imot_path);
    const auto mod = read_detections(mod_path);
    const auto gt = read_ground_truth(gt_path);
    const auto frames = open_frames(
        frame_pattern, first_frame >= 0 ? first_frame : first_frame_of(imot, mod, 0));
    const FrameDims dims = resolve_frame_dims(config, frames.get(), imot, mod);
    const auto fused = fuse_all(imot, mod, config.fusion_params(), frames.get());

    std::vector<AblationRow> rows;
    for (const std::string& selection : selections) {
        RunConfig variant = config;
        if (selection == "distance") {
            variant.alpha = 1.0;
            variant.beta = 0.0;
            variant.gamma = 0.0;
        } else if (selection == "colour") {
            variant.alpha = 0.0;
            variant.beta = 1.0;
            variant.gamma = 0.0;
        } else if (selection == "label") {
            variant.alpha = 0.0;
            variant.beta = 0.0;
            variant.gamma = 1.0;
        } else if (selection != "all") {
            throw DataError("unknown ablation selection: \"" + selection +
                            "\" (expected distance, colour, label, or all)");
        }

        const std::vector<Track> tracks =
            track_fused(fused, variant.tracker_params(dims.width, dims.height));
        rows.push_back({selection, evaluate(to_records(tracks), gt, config.overlap)});
        log_line(1, "ablation \"" + selection + "\": MOTA " +
                        std::to_string(rows.back().report.mota));
    }
    return rows;
}

namespace {

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4f", value);
    return buffer;
}

} // namespace

std::string format_report_table(const MotReport& report) {
    std::ostringstream out;
    out << "GT              " << report.gt_instances << "\n"
        << "Correct Tracks  " << report.correct << "\n"
        << "Misses          " << report.misses << "\n"
        << "FP              " << report.false_positives << "\n"
        << "Mismatches      " << report.mismatches << "\n"
        << "MOTP            " << format_double(report.motp) << "\n"
        << "MOTA            " << format_double(report.mota) << "\n";
    return out.str();
}

std::string format_report_json(const MotReport& report) {
    nlohmann::json obj;
    obj["gt"] = report.gt_instances;
    obj["correct"] = report.correct;
    obj["misses"] = report.misses;
    obj["false_positives"] = report.false_positives;
    obj["mismatches"] = report.mismatches;
    obj["motp"] = report.motp;
    obj["mota"] = report.mota;
    return obj.dump();
}

std::string format_ablation_table(const std::vector<AblationRow>& rows) {
    std::ostringstream out;
    out << "Cost     | GT    | Correct Tracks | Misses | FP    | Mismatches | MOTP   | MOTA\n";
    out << "---------+-------+----------------+--------+-------+------------+--------+-------\n";
    for (const AblationRow& row : rows) {
        char line[160];
        std::snprintf(line, sizeof(line),
                      "%-8s | %5ld | %14ld | %6ld | %5ld | %10ld | %6.4f | %.4f\n",
                      row.selection.c_str(), row.report.gt_instances, row.report.correct,
                      row.report.misses, row.report.false_positives, row.report.mismatches,
                      row.report.motp, row.report.mota);
        out << line;
    }
    return out.str();
}

} // namespace fusemot
