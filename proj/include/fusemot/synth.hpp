#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fusemot/detection.hpp"
#include "fusemot/geometry.hpp"
#include "fusemot/image.hpp"

namespace fusemot {

struct Waypoint {
    int frame = 0;
    double cx = 0.0;
    double cy = 0.0;
};

struct FrameRange {
    int first = 0;
    int last = 0; // inclusive
};

// One scripted object: a fixed-size box whose center moves piecewise
// linearly through the waypoints. Occlusion ranges suppress detections in
// both streams (and rendering) while ground truth continues.
struct ObjectScript {
    std::string label = "object";
    Rgb colour = {128, 128, 128};
    double width = 0.0;
    double height = 0.0;
    int entry = 0;
    int exit = 0;
    std::vector<Waypoint> waypoints;
    std::vector<FrameRange> occlusions;
};

struct ImotNoise {
    double fragmentation_prob = 0.0;
    int fragment_count = 2;
    double jitter_sigma = 0.0; // px, per box corner
    double miss_prob = 0.0;
    double clutter_rate = 0.0; // expected spurious boxes per frame
};

struct ModNoise {
    double dilation = 1.0; // box scale factor about the center
    double miss_prob = 0.0;
    double confidence_mean = 0.9;
    double confidence_sigma = 0.0;
    double merge_adjacent_prob = 0.0;
};

struct ScenarioSpec {
    int frames = 1;
    int width = 0;
    int height = 0;
    std::uint64_t seed = 0;
    Rgb background = {255, 255, 255};
    bool distinct_colours = false;
    std::vector<ObjectScript> objects;
    ImotNoise imot;
    ModNoise mod;

    void validate() const;
    static ScenarioSpec from_json_text(const std::string& text, const std::string& origin);
    static ScenarioSpec from_json_file(const std::string& path);
};

struct SynthOutput {
    std::vector<GroundTruthEntry> ground_truth;
    std::map<int, std::vector<Detection>> imot;
    std::map<int, std::vector<Detection>> mod;
};

// Ground-truth box of an object at a frame (position only; no liveness check).
BoundingBox scripted_box(const ObjectScript& obj, int frame);

// Scripted colour, or maximally separated grey levels when the scenario asks
// for distinct colours.
Rgb object_colour(const ScenarioSpec& spec, std::size_t object_index);

// Solid-colour rectangles over the background; occluded objects are hidden.
Image render_frame(const ScenarioSpec& spec, int frame);

// Deterministic for a fixed spec: the two detection streams draw from
// independent generators, so changing one stream's noise never perturbs the
// other. Emitted detections carry histograms computed from the rendered
// frames when `with_histograms` is set.
SynthOutput generate(const ScenarioSpec& spec, bool with_histograms = true,
                     int histogram_bins = 256);

} // namespace fusemot
