#include "fusemot/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fusemot/error.hpp"
#include "fusemot/histogram.hpp"

namespace fusemot {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

// Explicit sampling transforms so outputs are identical across platforms
// (std::mt19937_64 is specified bit-exactly; the distributions are not).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; } // [0, 1)
    double uniform_pos() { return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53; }

    // Box-Muller, cosine branch; always consumes exactly two draws.
    double normal(double mean, double sigma) {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    int poisson(double lambda) {
        const double limit = std::exp(-lambda);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }

private:
    std::mt19937_64 gen_;
};

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

bool occluded_at(const ObjectScript& obj, int frame) {
    for (const FrameRange& range : obj.occlusions)
        if (frame >= range.first && frame <= range.last) return true;
    return false;
}

bool alive_at(const ObjectScript& obj, int frame) {
    return frame >= obj.entry && frame <= obj.exit;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& origin, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return key == k; }) == allowed.end())
            throw DataError(origin + ": unknown key \"" + key + "\" in " + where);
    }
}

double get_number(const json& obj, const char* key, double fallback, const std::string& origin,
                  const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw DataError(origin + ": \"" + std::string(key) + "\" in " + where +
                        " must be a number");
    return obj[key].get<double>();
}

Rgb get_colour(const json& obj, const char* key, Rgb fallback, const std::string& origin,
               const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const json& arr = obj[key];
    if (!arr.is_array() || arr.size() != 3)
        throw DataError(origin + ": \"" + std::string(key) + "\" in " + where +
                        " must be an array of three integers in [0, 255]");
    Rgb colour;
    for (int i = 0; i < 3; ++i) {
        if (!arr[i].is_number_integer() || arr[i].get<int>() < 0 || arr[i].get<int>() > 255)
            throw DataError(origin + ": \"" + std::string(key) + "\" in " + where +
                            " must be an array of three integers in [0, 255]");
        colour[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(arr[i].get<int>());
    }
    return colour;
}

} // namespace

void ScenarioSpec::validate() const {
    if (frames < 1) throw DataError("scenario needs at least one frame");
    if (width < 1 || height < 1) throw DataError("scenario frame dimensions must be positive");

    if (!in_unit(imot.fragmentation_prob) || !in_unit(imot.miss_prob))
        throw DataError("foreground-stream probabilities must be in [0, 1]");
    if (imot.fragment_count < 2) throw DataError("fragment count must be at least 2");
    if (!std::isfinite(imot.jitter_sigma) || imot.jitter_sigma < 0.0)
        throw DataError("jitter sigma must be non-negative");
    if (!std::isfinite(imot.clutter_rate) || imot.clutter_rate < 0.0)
        throw DataError("clutter rate must be non-negative");

    if (!std::isfinite(mod.dilation) || mod.dilation <= 0.0)
        throw DataError("detector box dilation must be positive");
    if (!in_unit(mod.miss_prob) || !in_unit(mod.merge_adjacent_prob))
        throw DataError("detector-stream probabilities must be in [0, 1]");
    if (!in_unit(mod.confidence_mean))
        throw DataError("detector confidence mean must be in [0, 1]");
    if (!std::isfinite(mod.confidence_sigma) || mod.confidence_sigma < 0.0)
        throw DataError("detector confidence sigma must be non-negative");

    for (std::size_t k = 0; k < objects.size(); ++k) {
        const ObjectScript& obj = objects[k];
        const std::string where = "object " + std::to_string(k);
        if (obj.label.empty() || obj.label == kDummyLabel)
            throw DataError(where + ": label must be a non-empty class name");
        if (obj.width <= 0.0 || obj.height <= 0.0)
            throw DataError(where + ": box dimensions must be positive");
        if (obj.entry < 0 || obj.entry > obj.exit || obj.exit >= frames)
            throw DataError(where + ": entry/exit must satisfy 0 <= entry <= exit < frames");
        if (obj.waypoints.empty()) throw DataError(where + ": needs at least one waypoint");
        for (std::size_t w = 0; w < obj.waypoints.size(); ++w) {
            const Waypoint& wp = obj.waypoints[w];
            if (w > 0 && wp.frame <= obj.waypoints[w - 1].frame)
                throw DataError(where + ": waypoint frames must be strictly increasing");
            if (wp.cx - obj.width / 2 < 0.0 || wp.cx + obj.width / 2 > width ||
                wp.cy - obj.height / 2 < 0.0 || wp.cy + obj.height / 2 > height)
                throw DataError(where + ": waypoint " + std::to_string(w) +
                                " places the box outside the frame");
        }
        for (const FrameRange& range : obj.occlusions)
            if (range.first < 0 || range.first > range.last || range.last >= frames)
                throw DataError(where + ": occlusion ranges must satisfy 0 <= first <= last"
                                " < frames");
    }
}

ScenarioSpec ScenarioSpec::from_json_text(const std::string& text, const std::string& origin) {
    const json root = json::parse(text, nullptr, false);
    if (root.is_discarded() || !root.is_object())
        throw DataError(origin + ": scenario file must be a JSON object");
    check_keys(root,
               {"frames", "width", "height", "seed", "background", "distinct_colours",
                "objects", "imot", "mod"},
               origin, "scenario");

    ScenarioSpec spec;
    spec.frames = static_cast<int>(get_number(root, "frames", 1, origin, "scenario"));
    spec.width = static_cast<int>(get_number(root, "width", 0, origin, "scenario"));
    spec.height = static_cast<int>(get_number(root, "height", 0, origin, "scenario"));
    if (root.contains("seed")) {
        if (!root["seed"].is_number_integer() || root["seed"].get<long long>() < 0)
            throw DataError(origin + ": \"seed\" must be a non-negative integer");
        spec.seed = root["seed"].get<std::uint64_t>();
    }
    spec.background = get_colour(root, "background", {255, 255, 255}, origin, "scenario");
    if (root.contains("distinct_colours")) {
        if (!root["distinct_colours"].is_boolean())
            throw DataError(origin + ": \"distinct_colours\" must be a boolean");
        spec.distinct_colours = root["distinct_colours"].get<bool>();
    }

    if (root.contains("imot")) {
        const json& sub = root["imot"];
        if (!sub.is_object()) throw DataError(origin + ": \"imot\" must be an object");
        check_keys(sub,
                   {"fragmentation_prob", "fragment_count", "jitter_sigma", "miss_prob",
                    "clutter_rate"},
                   origin, "imot");
        spec.imot.fragmentation_prob =
            get_number(sub, "fragmentation_prob", 0.0, origin, "imot");
        spec.imot.fragment_count =
            static_cast<int>(get_number(sub, "fragment_count", 2, origin, "imot"));
        spec.imot.jitter_sigma = get_number(sub, "jitter_sigma", 0.0, origin, "imot");
        spec.imot.miss_prob = get_number(sub, "miss_prob", 0.0, origin, "imot");
        spec.imot.clutter_rate = get_number(sub, "clutter_rate", 0.0, origin, "imot");
    }
    if (root.contains("mod")) {
        const json& sub = root["mod"];
        if (!sub.is_object()) throw DataError(origin + ": \"mod\" must be an object");
        check_keys(sub,
                   {"dilation", "miss_prob", "confidence_mean", "confidence_sigma",
                    "merge_adjacent_prob"},
                   origin, "mod");
        spec.mod.dilation = get_number(sub, "dilation", 1.0, origin, "mod");
        spec.mod.miss_prob = get_number(sub, "miss_prob", 0.0, origin, "mod");
        spec.mod.confidence_mean = get_number(sub, "confidence_mean", 0.9, origin, "mod");
        spec.mod.confidence_sigma = get_number(sub, "confidence_sigma", 0.0, origin, "mod");
        spec.mod.merge_adjacent_prob =
            get_number(sub, "merge_adjacent_prob", 0.0, origin, "mod");
    }

    if (root.contains("objects")) {
        if (!root["objects"].is_array())
            throw DataError(origin + ": \"objects\" must be an array");
        for (const json& entry : root["objects"]) {
            const std::string where = "object " + std::to_string(spec.objects.size());
            if (!entry.is_object()) throw DataError(origin + ": " + where + " must be an object");
            check_keys(entry,
                       {"label", "colour", "width", "height", "entry", "exit", "waypoints",
                        "occlusions"},
                       origin, where);
            ObjectScript obj;
            if (entry.contains("label")) {
                if (!entry["label"].is_string())
                    throw DataError(origin + ": " + where + ": \"label\" must be a string");
                obj.label = entry["label"].get<std::string>();
            }
            obj.colour = get_colour(entry, "colour", {128, 128, 128}, origin, where);
            obj.width = get_number(entry, "width", 0.0, origin, where);
            obj.height = get_number(entry, "height", 0.0, origin, where);
            obj.entry = static_cast<int>(get_number(entry, "entry", 0, origin, where));
            obj.exit =
                static_cast<int>(get_number(entry, "exit", spec.frames - 1, origin, where));
            if (!entry.contains("waypoints") || !entry["waypoints"].is_array())
                throw DataError(origin + ": " + where + ": \"waypoints\" array is required");
            for (const json& wp : entry["waypoints"]) {
                if (!wp.is_object())
                    throw DataError(origin + ": " + where + ": waypoints must be objects");
                check_keys(wp, {"frame", "cx", "cy"}, origin, where + " waypoint");
                Waypoint point;
                point.frame =
                    static_cast<int>(get_number(wp, "frame", 0, origin, where + " waypoint"));
                point.cx = get_number(wp, "cx", 0.0, origin, where + " waypoint");
                point.cy = get_number(wp, "cy", 0.0, origin, where + " waypoint");
                obj.waypoints.push_back(point);
            }
            if (entry.contains("occlusions")) {
                if (!entry["occlusions"].is_array())
                    throw DataError(origin + ": " + where + ": \"occlusions\" must be an array");
                for (const json& range : entry["occlusions"]) {
                    if (!range.is_array() || range.size() != 2 ||
                        !range[0].is_number_integer() || !range[1].is_number_integer())
                        throw DataError(origin + ": " + where +
                                        ": occlusions must be [first, last] frame pairs");
                    obj.occlusions.push_back({range[0].get<int>(), range[1].get<int>()});
                }
            }
            spec.objects.push_back(std::move(obj));
        }
    }

    spec.validate();
    return spec;
}

ScenarioSpec ScenarioSpec::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str(), path);
}

BoundingBox scripted_box(const ObjectScript& obj, int frame) {
    const std::vector<Waypoint>& wps = obj.waypoints;
    double cx = wps.front().cx;
    double cy = wps.front().cy;
    if (frame >= wps.back().frame) {
        cx = wps.back().cx;
        cy = wps.back().cy;
    } else if (frame > wps.front().frame) {
        for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
            if (frame > wps[i + 1].frame) continue;
            const double span = static_cast<double>(wps[i + 1].frame - wps[i].frame);
            const double u = static_cast<double>(frame - wps[i].frame) / span;
            cx = wps[i].cx + u * (wps[i + 1].cx - wps[i].cx);
            cy = wps[i].cy + u * (wps[i + 1].cy - wps[i].cy);
            break;
        }
    }
    return box_from_center(cx, cy, obj.width, obj.height);
}

Rgb object_colour(const ScenarioSpec& spec, std::size_t object_index) {
    if (!spec.distinct_colours) return spec.objects[object_index].colour;
    // Grey levels spread over [0, 200], well separated from a white background.
    const std::size_t n = spec.objects.size();
    const int level =
        n <= 1 ? 0
               : static_cast<int>(std::lround(200.0 * static_cast<double>(object_index) /
                                              static_cast<double>(n - 1)));
    const auto grey = static_cast<std::uint8_t>(level);
    return {grey, grey, grey};
}

Image render_frame(const ScenarioSpec& spec, int frame) {
    Image img = Image::filled(spec.width, spec.height, spec.background);
    for (std::size_t k = 0; k < spec.objects.size(); ++k) {
        const ObjectScript& obj = spec.objects[k];
        if (!alive_at(obj, frame) || occluded_at(obj, frame)) continue;
        fill_rect(img, scripted_box(obj, frame), object_colour(spec, k));
    }
    return img;
}

namespace {

// Equal slices along the longer side; the final boundary is the exact
// original edge so the slices union back to the input box.
std::vector<BoundingBox> split_box(const BoundingBox& box, int count) {
    std::vector<BoundingBox> parts;
    parts.reserve(static_cast<std::size_t>(count));
    const bool along_x = box.width() >= box.height();
    const double lo = along_x ? box.x_min : box.y_min;
    const double hi = along_x ? box.x_max : box.y_max;
    const double len = hi - lo;
    for (int i = 0; i < count; ++i) {
        const double a = lo + len * i / count;
        const double b = i + 1 == count ? hi : lo + len * (i + 1) / count;
        if (along_x)
            parts.push_back({a, box.y_min, b, box.y_max});
        else
            parts.push_back({box.x_min, a, box.x_max, b});
    }
    return parts;
}

BoundingBox dilate_box(const BoundingBox& box, double factor) {
    return box_from_center(box.center_x(), box.center_y(), box.width() * factor,
                           box.height() * factor);
}

} // namespace

SynthOutput generate(const ScenarioSpec& spec, bool with_histograms,
                     int histogram_bins) {
    spec.validate();

    // Independent streams so one stream's noise settings cannot shift the
    // draws of the other.
    RandomStream imot_rng(spec.seed ^ 0x49f6428aa84a9f4bULL);
    RandomStream mod_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);

    SynthOutput out;
    const double frame_w = spec.width;
    const double frame_h = spec.height;

    for (int frame = 0; frame < spec.frames; ++frame) {
        Image img;
        if (with_histograms) img = render_frame(spec, frame);
        auto attach_histogram = [&](Detection& det) {
            if (with_histograms)
                det.histogram = histogram_from_region(img, det.bbox, histogram_bins);
        };

        std::vector<Detection>& imot_dets = out.imot[frame];
        std::vector<Detection>& mod_dets = out.mod[frame];

        for (std::size_t k = 0; k < spec.objects.size(); ++k) {
            const ObjectScript& obj = spec.objects[k];
            if (!alive_at(obj, frame)) continue;
            const BoundingBox gt_box = scripted_box(obj, frame);
            out.ground_truth.push_back({frame, static_cast<int>(k) + 1, gt_box});

            // Every alive object consumes the same draws each frame, so
            // occlusions and misses never shift the sequence.
            const bool imot_missed = imot_rng.uniform() < spec.imot.miss_prob;
            const bool fragmented = imot_rng.uniform() < spec.imot.fragmentation_prob;
            BoundingBox jittered{gt_box.x_min + imot_rng.normal(0.0, spec.imot.jitter_sigma),
                                 gt_box.y_min + imot_rng.normal(0.0, spec.imot.jitter_sigma),
                                 gt_box.x_max + imot_rng.normal(0.0, spec.imot.jitter_sigma),
                                 gt_box.y_max + imot_rng.normal(0.0, spec.imot.jitter_sigma)};
            const bool mod_missed = mod_rng.uniform() < spec.mod.miss_prob;
            const double confidence = std::clamp(
                mod_rng.normal(spec.mod.confidence_mean, spec.mod.confidence_sigma), 0.0, 1.0);

            const bool hidden = occluded_at(obj, frame);

            if (!hidden && !imot_missed) {
                if (jittered.x_min > jittered.x_max) std::swap(jittered.x_min, jittered.x_max);
                if (jittered.y_min > jittered.y_max) std::swap(jittered.y_min, jittered.y_max);
                jittered = clip_to_frame(jittered, frame_w, frame_h);
                const std::vector<BoundingBox> boxes =
                    fragmented ? split_box(jittered, spec.imot.fragment_count)
                               : std::vector<BoundingBox>{jittered};
                for (const BoundingBox& box : boxes) {
                    Detection det;
                    det.frame = frame;
                    det.bbox = clip_to_frame(box, frame_w, frame_h);
                    det.source = SourceKind::Imot;
                    det.label = kDummyLabel;
                    det.confidence = 0.0;
                    attach_histogram(det);
                    imot_dets.push_back(std::move(det));
                }
            }

            if (!hidden && !mod_missed) {
                Detection det;
                det.frame = frame;
                det.bbox = clip_to_frame(dilate_box(gt_box, spec.mod.dilation), frame_w, frame_h);
                det.source = SourceKind::Mod;
                det.label = obj.label;
                det.confidence = confidence;
                attach_histogram(det);
                mod_dets.push_back(std::move(det));
            }
        }

        if (spec.imot.clutter_rate > 0.0) {
            const int count = imot_rng.poisson(spec.imot.clutter_rate);
            for (int c = 0; c < count; ++c) {
                const double w = std::min(8.0 + imot_rng.uniform() * 32.0, frame_w);
                const double h = std::min(8.0 + imot_rng.uniform() * 32.0, frame_h);
                const double cx = w / 2 + imot_rng.uniform() * (frame_w - w);
                const double cy = h / 2 + imot_rng.uniform() * (frame_h - h);
                Detection det;
                det.frame = frame;
                det.bbox = clip_to_frame(box_from_center(cx, cy, w, h), frame_w, frame_h);
                det.source = SourceKind::Imot;
                det.label = kDummyLabel;
                det.confidence = 0.0;
                attach_histogram(det);
                imot_dets.push_back(std::move(det));
            }
        }

        if (spec.mod.merge_adjacent_prob > 0.0) {
            for (std::size_t i = 0; i < mod_dets.size(); ++i) {
                for (std::size_t j = i + 1; j < mod_dets.size();) {
                    if (intersection_area(mod_dets[i].bbox, mod_dets[j].bbox) <= 0.0) {
                        ++j;
                        continue;
                    }
                    if (mod_rng.uniform() >= spec.mod.merge_adjacent_prob) {
                        ++j;
                        continue;
                    }
                    BoundingBox& a = mod_dets[i].bbox;
                    const BoundingBox& b = mod_dets[j].bbox;
                    a = {std::min(a.x_min, b.x_min), std::min(a.y_min, b.y_min),
                         std::max(a.x_max, b.x_max), std::max(a.y_max, b.y_max)};
                    mod_dets[i].confidence =
                        std::max(mod_dets[i].confidence, mod_dets[j].confidence);
                    if (with_histograms)
                        mod_dets[i].histogram = histogram_from_region(img, a, histogram_bins);
                    mod_dets.erase(mod_dets.begin() + static_cast<std::ptrdiff_t>(j));
                }
            }
        }
    }

    // Frames where a stream saw nothing have no records, mirroring what a
    // real detector would emit.
    std::erase_if(out.imot, [](const auto& kv) { return kv.second.empty(); });
    std::erase_if(out.mod, [](const auto& kv) { return kv.second.empty(); });
    return out;
}

} // namespace fusemot
