#include "fusemot/detection_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "fusemot/error.hpp"

namespace fusemot {

namespace {

using nlohmann::json;

[[noreturn]] void line_error(const std::string& path, int line, const std::string& what) {
    throw DataError(path + ":" + std::to_string(line) + ": " + what);
}

json parse_line(const std::string& path, int line, const std::string& text) {
    json obj = json::parse(text, nullptr, false);
    if (obj.is_discarded()) line_error(path, line, "invalid JSON");
    if (!obj.is_object()) line_error(path, line, "expected a JSON object");
    return obj;
}

double require_number(const json& obj, const char* key, const std::string& path, int line) {
    if (!obj.contains(key)) line_error(path, line, std::string("missing \"") + key + "\"");
    if (!obj[key].is_number()) line_error(path, line, std::string("\"") + key + "\" must be a number");
    return obj[key].get<double>();
}

int require_int(const json& obj, const char* key, const std::string& path, int line) {
    if (!obj.contains(key)) line_error(path, line, std::string("missing \"") + key + "\"");
    if (!obj[key].is_number_integer())
        line_error(path, line, std::string("\"") + key + "\" must be an integer");
    return obj[key].get<int>();
}

std::string require_string(const json& obj, const char* key, const std::string& path, int line) {
    if (!obj.contains(key)) line_error(path, line, std::string("missing \"") + key + "\"");
    if (!obj[key].is_string())
        line_error(path, line, std::string("\"") + key + "\" must be a string");
    return obj[key].get<std::string>();
}

BoundingBox require_bbox(const json& obj, const std::string& path, int line) {
    if (!obj.contains("bbox")) line_error(path, line, "missing \"bbox\"");
    const json& arr = obj["bbox"];
    if (!arr.is_array() || arr.size() != 4)
        line_error(path, line, "\"bbox\" must be an array of four numbers");
    for (const auto& v : arr)
        if (!v.is_number()) line_error(path, line, "\"bbox\" must be an array of four numbers");
    BoundingBox box{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>(),
                    arr[3].get<double>()};
    if (!box.valid()) {
        std::ostringstream msg;
        msg << "degenerate bbox [" << box.x_min << ", " << box.y_min << ", " << box.x_max
            << ", " << box.y_max << "]";
        line_error(path, line, msg.str());
    }
    return box;
}

json bbox_to_json(const BoundingBox& box) {
    return json::array({box.x_min, box.y_min, box.x_max, box.y_max});
}

// Stream of non-empty lines plus their 1-based line numbers.
template <typename Fn>
void for_each_line(const std::string& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    std::string text;
    int line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        bool blank = true;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
        if (blank) continue;
        fn(line, text);
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    return out;
}

} // namespace

std::map<int, std::vector<Detection>> read_detections(const std::string& path) {
    std::map<int, std::vector<Detection>> by_frame;
    for_each_line(path, [&](int line, const std::string& text) {
        const json obj = parse_line(path, line, text);
        Detection det;
        det.frame = require_int(obj, "frame", path, line);
        if (det.frame < 0) line_error(path, line, "\"frame\" must be non-negative");
        det.bbox = require_bbox(obj, path, line);
        const std::string source = require_string(obj, "source", path, line);
        try {
            det.source = source_from_string(source);
        } catch (const DataError&) {
            line_error(path, line, "unknown \"source\" value \"" + source + "\"");
        }
        det.label = require_string(obj, "label", path, line);
        det.confidence = require_number(obj, "confidence", path, line);
        if (!std::isfinite(det.confidence) || det.confidence < 0.0 || det.confidence > 1.0)
            line_error(path, line, "\"confidence\" must be in [0, 1]");
        if (obj.contains("histogram")) {
            const json& arr = obj["histogram"];
            if (!arr.is_array() || arr.empty())
                line_error(path, line, "\"histogram\" must be a non-empty array");
            ColourHistogram hist;
            hist.bins.reserve(arr.size());
            for (const auto& v : arr) {
                if (!v.is_number() || v.get<double>() < 0.0)
                    line_error(path, line, "\"histogram\" bins must be non-negative numbers");
                hist.bins.push_back(v.get<double>());
            }
            det.histogram = std::move(hist);
        }
        by_frame[det.frame].push_back(std::move(det));
    });
    return by_frame;
}

void write_detections(const std::map<int, std::vector<Detection>>& by_frame,
                      const std::string& path, bool with_histograms) {
    std::ofstream out = open_output(path);
    for (const auto& [frame, dets] : by_frame) {
        for (const Detection& det : dets) {
            json obj;
            obj["frame"] = det.frame;
            obj["bbox"] = bbox_to_json(det.bbox);
            obj["source"] = to_string(det.source);
            obj["label"] = det.label;
            obj["confidence"] = det.confidence;
            if (with_histograms && det.histogram) obj["histogram"] = det.histogram->bins;
            out << obj.dump() << "\n";
        }
    }
    if (!out) throw DataError("failed to write file: " + path);
}

std::vector<GroundTruthEntry> read_ground_truth(const std::string& path) {
    std::vector<GroundTruthEntry> entries;
    std::set<std::pair<int, int>> seen;
    for_each_line(path, [&](int line, const std::string& text) {
        const json obj = parse_line(path, line, text);
        GroundTruthEntry entry;
        entry.frame = require_int(obj, "frame", path, line);
        if (entry.frame < 0) line_error(path, line, "\"frame\" must be non-negative");
        entry.id = require_int(obj, "id", path, line);
        entry.bbox = require_bbox(obj, path, line);
        if (!seen.insert({entry.frame, entry.id}).second)
            line_error(path, line, "duplicate ground truth entry for frame " +
                                       std::to_string(entry.frame) + ", id " +
                                       std::to_string(entry.id));
        entries.push_back(entry);
    });
    return entries;
}

void write_ground_truth(const std::vector<GroundTruthEntry>& entries, const std::string& path) {
    std::ofstream out = open_output(path);
    for (const GroundTruthEntry& entry : entries) {
        json obj;
        obj["frame"] = entry.frame;
        obj["id"] = entry.id;
        obj["bbox"] = bbox_to_json(entry.bbox);
        out << obj.dump() << "\n";
    }
    if (!out) throw DataError("failed to write file: " + path);
}

std::vector<TrackRecord> read_tracks(const std::string& path) {
    std::vector<TrackRecord> records;
    for_each_line(path, [&](int line, const std::string& text) {
        const json obj = parse_line(path, line, text);
        TrackRecord rec;
        rec.track_id = require_int(obj, "track", path, line);
        rec.frame = require_int(obj, "frame", path, line);
        if (rec.frame < 0) line_error(path, line, "\"frame\" must be non-negative");
        rec.bbox = require_bbox(obj, path, line);
        const std::string state = require_string(obj, "state", path, line);
        try {
            rec.state = step_state_from_string(state);
        } catch (const DataError&) {
            line_error(path, line, "unknown \"state\" value \"" + state + "\"");
        }
        records.push_back(rec);
    });
    return records;
}

void write_tracks(const std::vector<TrackRecord>& records, const std::string& path) {
    std::ofstream out = open_output(path);
    for (const TrackRecord& rec : records) {
        json obj;
        obj["track"] = rec.track_id;
        obj["frame"] = rec.frame;
        obj["bbox"] = bbox_to_json(rec.bbox);
        obj["state"] = to_string(rec.state);
        out << obj.dump() << "\n";
    }
    if (!out) throw DataError("failed to write file: " + path);
}

} // namespace fusemot
