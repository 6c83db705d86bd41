#pragma once

#include <functional>
#include <optional>
#include <string>

#include "fusemot/geometry.hpp"
#include "fusemot/histogram.hpp"
#include "fusemot/image.hpp"

namespace fusemot {

// Placeholder class for detections with no classifier output.
inline const std::string kDummyLabel = "dummy";

enum class SourceKind { Imot, Mod, Fused };

std::string to_string(SourceKind source);
SourceKind source_from_string(const std::string& text);

struct Detection {
    int frame = 0;
    BoundingBox bbox;
    SourceKind source = SourceKind::Imot;
    std::string label = kDummyLabel;
    double confidence = 0.0;
    std::optional<ColourHistogram> histogram;
};

struct GroundTruthEntry {
    int frame = 0;
    int id = 0;
    BoundingBox bbox;
};

// Source of video frames for appearance lookups.
class FrameSource {
public:
    virtual ~FrameSource() = default;
    virtual Image load(int frame) const = 0;
};

// Frames on disk named by a numeric pattern, e.g. "frames/%06d.png".
// All frames must share the same dimensions.
class PatternFrameStore : public FrameSource {
public:
    PatternFrameStore(std::string pattern, int first_frame);

    Image load(int frame) const override;
    std::string path_for(int frame) const;
    int width() const { return width_; }
    int height() const { return height_; }

private:
    std::string pattern_;
    mutable int width_ = 0;
    mutable int height_ = 0;
};

class CallbackFrameSource : public FrameSource {
public:
    explicit CallbackFrameSource(std::function<Image(int)> fn) : fn_(std::move(fn)) {}
    Image load(int frame) const override { return fn_(frame); }

private:
    std::function<Image(int)> fn_;
};

} // namespace fusemot
