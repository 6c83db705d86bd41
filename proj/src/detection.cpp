#include "fusemot/detection.hpp"

#include <cctype>

#include "fusemot/error.hpp"

namespace fusemot {

std::string to_string(SourceKind source) {
    switch (source) {
        case SourceKind::Imot: return "imot";
        case SourceKind::Mod: return "mod";
        case SourceKind::Fused: return "fused";
    }
    throw InternalError("unknown source kind");
}

SourceKind source_from_string(const std::string& text) {
    if (text == "imot") return SourceKind::Imot;
    if (text == "mod") return SourceKind::Mod;
    if (text == "fused") return SourceKind::Fused;
    throw DataError("unknown detection source: \"" + text + "\"");
}

namespace {

// Expand a single %d or %0Nd placeholder. Anything else in the pattern is
// taken literally; stray '%' is an error rather than a printf passthrough.
std::string expand_pattern(const std::string& pattern, int frame) {
    std::string out;
    bool expanded = false;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i] != '%') {
            out += pattern[i];
            continue;
        }
        if (expanded) throw DataError("frame pattern has more than one placeholder: " + pattern);
        std::size_t j = i + 1;
        int pad = 0;
        if (j < pattern.size() && pattern[j] == '0') {
            ++j;
            while (j < pattern.size() && std::isdigit(static_cast<unsigned char>(pattern[j]))) {
                pad = pad * 10 + (pattern[j] - '0');
                ++j;
            }
        }
        if (j >= pattern.size() || pattern[j] != 'd')
            throw DataError("frame pattern must use %d or %0Nd: " + pattern);
        std::string digits = std::to_string(frame);
        if (static_cast<int>(digits.size()) < pad)
            digits.insert(0, pad - digits.size(), '0');
        out += digits;
        expanded = true;
        i = j;
    }
    if (!expanded) throw DataError("frame pattern has no %d placeholder: " + pattern);
    return out;
}

} // namespace

PatternFrameStore::PatternFrameStore(std::string pattern, int first_frame)
    : pattern_(std::move(pattern)) {
    const Image probe = load(first_frame);
    width_ = probe.width;
    height_ = probe.height;
}

std::string PatternFrameStore::path_for(int frame) const {
    return expand_pattern(pattern_, frame);
}

Image PatternFrameStore::load(int frame) const {
    Image img = load_image(path_for(frame));
    if (width_ != 0 && (img.width != width_ || img.height != height_))
        throw DataError("frame " + std::to_string(frame) + " has different dimensions (" +
                        std::to_string(img.width) + "x" + std::to_string(img.height) +
                        " vs " + std::to_string(width_) + "x" + std::to_string(height_) + ")");
    return img;
}

} // namespace fusemot
