#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "fusemot/geometry.hpp"
#include "fusemot/histogram.hpp"

namespace test_support {

// Platform-stable draws for property tests (explicit transform, fixed seed).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }
    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 gen_;
};

inline fusemot::ColourHistogram make_hist(std::initializer_list<double> bins) {
    fusemot::ColourHistogram hist;
    hist.bins = bins;
    return hist;
}

// Integer-coordinate boxes only: counts unit cells, so both intersection and
// union areas are exact integers.
struct RasterIou {
    long long inter = 0;
    long long uni = 0;
};

inline RasterIou raster_iou(const fusemot::BoundingBox& a, const fusemot::BoundingBox& b) {
    const int x0 = static_cast<int>(std::min(a.x_min, b.x_min));
    const int y0 = static_cast<int>(std::min(a.y_min, b.y_min));
    const int x1 = static_cast<int>(std::max(a.x_max, b.x_max));
    const int y1 = static_cast<int>(std::max(a.y_max, b.y_max));
    RasterIou result;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            const bool in_a = x >= a.x_min && x < a.x_max && y >= a.y_min && y < a.y_max;
            const bool in_b = x >= b.x_min && x < b.x_max && y >= b.y_min && y < b.y_max;
            if (in_a && in_b) ++result.inter;
            if (in_a || in_b) ++result.uni;
        }
    }
    return result;
}

class TempDir {
public:
    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        for (int attempt = 0; attempt < 100; ++attempt) {
            auto candidate = base / ("fusemot_test_" + std::to_string(counter()++));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp directory");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

private:
    static int& counter() {
        static int value = 0;
        return value;
    }
    std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace test_support
