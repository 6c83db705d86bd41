#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fusemot/geometry.hpp"

namespace fusemot {

using Rgb = std::array<std::uint8_t, 3>;

// Interleaved 8-bit RGB raster, row-major.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // 3 * width * height bytes

    static Image filled(int w, int h, Rgb colour);

    Rgb at(int x, int y) const {
        const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
        return {pixels[i], pixels[i + 1], pixels[i + 2]};
    }
    void set(int x, int y, Rgb colour) {
        const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
        pixels[i] = colour[0];
        pixels[i + 1] = colour[1];
        pixels[i + 2] = colour[2];
    }

    bool operator==(const Image&) const = default;
};

// PNG or PPM (binary P6), chosen by file extension.
Image load_image(const std::string& path);
void save_image(const Image& img, const std::string& path);

// Drawing helpers for synthetic frames and track overlays.
void fill_rect(Image& img, const BoundingBox& box, Rgb colour);
void draw_rect_outline(Image& img, const BoundingBox& box, Rgb colour, int thickness = 2);
void draw_number(Image& img, int x, int y, long value, Rgb colour, int scale = 2);

} // namespace fusemot
