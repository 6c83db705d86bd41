#include "fusemot/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include "fusemot/error.hpp"

namespace fusemot {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    if (s.size() < suffix.size()) return false;
    return std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(), [](char a, char b) {
        return std::tolower(static_cast<unsigned char>(a)) ==
               std::tolower(static_cast<unsigned char>(b));
    });
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw DataError("cannot open image file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw InternalError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw InternalError("png_create_info_struct failed");
    }

    Image img;
    std::vector<png_bytep> row_ptrs;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("failed to decode PNG: " + path);
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    // Normalize everything to 8-bit RGB.
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    if (png_get_rowbytes(png, info) != static_cast<png_size_t>(img.width) * 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("unsupported PNG layout: " + path);
    }

    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    row_ptrs.resize(img.height);
    for (int y = 0; y < img.height; ++y)
        row_ptrs[y] = img.pixels.data() + static_cast<std::size_t>(y) * img.width * 3;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_png(const Image& img, const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw DataError("cannot write image file: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw InternalError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw InternalError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw DataError("failed to encode PNG: " + path);
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y) {
        png_write_row(png, const_cast<png_bytep>(
                               img.pixels.data() + static_cast<std::size_t>(y) * img.width * 3));
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

Image load_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open image file: " + path);

    std::string magic;
    in >> magic;
    if (magic != "P6") throw DataError("not a binary PPM (P6) file: " + path);

    auto next_int = [&](const char* what) {
        // Skip whitespace and '#' comment lines between header fields.
        int c = in.peek();
        while (c != EOF && (std::isspace(c) || c == '#')) {
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else {
                in.get();
            }
            c = in.peek();
        }
        long v = -1;
        in >> v;
        if (!in || v < 0) throw DataError(std::string("bad PPM ") + what + ": " + path);
        return v;
    };

    const long w = next_int("width");
    const long h = next_int("height");
    const long maxval = next_int("maxval");
    if (maxval != 255) throw DataError("only 8-bit PPM supported: " + path);
    if (w <= 0 || h <= 0 || w > 1 << 20 || h > 1 << 20)
        throw DataError("bad PPM dimensions: " + path);
    in.get(); // single whitespace byte after maxval

    Image img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.pixels.resize(static_cast<std::size_t>(w) * h * 3);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
        throw DataError("truncated PPM pixel data: " + path);
    return img;
}

void save_ppm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write image file: " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw DataError("failed to write PPM: " + path);
}

// 3x5 bitmap glyphs for digits and '-', row-major bits.
constexpr std::uint16_t kDigitGlyphs[11] = {
    0b111101101101111, // 0
    0b010110010010111, // 1
    0b111001111100111, // 2
    0b111001111001111, // 3
    0b101101111001001, // 4
    0b111100111001111, // 5
    0b111100111101111, // 6
    0b111001001001001, // 7
    0b111101111101111, // 8
    0b111101111001111, // 9
    0b000000111000000, // -
};

void draw_glyph(Image& img, int x, int y, int glyph, Rgb colour, int scale) {
    for (int gy = 0; gy < 5; ++gy) {
        for (int gx = 0; gx < 3; ++gx) {
            if (!(kDigitGlyphs[glyph] >> ((4 - gy) * 3 + (2 - gx)) & 1)) continue;
            for (int sy = 0; sy < scale; ++sy) {
                for (int sx = 0; sx < scale; ++sx) {
                    const int px = x + gx * scale + sx;
                    const int py = y + gy * scale + sy;
                    if (px < 0 || py < 0 || px >= img.width || py >= img.height) continue;
                    img.set(px, py, colour);
                }
            }
        }
    }
}

} // namespace

Image Image::filled(int w, int h, Rgb colour) {
    if (w <= 0 || h <= 0) throw DataError("image dimensions must be positive");
    Image img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<std::size_t>(w) * h * 3);
    for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
        img.pixels[i] = colour[0];
        img.pixels[i + 1] = colour[1];
        img.pixels[i + 2] = colour[2];
    }
    return img;
}

Image load_image(const std::string& path) {
    if (ends_with(path, ".png")) return load_png(path);
    if (ends_with(path, ".ppm")) return load_ppm(path);
    throw DataError("unsupported image format (expected .png or .ppm): " + path);
}

void save_image(const Image& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0 ||
        img.pixels.size() != static_cast<std::size_t>(img.width) * img.height * 3)
        throw InternalError("refusing to save malformed image");
    if (ends_with(path, ".png")) return save_png(img, path);
    if (ends_with(path, ".ppm")) return save_ppm(img, path);
    throw DataError("unsupported image format (expected .png or .ppm): " + path);
}

void fill_rect(Image& img, const BoundingBox& box, Rgb colour) {
    const int x0 = std::max(0, static_cast<int>(std::floor(box.x_min)));
    const int y0 = std::max(0, static_cast<int>(std::floor(box.y_min)));
    const int x1 = std::min(img.width, static_cast<int>(std::ceil(box.x_max)));
    const int y1 = std::min(img.height, static_cast<int>(std::ceil(box.y_max)));
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) img.set(x, y, colour);
}

void draw_rect_outline(Image& img, const BoundingBox& box, Rgb colour, int thickness) {
    const int x0 = static_cast<int>(std::lround(box.x_min));
    const int y0 = static_cast<int>(std::lround(box.y_min));
    const int x1 = static_cast<int>(std::lround(box.x_max));
    const int y1 = static_cast<int>(std::lround(box.y_max));
    for (int t = 0; t < thickness; ++t) {
        for (int x = x0 - t; x <= x1 + t; ++x) {
            for (int y : {y0 - t, y1 + t}) {
                if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
                img.set(x, y, colour);
            }
        }
        for (int y = y0 - t; y <= y1 + t; ++y) {
            for (int x : {x0 - t, x1 + t}) {
                if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
                img.set(x, y, colour);
            }
        }
    }
}

void draw_number(Image& img, int x, int y, long value, Rgb colour, int scale) {
    std::string text = std::to_string(value);
    int cx = x;
    for (char c : text) {
        const int glyph = c == '-' ? 10 : c - '0';
        draw_glyph(img, cx, y, glyph, colour, scale);
        cx += 4 * scale; // 3-wide glyph plus 1 column gap
    }
}

} // namespace fusemot
