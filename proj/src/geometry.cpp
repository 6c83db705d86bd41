#include "fusemot/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace fusemot {

namespace {
constexpr double kMinSide = 1e-3; // sliver size used when a box is clipped away
}

bool BoundingBox::valid() const {
    return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
           std::isfinite(y_max) && x_min >= 0.0 && y_min >= 0.0 && x_min < x_max &&
           y_min < y_max;
}

BoundingBox box_from_center(double cx, double cy, double w, double h) {
    return {cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
}

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
    const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (w <= 0.0 || h <= 0.0) return 0.0;
    return w * h;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    const double inter = intersection_area(a, b);
    if (inter <= 0.0) return 0.0;
    return inter / (a.area() + b.area() - inter);
}

double mean_corner_distance(const BoundingBox& d, const BoundingBox& t,
                            double frame_w, double frame_h) {
    return 0.25 * (std::abs(d.x_min - t.x_min) / frame_w +
                   std::abs(d.y_min - t.y_min) / frame_h +
                   std::abs(d.x_max - t.x_max) / frame_w +
                   std::abs(d.y_max - t.y_max) / frame_h);
}

BoundingBox clip_to_frame(const BoundingBox& b, double frame_w, double frame_h) {
    BoundingBox c{std::max(b.x_min, 0.0), std::max(b.y_min, 0.0),
                  std::min(b.x_max, frame_w), std::min(b.y_max, frame_h)};
    if (c.x_min >= c.x_max) {
        const double edge = b.x_max <= 0.0 ? 0.0 : frame_w - kMinSide;
        c.x_min = std::max(edge, 0.0);
        c.x_max = c.x_min + kMinSide;
    }
    if (c.y_min >= c.y_max) {
        const double edge = b.y_max <= 0.0 ? 0.0 : frame_h - kMinSide;
        c.y_min = std::max(edge, 0.0);
        c.y_max = c.y_min + kMinSide;
    }
    return c;
}

} // namespace fusemot
