#pragma once

namespace fusemot {

// Axis-aligned pixel rectangle in corner format. A valid box has strictly
// positive area and finite, non-negative coordinates.
struct BoundingBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    double center_x() const { return 0.5 * (x_min + x_max); }
    double center_y() const { return 0.5 * (y_min + y_max); }

    bool valid() const;

    bool operator==(const BoundingBox&) const = default;
};

BoundingBox box_from_center(double cx, double cy, double w, double h);

// Area of overlap; 0 when disjoint.
double intersection_area(const BoundingBox& a, const BoundingBox& b);

// Intersection over union, in [0, 1]. Symmetric; 0 when disjoint.
double iou(const BoundingBox& a, const BoundingBox& b);

// Mean absolute corner displacement between a detected and a tracked box,
// with x coordinates normalized by frame width and y by frame height so the
// result compares against unitless thresholds.
double mean_corner_distance(const BoundingBox& d, const BoundingBox& t,
                            double frame_w, double frame_h);

// Intersects the box with [0,w]x[0,h]. If nothing remains, returns a minimal
// sliver pinned to the nearest edge so the result is always a valid box.
BoundingBox clip_to_frame(const BoundingBox& b, double frame_w, double frame_h);

} // namespace fusemot
