#pragma once

#include <Eigen/Dense>

#include "fusemot/geometry.hpp"

namespace fusemot {

struct KalmanParams {
    double measurement_sigma = 1.0;      // px, box observation noise
    double process_sigma_pos = 1.0;      // px/frame^2, center acceleration noise
    double process_sigma_size = 0.1;     // px/frame^2, size change noise
    double initial_velocity_sigma = 10.0;
    double min_size = 1e-3;              // width/height floor after filtering

    void validate() const;
};

// Constant-velocity filter over (center, size) of a box.
// State: [cx, cy, w, h, vcx, vcy, vw, vh], unit time step per frame.
class BoxKalmanFilter {
public:
    BoxKalmanFilter(const BoundingBox& initial, const KalmanParams& params);

    // One-step-ahead box; does not change the filter.
    BoundingBox predicted_box() const;

    // Commits the time update. Call once per frame before any measurement.
    void advance();

    // Measurement update from an observed box.
    void update(const BoundingBox& measurement);

    BoundingBox current_box() const;
    const Eigen::Matrix<double, 8, 1>& state() const { return x_; }
    const Eigen::Matrix<double, 8, 8>& covariance() const { return p_; }

private:
    void clamp_size();

    KalmanParams params_;
    Eigen::Matrix<double, 8, 1> x_;
    Eigen::Matrix<double, 8, 8> p_;
    Eigen::Matrix<double, 8, 8> f_;
    Eigen::Matrix<double, 8, 8> q_;
    Eigen::Matrix<double, 4, 8> h_;
    Eigen::Matrix<double, 4, 4> r_;
};

} // namespace fusemot
