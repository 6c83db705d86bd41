#include "fusemot/kalman.hpp"

#include <cmath>

#include "fusemot/error.hpp"

namespace fusemot {

void KalmanParams::validate() const {
    if (measurement_sigma <= 0.0 || process_sigma_pos <= 0.0 || process_sigma_size <= 0.0 ||
        initial_velocity_sigma <= 0.0 || min_size <= 0.0)
        throw DataError("motion filter noise parameters must be positive");
}

BoxKalmanFilter::BoxKalmanFilter(const BoundingBox& initial, const KalmanParams& params)
    : params_(params) {
    params_.validate();

    x_.setZero();
    x_(0) = initial.center_x();
    x_(1) = initial.center_y();
    x_(2) = initial.width();
    x_(3) = initial.height();

    p_.setZero();
    const double m2 = params_.measurement_sigma * params_.measurement_sigma;
    const double v2 = params_.initial_velocity_sigma * params_.initial_velocity_sigma;
    for (int i = 0; i < 4; ++i) {
        p_(i, i) = m2;
        p_(i + 4, i + 4) = v2;
    }

    f_.setIdentity();
    for (int i = 0; i < 4; ++i) f_(i, i + 4) = 1.0;

    // White-noise acceleration blocks per (value, velocity) pair, dt = 1.
    q_.setZero();
    for (int i = 0; i < 4; ++i) {
        const double sigma = i < 2 ? params_.process_sigma_pos : params_.process_sigma_size;
        const double s2 = sigma * sigma;
        q_(i, i) = 0.25 * s2;
        q_(i, i + 4) = 0.5 * s2;
        q_(i + 4, i) = 0.5 * s2;
        q_(i + 4, i + 4) = s2;
    }

    h_.setZero();
    for (int i = 0; i < 4; ++i) h_(i, i) = 1.0;

    r_ = m2 * Eigen::Matrix<double, 4, 4>::Identity();
}

void BoxKalmanFilter::clamp_size() {
    if (x_(2) < params_.min_size) x_(2) = params_.min_size;
    if (x_(3) < params_.min_size) x_(3) = params_.min_size;
}

BoundingBox BoxKalmanFilter::predicted_box() const {
    const Eigen::Matrix<double, 8, 1> xp = f_ * x_;
    const double w = std::max(xp(2), params_.min_size);
    const double h = std::max(xp(3), params_.min_size);
    return box_from_center(xp(0), xp(1), w, h);
}

void BoxKalmanFilter::advance() {
    x_ = f_ * x_;
    p_ = f_ * p_ * f_.transpose() + q_;
    clamp_size();
}

void BoxKalmanFilter::update(const BoundingBox& measurement) {
    Eigen::Matrix<double, 4, 1> z;
    z << measurement.center_x(), measurement.center_y(), measurement.width(),
        measurement.height();

    const Eigen::Matrix<double, 4, 1> innovation = z - h_ * x_;
    const Eigen::Matrix<double, 4, 4> s = h_ * p_ * h_.transpose() + r_;
    const Eigen::Matrix<double, 8, 4> k = p_ * h_.transpose() * s.inverse();

    x_ += k * innovation;
    // Joseph form keeps the covariance symmetric PSD.
    const Eigen::Matrix<double, 8, 8> ikh = Eigen::Matrix<double, 8, 8>::Identity() - k * h_;
    p_ = ikh * p_ * ikh.transpose() + k * r_ * k.transpose();
    clamp_size();
}

BoundingBox BoxKalmanFilter::current_box() const {
    return box_from_center(x_(0), x_(1), std::max(x_(2), params_.min_size),
                           std::max(x_(3), params_.min_size));
}

} // namespace fusemot
