#include <cmath>

#include <doctest.h>

#include "fusemot/error.hpp"
#include "fusemot/kalman.hpp"

using fusemot::BoundingBox;
using fusemot::BoxKalmanFilter;
using fusemot::KalmanParams;

TEST_SUITE("kalman") {

TEST_CASE("initial prediction keeps the box center") {
    const BoundingBox start{10, 20, 30, 40};
    BoxKalmanFilter filter(start, KalmanParams{});
    const auto predicted = filter.predicted_box();
    CHECK(predicted.center_x() == doctest::Approx(20).epsilon(1e-12));
    CHECK(predicted.center_y() == doctest::Approx(30).epsilon(1e-12));
    CHECK(predicted.width() == doctest::Approx(20).epsilon(1e-12));
    CHECK(filter.current_box() == start);
}

TEST_CASE("predicted_box does not mutate the filter") {
    BoxKalmanFilter filter({0, 0, 10, 10}, KalmanParams{});
    const auto before = filter.state();
    (void)filter.predicted_box();
    (void)filter.predicted_box();
    CHECK(filter.state() == before);
}

TEST_CASE("constant velocity is learned from noise-free updates") {
    BoxKalmanFilter filter({0, 0, 10, 10}, KalmanParams{});
    for (int t = 1; t <= 10; ++t) {
        filter.advance();
        filter.update({5.0 * t, 0, 5.0 * t + 10, 10});
    }
    const auto predicted = filter.predicted_box();
    CHECK(std::abs(predicted.center_x() - 60.0) < 0.5);
    CHECK(std::abs(predicted.center_y() - 5.0) < 0.5);
    CHECK(std::abs(predicted.width() - 10.0) < 0.5);
}

TEST_CASE("velocity persists through coasting") {
    BoxKalmanFilter filter({0, 0, 10, 10}, KalmanParams{});
    for (int t = 1; t <= 10; ++t) {
        filter.advance();
        filter.update({4.0 * t, 0, 4.0 * t + 10, 10});
    }
    for (int t = 0; t < 5; ++t) filter.advance();
    // After 10 observed frames plus 5 coasted ones the center should sit
    // near 4 * 15 + 5 = 65.
    CHECK(std::abs(filter.current_box().center_x() - 65.0) < 1.0);
}

TEST_CASE("covariance stays symmetric and positive on the diagonal") {
    BoxKalmanFilter filter({0, 0, 10, 10}, KalmanParams{});
    for (int t = 1; t <= 20; ++t) {
        filter.advance();
        if (t % 3) filter.update({1.0 * t, 0.5 * t, 1.0 * t + 10 + 0.1 * t, 0.5 * t + 10});
        const auto& p = filter.covariance();
        CHECK((p - p.transpose()).cwiseAbs().maxCoeff() < 1e-9);
        for (int i = 0; i < 8; ++i) CHECK(p(i, i) > 0.0);
    }
}

TEST_CASE("sizes never collapse") {
    KalmanParams params;
    BoxKalmanFilter filter({0, 0, 0.01, 0.01}, params);
    for (int t = 0; t < 30; ++t) {
        filter.advance();
        filter.update({0, 0, 0.002, 0.002});
        CHECK(filter.current_box().width() >= params.min_size);
        CHECK(filter.current_box().height() >= params.min_size);
        CHECK(filter.predicted_box().width() >= params.min_size);
    }
}

TEST_CASE("stationary object stays put under repeated updates") {
    const BoundingBox box{50, 60, 70, 90};
    BoxKalmanFilter filter(box, KalmanParams{});
    for (int t = 0; t < 15; ++t) {
        filter.advance();
        filter.update(box);
    }
    const auto predicted = filter.predicted_box();
    CHECK(std::abs(predicted.center_x() - box.center_x()) < 1e-6);
    CHECK(std::abs(predicted.center_y() - box.center_y()) < 1e-6);
    CHECK(std::abs(predicted.width() - box.width()) < 1e-6);
    CHECK(std::abs(predicted.height() - box.height()) < 1e-6);
}

TEST_CASE("parameter validation") {
    KalmanParams params;
    params.measurement_sigma = 0;
    CHECK_THROWS_AS(params.validate(), fusemot::DataError);
    params = {};
    params.process_sigma_pos = -1;
    CHECK_THROWS_AS(params.validate(), fusemot::DataError);
    params = {};
    params.min_size = 0;
    CHECK_THROWS_AS(params.validate(), fusemot::DataError);
}

} // TEST_SUITE
