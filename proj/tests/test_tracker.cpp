#include <cmath>

#include <doctest.h>

#include "fusemot/error.hpp"
#include "fusemot/tracker.hpp"
#include "test_support.hpp"

using fusemot::BoundingBox;
using fusemot::FusedObject;
using fusemot::StepState;
using fusemot::Track;
using fusemot::Tracker;
using fusemot::TrackerParams;

TEST_SUITE("tracker") {

namespace {

TrackerParams colourless_params(double w, double h) {
    TrackerParams params;
    params.association.weights = {0.9, 0.0, 0.1};
    params.association.frame_width = w;
    params.association.frame_height = h;
    return params;
}

FusedObject det(BoundingBox box, std::string label = "car", double confidence = 0.9) {
    FusedObject obj;
    obj.bbox = box;
    obj.label = std::move(label);
    obj.confidence = confidence;
    obj.imot_sources = {0};
    return obj;
}

BoundingBox moving_box(int frame, double step = 4.0) {
    return {10 + step * frame, 50, 50 + step * frame, 74};
}

} // namespace

TEST_CASE("branch table for unmatched tracks") {
    using fusemot::resolve_prediction;
    CHECK(resolve_prediction(StepState::D, true).use_prediction);
    CHECK(resolve_prediction(StepState::D, true).state == StepState::GP);
    CHECK_FALSE(resolve_prediction(StepState::D, false).use_prediction);
    CHECK(resolve_prediction(StepState::D, false).state == StepState::BP);
    CHECK(resolve_prediction(StepState::GP, true).use_prediction);
    CHECK(resolve_prediction(StepState::GP, true).state == StepState::GP);
    CHECK_FALSE(resolve_prediction(StepState::GP, false).use_prediction);
    CHECK(resolve_prediction(StepState::GP, false).state == StepState::BP);
    for (bool overlap : {true, false}) {
        CHECK(resolve_prediction(StepState::BP, overlap).use_prediction);
        CHECK(resolve_prediction(StepState::BP, overlap).state == StepState::UP);
        CHECK(resolve_prediction(StepState::UP, overlap).use_prediction);
        CHECK(resolve_prediction(StepState::UP, overlap).state == StepState::UP);
    }
}

TEST_CASE("init and births") {
    Tracker tracker(colourless_params(320, 240));
    const auto summary =
        tracker.process_frame(0, {det({10, 10, 30, 30}), det({100, 100, 140, 130}, "bus")});
    CHECK(summary.births == 2);
    CHECK(summary.active == 2);
    REQUIRE(tracker.active().size() == 2);
    CHECK(tracker.active()[0].id != tracker.active()[1].id);
    CHECK(tracker.active()[0].steps.size() == 1);
    CHECK(tracker.active()[0].steps[0].state == StepState::D);
    CHECK(tracker.active()[0].steps[0].bbox == BoundingBox{10, 10, 30, 30});
}

TEST_CASE("perfect detections give one all-D track equal to the input") {
    Tracker tracker(colourless_params(320, 240));
    for (int f = 0; f < 20; ++f) {
        const auto summary = tracker.process_frame(f, {det(moving_box(f))});
        CHECK(summary.active == 1);
        if (f > 0) CHECK(summary.matched == 1);
    }
    const auto tracks = tracker.finalize();
    REQUIRE(tracks.size() == 1);
    CHECK(tracks[0].id == 1);
    REQUIRE(tracks[0].steps.size() == 20);
    for (int f = 0; f < 20; ++f) {
        CHECK(tracks[0].steps[f].frame == f);
        CHECK(tracks[0].steps[f].state == StepState::D);
        CHECK(tracks[0].steps[f].bbox == moving_box(f));
        CHECK(tracks[0].steps[f].label == "car");
    }
}

TEST_CASE("frames must be consecutive") {
    Tracker tracker(colourless_params(320, 240));
    tracker.process_frame(0, {});
    CHECK_THROWS_AS(tracker.process_frame(2, {}), fusemot::InternalError);
}

TEST_CASE("a detection gap is bridged by good predictions") {
    Tracker tracker(colourless_params(640, 480));
    for (int f = 0; f < 30; ++f) {
        const bool visible = f < 10 || f >= 18;
        tracker.process_frame(f, visible ? std::vector<FusedObject>{det(moving_box(f))}
                                         : std::vector<FusedObject>{});
    }
    const auto tracks = tracker.finalize();
    REQUIRE(tracks.size() == 1);
    REQUIRE(tracks[0].steps.size() == 30);
    for (int f = 0; f < 30; ++f) {
        const auto& step = tracks[0].steps[f];
        CHECK(step.frame == f);
        if (f < 10 || f >= 18) {
            CHECK(step.state == StepState::D);
        } else {
            CHECK(step.state == StepState::GP);
            // Bridged boxes follow the motion model, so they stay close to
            // the true trajectory.
            CHECK(std::abs(step.bbox.center_x() - moving_box(f).center_x()) < 2.0);
        }
        CHECK(step.label == "car");
    }
}

TEST_CASE("termination removes the whole miss run") {
    TrackerParams params = colourless_params(640, 480);
    params.t_n = 6;
    Tracker tracker(params);
    for (int f = 0; f < 20; ++f)
        tracker.process_frame(f, f < 10 ? std::vector<FusedObject>{det(moving_box(f))}
                                        : std::vector<FusedObject>{});
    const auto tracks = tracker.finalize();
    REQUIRE(tracks.size() == 1);
    REQUIRE(tracks[0].steps.size() == 10);
    CHECK(tracks[0].steps.back().frame == 9);
    CHECK(tracks[0].steps.back().state == StepState::D);
}

TEST_CASE("a reappearing object gets a fresh id after termination") {
    TrackerParams params = colourless_params(640, 480);
    params.t_n = 5;
    Tracker tracker(params);
    for (int f = 0; f < 40; ++f) {
        const bool visible = f < 10 || f >= 25;
        tracker.process_frame(f, visible ? std::vector<FusedObject>{det(moving_box(f))}
                                         : std::vector<FusedObject>{});
    }
    const auto tracks = tracker.finalize();
    REQUIRE(tracks.size() == 2);
    CHECK(tracks[0].id == 1);
    CHECK(tracks[1].id == 2);
    CHECK(tracks[0].steps.front().frame == 0);
    CHECK(tracks[0].steps.back().frame == 9);
    CHECK(tracks[1].steps.front().frame == 25);
    CHECK(tracks[1].steps.back().frame == 39);
}

TEST_CASE("trailing predictions are trimmed when the video ends") {
    Tracker tracker(colourless_params(640, 480));
    for (int f = 0; f < 13; ++f)
        tracker.process_frame(f, f < 10 ? std::vector<FusedObject>{det(moving_box(f))}
                                        : std::vector<FusedObject>{});
    const auto tracks = tracker.finalize();
    REQUIRE(tracks.size() == 1);
    CHECK(tracks[0].steps.size() == 10);
    CHECK(tracks[0].steps.back().state == StepState::D);
}

TEST_CASE("fast motion marks a bad prediction then uncertain ones") {
    // A 10px box moving 30px per frame: after the detections stop, the
    // prediction immediately leaves the previous box. The bad fraction is
    // loosened so the 7 predicted steps survive finalize.
    TrackerParams params = colourless_params(2000, 200);
    params.t_n = 20;
    params.max_bad_fraction = 0.7;
    Tracker tracker(params);
    const auto fast_box = [](int frame) {
        return BoundingBox{30.0 * frame, 20, 30.0 * frame + 10, 30};
    };
    for (int f = 0; f < 5; ++f) tracker.process_frame(f, {det(fast_box(f))});
    for (int f = 5; f < 12; ++f) tracker.process_frame(f, {});
    tracker.process_frame(12, {det(fast_box(12))});

    const auto tracks = tracker.finalize();
    REQUIRE(tracks.size() == 1);
    REQUIRE(tracks[0].steps.size() == 13);
    CHECK(tracks[0].steps[5].state == StepState::BP);
    CHECK(tracks[0].steps[5].bbox == tracks[0].steps[4].bbox);
    for (int f = 6; f < 12; ++f) CHECK(tracks[0].steps[f].state == StepState::UP);
    CHECK(tracks[0].steps[12].state == StepState::D);
}

TEST_CASE("tracks dominated by unreliable predictions are dropped") {
    // Same shape as above: 5 D steps, 7 BP/UP steps, 1 closing D step puts
    // the bad fraction at 7/13.
    TrackerParams params = colourless_params(2000, 200);
    params.t_n = 20;
    const auto fast_box = [](int frame) {
        return BoundingBox{30.0 * frame, 20, 30.0 * frame + 10, 30};
    };
    const auto run = [&](double max_bad_fraction) {
        TrackerParams variant = params;
        variant.max_bad_fraction = max_bad_fraction;
        Tracker tracker(variant);
        for (int f = 0; f < 5; ++f) tracker.process_frame(f, {det(fast_box(f))});
        for (int f = 5; f < 12; ++f) tracker.process_frame(f, {});
        tracker.process_frame(12, {det(fast_box(12))});
        return tracker.finalize();
    };
    CHECK(run(0.5).empty());
    CHECK(run(0.6).size() == 1);
}

TEST_CASE("short tracks can be filtered at finalize") {
    TrackerParams params = colourless_params(320, 240);
    params.min_track_length = 3;
    Tracker tracker(params);
    tracker.process_frame(0, {det({10, 10, 30, 30}), det({200, 100, 240, 130})});
    tracker.process_frame(1, {det({10, 10, 30, 30})});
    tracker.process_frame(2, {det({10, 10, 30, 30})});
    const auto tracks = tracker.finalize();
    REQUIRE(tracks.size() == 1);
    CHECK(tracks[0].steps.size() == 3);
}

TEST_CASE("two crossing objects keep their ids") {
    Tracker tracker(colourless_params(640, 480));
    for (int f = 0; f < 40; ++f) {
        const double ax = 20 + 6.0 * f;
        const double bx = 300 - 6.0 * f;
        tracker.process_frame(f, {det({ax, 100, ax + 30, 124}, "car"),
                                  det({bx, 160, bx + 30, 184}, "bus")});
    }
    const auto tracks = tracker.finalize();
    REQUIRE(tracks.size() == 2);
    CHECK(tracks[0].steps.size() == 40);
    CHECK(tracks[1].steps.size() == 40);
    for (int f = 0; f < 40; ++f) {
        CHECK(tracks[0].steps[f].bbox.x_min == doctest::Approx(20 + 6.0 * f));
        CHECK(tracks[1].steps[f].bbox.x_min == doctest::Approx(300 - 6.0 * f));
    }
}

TEST_CASE("to_records flattens and orders by id then frame") {
    Tracker tracker(colourless_params(320, 240));
    tracker.process_frame(0, {det({10, 10, 30, 30}), det({200, 100, 240, 130})});
    tracker.process_frame(1, {det({10, 10, 30, 30}), det({200, 100, 240, 130})});
    const auto records = fusemot::to_records(tracker.finalize());
    REQUIRE(records.size() == 4);
    CHECK(records[0].track_id == 1);
    CHECK(records[0].frame == 0);
    CHECK(records[1].track_id == 1);
    CHECK(records[1].frame == 1);
    CHECK(records[2].track_id == 2);
    CHECK(records[3].frame == 1);
}

TEST_CASE("parameter validation") {
    TrackerParams params = colourless_params(320, 240);
    params.t_n = 0;
    CHECK_THROWS_AS(Tracker{params}, fusemot::DataError);
    params = colourless_params(320, 240);
    params.max_bad_fraction = 1.5;
    CHECK_THROWS_AS(Tracker{params}, fusemot::DataError);
    params = colourless_params(320, 240);
    params.association.gate = -0.1;
    CHECK_THROWS_AS(Tracker{params}, fusemot::DataError);
}

} // TEST_SUITE
