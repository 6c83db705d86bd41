#include <doctest.h>

#include "fusemot/config.hpp"
#include "fusemot/error.hpp"
#include "test_support.hpp"

using fusemot::RunConfig;
using test_support::TempDir;

TEST_SUITE("config") {

TEST_CASE("defaults are valid and map onto module parameters") {
    RunConfig config;
    config.validate();
    const auto fusion = config.fusion_params();
    CHECK(fusion.t_o == 0.05);
    CHECK(fusion.t_m == 0.5);
    CHECK(fusion.t_c == 0.5);
    CHECK(fusion.min_area == 64.0);
    CHECK(fusion.histogram_bins == 256);

    const auto tracker = config.tracker_params(640, 480);
    CHECK(tracker.association.weights.alpha == 0.6);
    CHECK(tracker.association.weights.beta == 0.3);
    CHECK(tracker.association.weights.gamma == 0.1);
    CHECK(tracker.association.t_d == 0.5);
    CHECK(tracker.association.gate == 0.9);
    CHECK(tracker.association.frame_width == 640);
    CHECK(tracker.t_p == 0.01);
    CHECK(tracker.t_n == 10);
    CHECK(tracker.max_bad_fraction == 0.5);
    CHECK(tracker.kalman.measurement_sigma == 1.0);
    CHECK(config.overlap == 0.3);
}

TEST_CASE("save and load round trip") {
    TempDir dir;
    RunConfig config;
    config.t_o = 0.1;
    config.alpha = 0.5;
    config.beta = 0.25;
    config.gamma = 0.25;
    config.t_n = 7;
    config.histogram_bins = 64;
    config.frame_width = 1920;
    config.save_file(dir.file("config.json"));

    const RunConfig loaded = RunConfig::load_file(dir.file("config.json"));
    CHECK(loaded.t_o == 0.1);
    CHECK(loaded.alpha == 0.5);
    CHECK(loaded.beta == 0.25);
    CHECK(loaded.gamma == 0.25);
    CHECK(loaded.t_n == 7);
    CHECK(loaded.histogram_bins == 64);
    CHECK(loaded.frame_width == 1920);
    CHECK(loaded.t_m == 0.5); // untouched fields keep their defaults
}

TEST_CASE("partial files override only the listed keys") {
    TempDir dir;
    test_support::write_text(dir.file("partial.json"), R"({"gate": 0.7, "t_n": 3})");
    const RunConfig loaded = RunConfig::load_file(dir.file("partial.json"));
    CHECK(loaded.gate == 0.7);
    CHECK(loaded.t_n == 3);
    CHECK(loaded.alpha == 0.6);
}

TEST_CASE("load failures") {
    TempDir dir;
    CHECK_THROWS_AS(RunConfig::load_file(dir.file("absent.json")), fusemot::DataError);

    test_support::write_text(dir.file("unknown.json"), R"({"t_oo": 0.1})");
    CHECK_THROWS_AS(RunConfig::load_file(dir.file("unknown.json")), fusemot::DataError);

    test_support::write_text(dir.file("type.json"), R"({"t_n": 2.5})");
    CHECK_THROWS_AS(RunConfig::load_file(dir.file("type.json")), fusemot::DataError);

    test_support::write_text(dir.file("garbage.json"), "not json");
    CHECK_THROWS_AS(RunConfig::load_file(dir.file("garbage.json")), fusemot::DataError);

    test_support::write_text(dir.file("array.json"), "[1,2]");
    CHECK_THROWS_AS(RunConfig::load_file(dir.file("array.json")), fusemot::DataError);
}

TEST_CASE("validate rejects out-of-range settings") {
    RunConfig config;
    config.alpha = 0.9; // weights no longer sum to 1
    CHECK_THROWS_AS(config.validate(), fusemot::DataError);

    config = {};
    config.overlap = 0.0;
    CHECK_THROWS_AS(config.validate(), fusemot::DataError);

    config = {};
    config.t_n = 0;
    CHECK_THROWS_AS(config.validate(), fusemot::DataError);
}

} // TEST_SUITE
