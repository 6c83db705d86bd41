#include <doctest.h>

#include "fusemot/detection_io.hpp"
#include "fusemot/error.hpp"
#include "test_support.hpp"

using fusemot::DataError;
using fusemot::Detection;
using fusemot::SourceKind;
using test_support::TempDir;
using test_support::write_text;

TEST_SUITE("detection_io") {

TEST_CASE("empty file gives empty result") {
    TempDir dir;
    write_text(dir.file("d.jsonl"), "");
    CHECK(fusemot::read_detections(dir.file("d.jsonl")).empty());
    write_text(dir.file("g.jsonl"), "\n\n");
    CHECK(fusemot::read_ground_truth(dir.file("g.jsonl")).empty());
}

TEST_CASE("single detection parses field by field") {
    TempDir dir;
    write_text(dir.file("d.jsonl"),
               R"({"frame":0,"bbox":[0,0,10,10],"source":"mod","label":"car","confidence":0.9})"
               "\n");
    const auto by_frame = fusemot::read_detections(dir.file("d.jsonl"));
    REQUIRE(by_frame.size() == 1);
    const auto& det = by_frame.at(0).at(0);
    CHECK(det.frame == 0);
    CHECK(det.bbox == fusemot::BoundingBox{0, 0, 10, 10});
    CHECK(det.source == SourceKind::Mod);
    CHECK(det.label == "car");
    CHECK(det.confidence == 0.9);
    CHECK_FALSE(det.histogram.has_value());
}

TEST_CASE("frames group in ascending order, file order kept within a frame") {
    TempDir dir;
    write_text(dir.file("d.jsonl"),
               R"({"frame":2,"bbox":[0,0,1,1],"source":"imot","label":"dummy","confidence":0})" "\n"
               R"({"frame":0,"bbox":[0,0,2,2],"source":"imot","label":"dummy","confidence":0})" "\n"
               R"({"frame":0,"bbox":[0,0,3,3],"source":"imot","label":"dummy","confidence":0})" "\n"
               R"({"frame":1,"bbox":[0,0,4,4],"source":"imot","label":"dummy","confidence":0})" "\n");
    const auto by_frame = fusemot::read_detections(dir.file("d.jsonl"));
    REQUIRE(by_frame.size() == 3);
    auto it = by_frame.begin();
    CHECK(it->first == 0);
    CHECK(it->second.size() == 2);
    CHECK(it->second[0].bbox.x_max == 2);
    CHECK(it->second[1].bbox.x_max == 3);
    CHECK((++it)->first == 1);
    CHECK((++it)->first == 2);
}

TEST_CASE("malformed records name the line") {
    TempDir dir;
    const auto expect_line = [&](const std::string& body, const std::string& needle) {
        write_text(dir.file("bad.jsonl"), body);
        try {
            fusemot::read_detections(dir.file("bad.jsonl"));
            FAIL("expected DataError");
        } catch (const DataError& err) {
            const std::string what = err.what();
            CHECK(what.find(needle) != std::string::npos);
            CHECK(what.find("bad.jsonl") != std::string::npos);
        }
    };
    const std::string good =
        R"({"frame":0,"bbox":[0,0,1,1],"source":"imot","label":"dummy","confidence":0})" "\n";
    expect_line(good + "{not json\n", ":2");
    expect_line(good + good + R"({"frame":-1,"bbox":[0,0,1,1],"source":"imot","label":"dummy","confidence":0})" "\n", ":3");
    expect_line(R"({"frame":0,"bbox":[0,0,1,1],"source":"imot","label":"dummy","confidence":1.5})" "\n", ":1");
    expect_line(R"({"frame":0,"bbox":[5,0,1,1],"source":"imot","label":"dummy","confidence":0})" "\n", ":1");
    expect_line(R"({"frame":0,"bbox":[0,0,1],"source":"imot","label":"dummy","confidence":0})" "\n", ":1");
    expect_line(R"({"frame":0,"bbox":[0,0,1,1],"source":"radar","label":"dummy","confidence":0})" "\n", ":1");
    expect_line(R"({"frame":0,"bbox":[0,0,1,1],"source":"imot","confidence":0})" "\n", ":1");
}

TEST_CASE("missing file names the path") {
    try {
        fusemot::read_detections("/nonexistent/stream.jsonl");
        FAIL("expected DataError");
    } catch (const DataError& err) {
        CHECK(std::string(err.what()).find("/nonexistent/stream.jsonl") != std::string::npos);
    }
}

TEST_CASE("detections round trip, histograms included on request") {
    TempDir dir;
    std::map<int, std::vector<Detection>> by_frame;
    Detection det;
    det.frame = 4;
    det.bbox = {1.5, 2.25, 10, 20};
    det.source = SourceKind::Fused;
    det.label = "bus";
    det.confidence = 0.75;
    det.histogram = test_support::make_hist({1, 0, 3.5});
    by_frame[4].push_back(det);

    fusemot::write_detections(by_frame, dir.file("with.jsonl"), true);
    const auto loaded = fusemot::read_detections(dir.file("with.jsonl"));
    REQUIRE(loaded.at(4).size() == 1);
    CHECK(loaded.at(4)[0].bbox == det.bbox);
    CHECK(loaded.at(4)[0].source == SourceKind::Fused);
    REQUIRE(loaded.at(4)[0].histogram.has_value());
    CHECK(loaded.at(4)[0].histogram->bins == std::vector<double>{1, 0, 3.5});

    fusemot::write_detections(by_frame, dir.file("without.jsonl"), false);
    CHECK_FALSE(fusemot::read_detections(dir.file("without.jsonl")).at(4)[0].histogram.has_value());
}

TEST_CASE("ground truth round trip and duplicate rejection") {
    TempDir dir;
    std::vector<fusemot::GroundTruthEntry> gt = {
        {0, 1, {0, 0, 5, 5}},
        {0, 2, {10, 10, 20, 20}},
        {1, 1, {1, 0, 6, 5}},
    };
    fusemot::write_ground_truth(gt, dir.file("gt.jsonl"));
    const auto loaded = fusemot::read_ground_truth(dir.file("gt.jsonl"));
    REQUIRE(loaded.size() == 3);
    CHECK(loaded[1].id == 2);
    CHECK(loaded[2].bbox == fusemot::BoundingBox{1, 0, 6, 5});

    write_text(dir.file("dup.jsonl"),
               R"({"frame":3,"id":7,"bbox":[0,0,1,1]})" "\n"
               R"({"frame":3,"id":7,"bbox":[2,2,3,3]})" "\n");
    CHECK_THROWS_AS(fusemot::read_ground_truth(dir.file("dup.jsonl")), DataError);
}

TEST_CASE("tracks round trip preserving states") {
    TempDir dir;
    std::vector<fusemot::TrackRecord> records = {
        {1, 0, {0, 0, 5, 5}, fusemot::StepState::D},
        {1, 1, {1, 0, 6, 5}, fusemot::StepState::GP},
        {2, 1, {9, 9, 12, 12}, fusemot::StepState::BP},
        {2, 2, {9, 9, 12, 12}, fusemot::StepState::UP},
    };
    fusemot::write_tracks(records, dir.file("t.jsonl"));
    const auto loaded = fusemot::read_tracks(dir.file("t.jsonl"));
    REQUIRE(loaded.size() == 4);
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(loaded[i].track_id == records[i].track_id);
        CHECK(loaded[i].frame == records[i].frame);
        CHECK(loaded[i].bbox == records[i].bbox);
        CHECK(loaded[i].state == records[i].state);
    }

    test_support::write_text(dir.file("badstate.jsonl"),
                             R"({"track":1,"frame":0,"bbox":[0,0,1,1],"state":"XX"})" "\n");
    CHECK_THROWS_AS(fusemot::read_tracks(dir.file("badstate.jsonl")), DataError);
}

TEST_CASE("frame pattern store") {
    TempDir dir;
    const fusemot::Image frame = fusemot::Image::filled(6, 4, {1, 2, 3});
    fusemot::save_image(frame, dir.file("f_000042.ppm"));

    fusemot::PatternFrameStore store((dir.path() / "f_%06d.ppm").string(), 42);
    CHECK(store.width() == 6);
    CHECK(store.height() == 4);
    CHECK(store.path_for(7) == (dir.path() / "f_000007.ppm").string());
    CHECK(store.load(42).pixels == frame.pixels);
    CHECK_THROWS_AS(store.load(43), DataError); // no such frame on disk

    CHECK_THROWS_AS(fusemot::PatternFrameStore("noindex.png", 0), DataError);
    CHECK_THROWS_AS(fusemot::PatternFrameStore("two%d_%d.png", 0), DataError);

    fusemot::save_image(fusemot::Image::filled(9, 9, {0, 0, 0}), dir.file("f_000043.ppm"));
    CHECK_THROWS_AS(store.load(43), DataError); // dimension mismatch
}

} // TEST_SUITE
