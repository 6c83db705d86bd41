#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "fusemot/histogram.hpp"
#include "fusemot/image.hpp"
#include "test_support.hpp"

using fusemot::ColourHistogram;
using fusemot::bhattacharyya_similarity;
using test_support::Rng;
using test_support::make_hist;

TEST_SUITE("histogram") {

TEST_CASE("similarity worked values") {
    CHECK(bhattacharyya_similarity(make_hist({1, 0}), make_hist({0, 1})) == 1.0);
    CHECK(bhattacharyya_similarity(make_hist({1, 0}), make_hist({0.5, 0.5})) ==
          doctest::Approx(std::sqrt(1.0 - std::sqrt(0.5))).epsilon(1e-13));
    CHECK(bhattacharyya_similarity(make_hist({3, 1, 7}), make_hist({3, 1, 7})) == 0.0);
}

TEST_CASE("similarity properties on random histograms") {
    Rng rng(404);
    for (int trial = 0; trial < 300; ++trial) {
        ColourHistogram g, h;
        for (int i = 0; i < 32; ++i) {
            g.bins.push_back(rng.uniform() < 0.3 ? 0.0 : rng.uniform(0, 100));
            h.bins.push_back(rng.uniform() < 0.3 ? 0.0 : rng.uniform(0, 100));
        }
        if (g.total() == 0) g.bins[0] = 1;
        if (h.total() == 0) h.bins[0] = 1;

        const double s = bhattacharyya_similarity(g, h);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        CHECK(std::abs(s - bhattacharyya_similarity(h, g)) <= 1e-12);
        CHECK(bhattacharyya_similarity(g, g) <= 1e-9);

        ColourHistogram g_scaled = g;
        for (auto& b : g_scaled.bins) b *= 7.25;
        CHECK(std::abs(bhattacharyya_similarity(g_scaled, h) - s) <= 1e-9);
        ColourHistogram h_scaled = h;
        for (auto& b : h_scaled.bins) b *= 0.03125;
        CHECK(std::abs(bhattacharyya_similarity(g, h_scaled) - s) <= 1e-9);
    }
}

TEST_CASE("similarity input validation") {
    CHECK_THROWS_AS(bhattacharyya_similarity(make_hist({1, 0}), make_hist({1, 0, 0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(bhattacharyya_similarity(make_hist({}), make_hist({})),
                    std::invalid_argument);
    CHECK_THROWS_AS(bhattacharyya_similarity(make_hist({0, 0}), make_hist({1, 0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(bhattacharyya_similarity(make_hist({-1, 2}), make_hist({1, 0})),
                    std::invalid_argument);
}

TEST_CASE("luminance endpoints") {
    CHECK(fusemot::luminance({0, 0, 0}) == 0);
    CHECK(fusemot::luminance({255, 255, 255}) == 255);
    CHECK(fusemot::luminance({100, 100, 100}) == 100);
}

TEST_CASE("histogram_from_region") {
    fusemot::Image img = fusemot::Image::filled(20, 20, {0, 0, 0});
    fusemot::fill_rect(img, {0, 0, 20, 10}, {255, 255, 255});

    SUBCASE("uniform patch concentrates in one bin") {
        const auto hist = fusemot::histogram_from_region(img, {0, 0, 20, 10}, 256);
        CHECK(hist.bins[255] == 200.0);
        CHECK(hist.total() == 200.0);
    }

    SUBCASE("half black half white splits evenly") {
        const auto hist = fusemot::histogram_from_region(img, {0, 0, 20, 20}, 256);
        CHECK(hist.bins[0] == 200.0);
        CHECK(hist.bins[255] == 200.0);
        CHECK(hist.total() == 400.0);
    }

    SUBCASE("mass equals the clipped pixel count") {
        const auto hist = fusemot::histogram_from_region(img, {-10, -10, 5, 5}, 16);
        CHECK(hist.total() == 25.0);
    }

    SUBCASE("sub-pixel box samples the pixel under its center") {
        const auto hist = fusemot::histogram_from_region(img, {3.4, 3.4, 3.6, 3.6}, 256);
        CHECK(hist.total() == 1.0);
        CHECK(hist.bins[255] == 1.0);
    }

    SUBCASE("bin widths cover the full intensity range") {
        const auto hist = fusemot::histogram_from_region(img, {0, 0, 20, 20}, 2);
        CHECK(hist.bins[0] == 200.0);
        CHECK(hist.bins[1] == 200.0);
    }
}

} // TEST_SUITE
