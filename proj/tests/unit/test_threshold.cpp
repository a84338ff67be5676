#include <doctest.h>

#include <limits>

#include "sc/errors.hpp"
#include "sc/reference.hpp"
#include "sc/threshold.hpp"
#include "test_util.hpp"

using namespace sc;

namespace {

// 3x3 all-0.5 with a 1.0 center: contrast is +0.5 center, -1/6 corners,
// -0.1 edges (worked out in test_image.cpp).
GrayImage bright_center_image() {
    GrayImage img;
    img.width = 3;
    img.height = 3;
    img.pixels = {0.5, 0.5, 0.5, 0.5, 1.0, 0.5, 0.5, 0.5, 0.5};
    return img;
}

}  // namespace

TEST_CASE("apply_absolute: no contrast, no events") {
    SCImage sc_img;
    sc_img.width = 4;
    sc_img.height = 3;
    sc_img.values.assign(12, 0.0);
    const TernaryEventImage ev = apply_absolute(sc_img, 0.01);
    for (auto e : ev.events) CHECK(e == 0);
}

TEST_CASE("apply_absolute: worked 3x3 with bright center") {
    // Contrast values: center +0.5, corners -1/6, edges 0.5 - 3.0/5. The
    // edge value is one ulp above -0.1 in doubles, and comparisons carry no
    // epsilon slack, so at rho = 0.1 the corners fire OFF and the edges
    // stay silent. Expected counts come from the scalar reference loop.
    const SCImage contrast = spatial_contrast(bright_center_image());
    const TernaryEventImage ev = apply_absolute(contrast, 0.1);
    CHECK(ev == ref::apply_absolute(contrast, 0.1));
    CHECK(ev.at(1, 1) == 1);
    CHECK(ev.at(0, 0) == -1);  // corners: -1/6 <= -0.1
    CHECK(ev.at(2, 0) == -1);
    CHECK(ev.at(0, 2) == -1);
    CHECK(ev.at(2, 2) == -1);
    CHECK(ev.at(1, 0) == 0);  // edges: one ulp shy of the threshold
    CHECK(ev.at(0, 1) == 0);
    CHECK(ev.at(2, 1) == 0);
    CHECK(ev.at(1, 2) == 0);

    // at any rho below the edge magnitude the full ring fires OFF
    const TernaryEventImage ring = apply_absolute(contrast, 0.09);
    int off = 0;
    for (auto e : ring.events) off += e == -1;
    CHECK(off == 8);
    CHECK(ring.at(1, 1) == 1);
}

TEST_CASE("apply_absolute: boundary comparisons are inclusive") {
    // exactly representable contrast at exactly the threshold
    SCImage contrast;
    contrast.width = 3;
    contrast.height = 1;
    contrast.values = {0.25, -0.25, 0.2499999};
    const TernaryEventImage ev = apply_absolute(contrast, 0.25);
    CHECK(ev.events[0] == 1);   // 0.25 >= 0.25
    CHECK(ev.events[1] == -1);  // -0.25 <= -0.25
    CHECK(ev.events[2] == 0);
}

TEST_CASE("apply_absolute: rho = 0 maps zero contrast to ON by case order") {
    SCImage sc_img;
    sc_img.width = 2;
    sc_img.height = 1;
    sc_img.values = {0.0, -0.125};
    const TernaryEventImage ev = apply_absolute(sc_img, 0.0);
    CHECK(ev.events[0] == 1);   // 0 >= 0 wins before 0 <= -0
    CHECK(ev.events[1] == -1);
    for (auto e : ev.events) CHECK(e != 0);  // no pixel maps to 0 at rho = 0
}

TEST_CASE("apply_absolute: threshold range enforced") {
    SCImage sc_img;
    sc_img.width = 1;
    sc_img.height = 1;
    sc_img.values = {0.0};
    CHECK_THROWS_AS(apply_absolute(sc_img, -0.01), ThresholdOutOfRange);
    CHECK_THROWS_AS(apply_absolute(sc_img, 1.01), ThresholdOutOfRange);
    CHECK_NOTHROW(apply_absolute(sc_img, 1.0));
}

TEST_CASE("apply_relative: worked 3x3 ratios at beta = 0.3") {
    const GrayImage gray = bright_center_image();
    const TernaryEventImage ev = apply_relative(spatial_contrast(gray), gray, 0.3);
    CHECK(ev.at(1, 1) == 1);  // 0.5 / 1.0 = 0.5 >= 0.3
    int on = 0, off = 0, none = 0;
    for (auto e : ev.events) {
        on += e == 1;
        off += e == -1;
        none += e == 0;
    }
    CHECK(on == 1);    // center
    CHECK(off == 4);   // corners, ratio -1/3 <= -0.3
    CHECK(none == 4);  // edges, ratio -0.2
}

TEST_CASE("apply_relative: beta above 1 yields no ON events") {
    Rng rng(606);
    for (int trial = 0; trial < 50; ++trial) {
        const GrayImage img = testutil::structured_gray(16, 16, rng);
        const TernaryEventImage ev = apply_relative(spatial_contrast(img), img, 1.5);
        for (auto e : ev.events) CHECK(e != 1);
    }
}

TEST_CASE("apply_relative: zero-intensity pixels never emit") {
    GrayImage gray;
    gray.width = 3;
    gray.height = 1;
    gray.pixels = {0.0, 0.8, 0.0};
    const SCImage contrast = spatial_contrast(gray);
    for (double beta : {0.0, 0.1, 2.0}) {
        const TernaryEventImage ev = apply_relative(contrast, gray, beta);
        CHECK(ev.events[0] == 0);
        CHECK(ev.events[2] == 0);
    }
}

TEST_CASE("apply_relative: dimension and range errors") {
    GrayImage gray;
    gray.width = 2;
    gray.height = 2;
    gray.pixels = {0.1, 0.2, 0.3, 0.4};
    SCImage wrong;
    wrong.width = 3;
    wrong.height = 2;
    wrong.values.assign(6, 0.0);
    CHECK_THROWS_AS(apply_relative(wrong, gray, 0.1), DimensionMismatch);
    CHECK_THROWS_AS(apply_relative(spatial_contrast(gray), gray, -0.5), ThresholdOutOfRange);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(apply_relative(spatial_contrast(gray), gray, inf), ThresholdOutOfRange);
}

TEST_CASE("encode_events: composition matches the two-step pipeline") {
    Rng rng(707);
    for (int trial = 0; trial < 30; ++trial) {
        const GrayImage img = testutil::structured_gray(12, 9, rng);
        const SCImage contrast = spatial_contrast(img);
        CHECK(encode_events(img, {ThresholdMode::Absolute, 0.1}) ==
              apply_absolute(contrast, 0.1));
        CHECK(encode_events(img, {ThresholdMode::Relative, 0.3}) ==
              apply_relative(contrast, img, 0.3));
    }
}

TEST_CASE("encode_events: constant image emits nothing") {
    GrayImage img;
    img.width = 6;
    img.height = 5;
    img.pixels.assign(img.pixel_count(), 0.42);
    const TernaryEventImage ev = encode_events(img, {ThresholdMode::Absolute, 0.01});
    for (auto e : ev.events) CHECK(e == 0);
}

TEST_CASE("encode_events: worked 3x3 under both modes") {
    const GrayImage img = bright_center_image();
    // rho = 0.09 sits below the edge contrast, so the whole ring fires
    const TernaryEventImage abs_ev = encode_events(img, {ThresholdMode::Absolute, 0.09});
    int abs_on = 0, abs_off = 0;
    for (auto e : abs_ev.events) {
        abs_on += e == 1;
        abs_off += e == -1;
    }
    CHECK(abs_on == 1);
    CHECK(abs_off == 8);

    const TernaryEventImage rel_ev = encode_events(img, {ThresholdMode::Relative, 0.3});
    int rel_on = 0, rel_off = 0, rel_none = 0;
    for (auto e : rel_ev.events) {
        rel_on += e == 1;
        rel_off += e == -1;
        rel_none += e == 0;
    }
    CHECK(rel_on == 1);   // center, ratio 0.5
    CHECK(rel_off == 4);  // corners, ratio -1/3
    CHECK(rel_none == 4); // edges, ratio -0.2
}

TEST_CASE("event-set monotonicity in the threshold, both modes") {
    Rng rng(808);
    for (int trial = 0; trial < 40; ++trial) {
        const GrayImage img = testutil::structured_gray(20, 15, rng);
        const SCImage contrast = spatial_contrast(img);
        for (int step = 0; step < 5; ++step) {
            const double lo = 0.002 + 0.01 * step;
            const double hi = lo + rng.uniform(0.001, 0.05);
            const TernaryEventImage small_thr = apply_absolute(contrast, lo);
            const TernaryEventImage large_thr = apply_absolute(contrast, hi);
            for (std::size_t i = 0; i < small_thr.events.size(); ++i) {
                if (large_thr.events[i] != 0) CHECK(small_thr.events[i] == large_thr.events[i]);
            }
            const TernaryEventImage small_rel = apply_relative(contrast, img, lo * 10);
            const TernaryEventImage large_rel = apply_relative(contrast, img, hi * 10);
            for (std::size_t i = 0; i < small_rel.events.size(); ++i) {
                if (large_rel.events[i] != 0) CHECK(small_rel.events[i] == large_rel.events[i]);
            }
        }
    }
}

TEST_CASE("thresholding is deterministic and matches the serial reference") {
    Rng rng(909);
    for (int trial = 0; trial < 50; ++trial) {
        const int w = 1 + static_cast<int>(rng.pick(24));
        const int h = 1 + static_cast<int>(rng.pick(24));
        const GrayImage img = testutil::random_gray(w, h, rng);
        const SCImage contrast = spatial_contrast(img);
        const double rho = rng.uniform();
        const double beta = rng.uniform(0.0, 2.0);
        CHECK(apply_absolute(contrast, rho) == ref::apply_absolute(contrast, rho));
        CHECK(apply_relative(contrast, img, beta) == ref::apply_relative(contrast, img, beta));
        CHECK(apply_absolute(contrast, rho) == apply_absolute(contrast, rho));
        for (auto e : apply_absolute(contrast, rho).events) CHECK((e >= -1 && e <= 1));
        for (auto e : apply_relative(contrast, img, beta).events) CHECK((e >= -1 && e <= 1));
    }
}

TEST_CASE("absolute rho = 1 only fires on saturated contrast") {
    GrayImage img;
    img.width = 3;
    img.height = 1;
    img.pixels = {1.0, 0.0, 1.0};
    // end pixels: avg of the single 0.0 neighbor -> contrast exactly +1
    // center: avg of two 1.0 neighbors -> contrast exactly -1
    const TernaryEventImage saturated = apply_absolute(spatial_contrast(img), 1.0);
    CHECK(saturated.events[0] == 1);
    CHECK(saturated.events[1] == -1);
    CHECK(saturated.events[2] == 1);

    GrayImage mild;
    mild.width = 3;
    mild.height = 1;
    mild.pixels = {0.9, 0.1, 0.9};  // |contrast| at most 0.8
    const TernaryEventImage quiet = apply_absolute(spatial_contrast(mild), 1.0);
    for (auto e : quiet.events) CHECK(e == 0);
}

TEST_CASE("render_events uses the fixed 0/128/255 mapping") {
    TernaryEventImage ev;
    ev.width = 3;
    ev.height = 1;
    ev.events = {-1, 0, 1};
    const std::vector<std::uint8_t> bytes = render_events(ev);
    CHECK(bytes == std::vector<std::uint8_t>{0, 128, 255});
}
