#include "sc/threshold.hpp"

#include <cmath>

#include "sc/errors.hpp"

namespace sc {

const char* to_string(ThresholdMode mode) {
    return mode == ThresholdMode::Absolute ? "absolute" : "relative";
}

void validate(const ThresholdSpec& spec) {
    if (spec.mode == ThresholdMode::Absolute) {
        if (!(spec.value >= 0.0 && spec.value <= 1.0))
            throw ThresholdOutOfRange("absolute threshold must be in [0, 1]");
    } else {
        if (!(spec.value >= 0.0) || std::isinf(spec.value))
            throw ThresholdOutOfRange("relative threshold must be finite and >= 0");
    }
}

TernaryEventImage apply_absolute(const SCImage& sc, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0))
        throw ThresholdOutOfRange("absolute threshold must be in [0, 1]");
    TernaryEventImage out;
    out.width = sc.width;
    out.height = sc.height;
    out.spec = {ThresholdMode::Absolute, rho};
    out.events.resize(sc.pixel_count());
    const double* v = sc.values.data();
    std::int8_t* e = out.events.data();
    const std::int64_t n = static_cast<std::int64_t>(sc.pixel_count());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        e[i] = v[i] >= rho ? std::int8_t{1} : (v[i] <= -rho ? std::int8_t{-1} : std::int8_t{0});
    }
    return out;
}

TernaryEventImage apply_relative(const SCImage& sc, const GrayImage& gray, double beta) {
    if (sc.width != gray.width || sc.height != gray.height)
        throw DimensionMismatch("apply_relative: contrast and grayscale shapes differ");
    if (!(beta >= 0.0) || std::isinf(beta))
        throw ThresholdOutOfRange("relative threshold must be finite and >= 0");
    TernaryEventImage out;
    out.width = sc.width;
    out.height = sc.height;
    out.spec = {ThresholdMode::Relative, beta};
    out.events.resize(sc.pixel_count());
    const double* v = sc.values.data();
    const double* g = gray.pixels.data();
    std::int8_t* e = out.events.data();
    const std::int64_t n = static_cast<std::int64_t>(sc.pixel_count());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        std::int8_t ev = 0;
        if (g[i] > 0.0) {
            const double ratio = v[i] / g[i];
            ev = ratio >= beta ? std::int8_t{1} : (ratio <= -beta ? std::int8_t{-1} : std::int8_t{0});
        }
        e[i] = ev;
    }
    return out;
}

TernaryEventImage encode_events(const GrayImage& img, const ThresholdSpec& spec) {
    validate(spec);
    SCImage sc = spatial_contrast(img);
    if (spec.mode == ThresholdMode::Absolute) return apply_absolute(sc, spec.value);
    return apply_relative(sc, img, spec.value);
}

std::vector<std::uint8_t> render_events(const TernaryEventImage& ev) {
    std::vector<std::uint8_t> out(ev.pixel_count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = ev.events[i] < 0 ? 0 : (ev.events[i] > 0 ? 255 : 128);
    }
    return out;
}

}  // namespace sc
