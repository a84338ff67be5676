#pragma once

#include <cstdint>
#include <vector>

#include "sc/image.hpp"

namespace sc {

enum class ThresholdMode : std::uint8_t {
    Absolute = 0,
    Relative = 1,
};

const char* to_string(ThresholdMode mode);

// Threshold that produced an event image: rho in [0, 1] for Absolute,
// beta >= 0 for Relative.
struct ThresholdSpec {
    ThresholdMode mode = ThresholdMode::Absolute;
    double value = 0.0;

    bool operator==(const ThresholdSpec&) const = default;
};

// Throws ThresholdOutOfRange when value violates the mode's range.
void validate(const ThresholdSpec& spec);

// Per-pixel event polarity: +1 ON, -1 OFF, 0 no event.
struct TernaryEventImage {
    int width = 0;
    int height = 0;
    std::vector<std::int8_t> events;
    ThresholdSpec spec;

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    std::int8_t at(int x, int y) const { return events[static_cast<std::size_t>(y) * width + x]; }
    bool operator==(const TernaryEventImage&) const = default;
};

// Ternarize against a fixed threshold: +1 if v >= rho, else -1 if v <= -rho,
// else 0. The ON clause is checked first, so rho = 0 maps v = 0 to +1.
TernaryEventImage apply_absolute(const SCImage& sc, double rho);

// Ternarize the contrast-to-intensity ratio: +1 if sc/gray >= beta, else -1
// if sc/gray <= -beta, else 0. Pixels with gray == 0 never emit an event.
TernaryEventImage apply_relative(const SCImage& sc, const GrayImage& gray, double beta);

// spatial_contrast followed by the thresholding pass selected by spec.
TernaryEventImage encode_events(const GrayImage& img, const ThresholdSpec& spec);

// 8-bit rendering with the fixed mapping -1 -> 0, 0 -> 128, +1 -> 255.
std::vector<std::uint8_t> render_events(const TernaryEventImage& ev);

}  // namespace sc
