#pragma once

#include <filesystem>

#include "sc/image.hpp"
#include "sc/threshold.hpp"

namespace sc {

// Loads a PNG, binary PPM (P6) or binary PGM (P5) file, dispatching on the
// file's magic bytes. Grayscale and palette inputs are expanded to RGB;
// 16-bit inputs are rejected with UnreadableImage.
RgbImage load_image(const std::filesystem::path& path);

// 8-bit binary PGM (P5); intensities quantized by round(v * 255).
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

// Event rendering as PGM with the mapping -1 -> 0, 0 -> 128, +1 -> 255.
void write_event_pgm(const std::filesystem::path& path, const TernaryEventImage& ev);

// 8-bit binary PPM (P6).
void write_ppm(const std::filesystem::path& path, const RgbImage& img);

}  // namespace sc
