#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sc {

// 8-bit RGB raster, row-major, 3 bytes per pixel.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    bool valid() const {
        return width >= 1 && height >= 1 && pixels.size() == pixel_count() * 3;
    }
};

// Grayscale raster with intensities normalized to [0, 1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    bool valid() const;
};

// Signed spatial contrast per pixel, values in [-1, 1].
struct SCImage {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

// BT.601 luma, computed as (299*R + 587*G + 114*B) / 255000 so that the
// weights sum to one exactly.
GrayImage to_grayscale(const RgbImage& img);

// Mean of the in-bounds 8-neighbors of each pixel (center excluded):
// 3 neighbors at corners, 5 at edges, 8 in the interior. A 1x1 image has
// no neighbors and averages to 0.
GrayImage neighbor_average(const GrayImage& img);

// Pixel intensity minus its neighbor average.
SCImage spatial_contrast(const GrayImage& img);

}  // namespace sc
