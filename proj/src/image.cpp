#include "sc/image.hpp"

#include "sc/errors.hpp"

namespace sc {

bool GrayImage::valid() const {
    if (width < 1 || height < 1 || pixels.size() != pixel_count()) return false;
    for (double v : pixels) {
        if (!(v >= 0.0 && v <= 1.0)) return false;
    }
    return true;
}

GrayImage to_grayscale(const RgbImage& img) {
    if (!img.valid()) throw DimensionMismatch("to_grayscale: invalid RGB image");
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.pixels.resize(img.pixel_count());
    const std::uint8_t* src = img.pixels.data();
    double* dst = out.pixels.data();
    const std::int64_t n = static_cast<std::int64_t>(img.pixel_count());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const std::uint32_t r = src[3 * i + 0];
        const std::uint32_t g = src[3 * i + 1];
        const std::uint32_t b = src[3 * i + 2];
        dst[i] = static_cast<double>(299u * r + 587u * g + 114u * b) / 255000.0;
    }
    return out;
}

GrayImage neighbor_average(const GrayImage& img) {
    if (img.width < 1 || img.height < 1 || img.pixels.size() != img.pixel_count())
        throw DimensionMismatch("neighbor_average: invalid image");
    const int w = img.width;
    const int h = img.height;
    GrayImage out;
    out.width = w;
    out.height = h;
    out.pixels.assign(img.pixel_count(), 0.0);
    if (w == 1 && h == 1) return out;

    const double* in = img.pixels.data();
    double* dst = out.pixels.data();
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        const bool y_interior = (y > 0 && y < h - 1);
        for (int x = 0; x < w; ++x) {
            if (y_interior && x > 0 && x < w - 1) {
                const double* r0 = in + static_cast<std::size_t>(y - 1) * w + x;
                const double* r1 = in + static_cast<std::size_t>(y) * w + x;
                const double* r2 = in + static_cast<std::size_t>(y + 1) * w + x;
                const double sum = r0[-1] + r0[0] + r0[1] + r1[-1] + r1[1] + r2[-1] + r2[0] + r2[1];
                dst[static_cast<std::size_t>(y) * w + x] = sum / 8.0;
            } else {
                double sum = 0.0;
                int count = 0;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = x + dx;
                        const int ny = y + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        sum += in[static_cast<std::size_t>(ny) * w + nx];
                        ++count;
                    }
                }
                dst[static_cast<std::size_t>(y) * w + x] = count > 0 ? sum / count : 0.0;
            }
        }
    }
    return out;
}

SCImage spatial_contrast(const GrayImage& img) {
    GrayImage avg = neighbor_average(img);
    SCImage out;
    out.width = img.width;
    out.height = img.height;
    out.values.resize(img.pixel_count());
    const double* a = img.pixels.data();
    const double* b = avg.pixels.data();
    double* dst = out.values.data();
    const std::int64_t n = static_cast<std::int64_t>(img.pixel_count());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        dst[i] = a[i] - b[i];
    }
    return out;
}

}  // namespace sc
