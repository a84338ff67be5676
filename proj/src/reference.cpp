#include "sc/reference.hpp"

#include "sc/errors.hpp"

namespace sc::ref {

GrayImage to_grayscale(const RgbImage& img) {
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.pixels.resize(img.pixel_count());
    for (std::size_t i = 0; i < out.pixels.size(); ++i) {
        const std::uint32_t r = img.pixels[3 * i + 0];
        const std::uint32_t g = img.pixels[3 * i + 1];
        const std::uint32_t b = img.pixels[3 * i + 2];
        out.pixels[i] = static_cast<double>(299u * r + 587u * g + 114u * b) / 255000.0;
    }
    return out;
}

GrayImage neighbor_average(const GrayImage& img) {
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.pixels.assign(img.pixel_count(), 0.0);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double sum = 0.0;
            int count = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (nx < 0 || nx >= img.width || ny < 0 || ny >= img.height) continue;
                    sum += img.at(nx, ny);
                    ++count;
                }
            }
            out.at(x, y) = count > 0 ? sum / count : 0.0;
        }
    }
    return out;
}

SCImage spatial_contrast(const GrayImage& img) {
    GrayImage avg = sc::ref::neighbor_average(img);
    SCImage out;
    out.width = img.width;
    out.height = img.height;
    out.values.resize(img.pixel_count());
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] = img.pixels[i] - avg.pixels[i];
    }
    return out;
}

TernaryEventImage apply_absolute(const SCImage& sc, double rho) {
    TernaryEventImage out;
    out.width = sc.width;
    out.height = sc.height;
    out.spec = {ThresholdMode::Absolute, rho};
    out.events.resize(sc.pixel_count());
    for (std::size_t i = 0; i < out.events.size(); ++i) {
        if (sc.values[i] >= rho) {
            out.events[i] = 1;
        } else if (sc.values[i] <= -rho) {
            out.events[i] = -1;
        } else {
            out.events[i] = 0;
        }
    }
    return out;
}

TernaryEventImage apply_relative(const SCImage& sc, const GrayImage& gray, double beta) {
    if (sc.width != gray.width || sc.height != gray.height)
        throw DimensionMismatch("ref::apply_relative: shapes differ");
    TernaryEventImage out;
    out.width = sc.width;
    out.height = sc.height;
    out.spec = {ThresholdMode::Relative, beta};
    out.events.resize(sc.pixel_count());
    for (std::size_t i = 0; i < out.events.size(); ++i) {
        out.events[i] = 0;
        if (gray.pixels[i] > 0.0) {
            const double ratio = sc.values[i] / gray.pixels[i];
            if (ratio >= beta) {
                out.events[i] = 1;
            } else if (ratio <= -beta) {
                out.events[i] = -1;
            }
        }
    }
    return out;
}

Counts count_events(const TernaryEventImage& ev) {
    Counts c;
    for (int y = 0; y < ev.height; ++y) {
        bool active = false;
        for (int x = 0; x < ev.width; ++x) {
            const std::int8_t e = ev.at(x, y);
            if (e > 0) ++c.on;
            if (e < 0) ++c.off;
            if (e != 0) active = true;
        }
        if (active) ++c.active_rows;
    }
    return c;
}

}  // namespace sc::ref
