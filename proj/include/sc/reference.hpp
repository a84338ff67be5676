#pragma once

#include "sc/image.hpp"
#include "sc/threshold.hpp"

namespace sc::ref {

// Naive single-threaded implementations of the pixel kernels. These are the
// oracles the unit tests compare against and the baseline for sc_bench; they
// deliberately share no code with the parallel versions in sc::.

GrayImage to_grayscale(const RgbImage& img);
GrayImage neighbor_average(const GrayImage& img);
SCImage spatial_contrast(const GrayImage& img);
TernaryEventImage apply_absolute(const SCImage& sc, double rho);
TernaryEventImage apply_relative(const SCImage& sc, const GrayImage& gray, double beta);

struct Counts {
    long long on = 0;
    long long off = 0;
    long long active_rows = 0;
};
Counts count_events(const TernaryEventImage& ev);

}  // namespace sc::ref
