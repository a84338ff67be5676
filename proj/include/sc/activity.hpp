#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sc/cubic_fit.hpp"
#include "sc/threshold.hpp"

namespace sc {

// Per-image event statistics, all as fractions in [0, 1].
struct ActivityStats {
    double event_activity = 0.0;  // pixels with an event / (w * h)
    double on_fraction = 0.0;
    double off_fraction = 0.0;
    double active_rows = 0.0;  // rows with at least one event / h
};

ActivityStats activity(const TernaryEventImage& ev);

// One sweep point: unweighted means over the corpus at a single threshold.
struct SweepRow {
    double threshold = 0.0;
    double mean_event_activity = 0.0;
    double mean_active_rows = 0.0;
    double mean_on_fraction = 0.0;
    double mean_off_fraction = 0.0;
    int image_count = 0;
};

struct SweepTable {
    ThresholdMode mode = ThresholdMode::Absolute;
    std::vector<SweepRow> rows;
};

// Evaluates every threshold over every image and averages per threshold.
// Images are processed concurrently; the reduction runs in corpus order, so
// the table is identical for any worker count. Thresholds must be strictly
// increasing and valid for the mode.
SweepTable sweep(const std::vector<GrayImage>& corpus, ThresholdMode mode,
                 const std::vector<double>& thresholds);

// CSV with columns threshold,mean_event_activity,mean_active_rows,fitted_value
// (6 significant digits, '.' decimal separator). Without a fit the last
// column is left empty.
std::string emit_plot_data(const SweepTable& table, const std::optional<CubicFit>& fit);

// Minimal standalone SVG: sweep points plus the fitted cubic curve.
std::string emit_plot_svg(const SweepTable& table, const std::optional<CubicFit>& fit,
                          const std::string& title);

}  // namespace sc
