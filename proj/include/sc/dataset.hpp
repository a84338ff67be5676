#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sc/codec.hpp"
#include "sc/image.hpp"
#include "sc/threshold.hpp"

namespace sc {

// Pixel bounding box, half-open: [x1, x2) x [y1, y2).
struct Roi {
    int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    bool operator==(const Roi&) const = default;
};

// Affine augmentation draw: rotation in [-20, 20] degrees, shift and zoom
// fractions in [-0.2, 0.2].
struct AugmentParams {
    double rotation_deg = 0.0;
    double shift_x_frac = 0.0;
    double shift_y_frac = 0.0;
    double zoom_frac = 0.0;
    bool operator==(const AugmentParams&) const = default;
};

struct SampleRecord {
    std::filesystem::path path;
    int class_id = 0;
    std::optional<int> track_id;
    std::optional<int> frame_id;
    std::optional<Roi> roi;
    std::optional<AugmentParams> augment;  // set on synthetic balanced copies
};

struct DatasetIndex {
    std::string split;
    int class_count = 0;
    std::vector<SampleRecord> records;
};

// A sample-level problem found while indexing or converting.
struct SampleIssue {
    std::filesystem::path path;
    std::string what;
};

// Builds a deterministic index (records sorted lexicographically by path).
// Two layouts are recognized:
//  - per-class subdirectories named by integer id, each optionally holding a
//    semicolon-separated GT-*.csv with fields
//    Filename;Width;Height;Roi.X1;Roi.Y1;Roi.X2;Roi.Y2;ClassId
//  - a flat directory with one such annotation csv covering all images.
// Track and frame ids are parsed from the 00000_00000 filename convention.
// Unreadable or inconsistent samples are collected into issues, not dropped
// silently. Throws EmptyCorpus when nothing indexable is found.
DatasetIndex load_index(const std::filesystem::path& root, const std::string& split = "",
                        std::vector<SampleIssue>* issues = nullptr);

// Keeps every keep_every-th frame of each track (frame_id % keep_every == 0);
// records without a track pass through.
DatasetIndex thin_tracks(const DatasetIndex& index, int keep_every);

// Uniform class histogram: classes above target are undersampled by a seeded
// uniform draw without replacement; classes below are filled with synthetic
// copies carrying seeded AugmentParams. Originals come before synthetics
// within each class.
DatasetIndex balance(const DatasetIndex& index, int target, std::uint64_t seed);

// Affine warp: zoom about the center by 1+zoom_frac, rotate about the center
// by rotation_deg, then translate by (shift_x_frac*w, shift_y_frac*h).
// Bilinear sampling, out-of-frame reads clamp to the nearest edge pixel.
RgbImage augment(const RgbImage& img, const AugmentParams& p);

RgbImage crop(const RgbImage& img, const Roi& roi);

// Bilinear resample to side x side (centers-aligned sampling).
GrayImage resize(const GrayImage& img, int side);

// Balanced-index round trip for the CLI `balance` subcommand.
void write_index_csv(const std::filesystem::path& path, const DatasetIndex& index);
DatasetIndex read_index_csv(const std::filesystem::path& path);

struct ConversionReport {
    int total = 0;
    int converted = 0;
    std::vector<SampleIssue> failures;
    double mean_event_activity = 0.0;
    double mean_active_rows = 0.0;
    double mean_on_fraction = 0.0;
    double mean_off_fraction = 0.0;
    // ideal_bits(RGB, alpha=1) / ideal_bits(SC, alpha=active rows), averaged
    // over samples with at least one active row.
    double mean_ideal_reduction = 0.0;
    int ideal_reduction_count = 0;
    // total RGB bits / total measured SCEV bits over converted samples
    double measured_reduction = 0.0;
    int side = 0;
    ThresholdSpec spec;

    std::string to_text() const;
};

// Full conversion: load, crop to ROI, apply stored augmentation, grayscale,
// resize, spatial contrast, threshold, pack. Writes one .scev per sample
// (named by index position) plus manifest.csv and summary.txt into out_dir.
// Per-sample failures are recorded and conversion continues. Samples are
// processed concurrently; all outputs are written in index order.
ConversionReport convert_corpus(const DatasetIndex& index, const ThresholdSpec& spec, int side,
                                const std::filesystem::path& out_dir);

// Reads back a converted dataset directory (manifest.csv + .scev files).
struct LabeledEvents {
    std::vector<TernaryEventImage> images;
    std::vector<int> labels;
    int class_count = 0;
};
LabeledEvents load_converted(const std::filesystem::path& dir);

}  // namespace sc
