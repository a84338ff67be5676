#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sc/dataset.hpp"
#include "sc/image.hpp"

namespace scsynth {

// Deterministic generator for sign corpora laid out like the usual
// traffic-sign benchmarks: per-class directories of 30-frame tracks with
// GT-<class>.csv annotations for training, a flat annotated directory for
// testing. Class geometry (outline shape, inner glyph) is a function of the
// class id; tracks vary in size, pose, illumination and sensor noise.
struct CorpusOptions {
    int classes = 10;
    int frames_per_track = 30;
    int min_canvas = 56;
    int max_canvas = 120;
    std::uint64_t seed = 1;
    double min_brightness = 0.38;
    double max_brightness = 1.0;
    double min_noise = 0.020;  // additive channel noise sigma, [0,1] intensity units
    double max_noise = 0.045;
};

// Varied per-class track counts (sizes straddle the usual balancing target
// when multiplied by 30 frames).
std::vector<int> default_track_counts(const CorpusOptions& opt, int base_tracks = 8,
                                      int spread = 16);

struct RenderedFrame {
    sc::RgbImage image;
    sc::Roi roi;
};

// Renders one frame of one track; fully determined by (options.seed,
// class_id, track_id, frame).
RenderedFrame render_frame(const CorpusOptions& opt, int class_id, int track_id, int frame);

// root/<class>/GT-<class>.csv plus <track>_<frame>.ppm files.
void write_training_corpus(const std::filesystem::path& root, const CorpusOptions& opt,
                           std::span<const int> tracks_per_class);

// Flat root/NNNNN.ppm files plus GT-test.csv; track ids are offset so test
// sign instances never appear in the training corpus.
void write_test_corpus(const std::filesystem::path& root, const CorpusOptions& opt,
                       int images_per_class);

}  // namespace scsynth
