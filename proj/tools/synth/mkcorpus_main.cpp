// Generates a deterministic synthetic sign corpus in the usual benchmark
// layout (per-class training tracks + flat annotated test split), so the
// pipeline can be exercised without downloading a real dataset.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>

#include "sc/parallel.hpp"
#include "synth_corpus.hpp"

int main(int argc, char** argv) {
    scsynth::CorpusOptions opt;
    std::filesystem::path out = "corpus";
    int test_per_class = 25;
    int base_tracks = 4;
    int spread = 8;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--out") && i + 1 < argc) out = argv[++i];
        else if (!std::strcmp(argv[i], "--classes") && i + 1 < argc) opt.classes = std::atoi(argv[++i]);
        else if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) opt.seed = std::strtoull(argv[++i], nullptr, 10);
        else if (!std::strcmp(argv[i], "--base-tracks") && i + 1 < argc) base_tracks = std::atoi(argv[++i]);
        else if (!std::strcmp(argv[i], "--track-spread") && i + 1 < argc) spread = std::atoi(argv[++i]);
        else if (!std::strcmp(argv[i], "--test-per-class") && i + 1 < argc) test_per_class = std::atoi(argv[++i]);
        else {
            std::printf("usage: sc_mkcorpus [--out DIR] [--classes N] [--seed N] "
                        "[--base-tracks N] [--track-spread N] [--test-per-class N]\n");
            return 2;
        }
    }
    const std::vector<int> tracks = scsynth::default_track_counts(opt, base_tracks, spread);
    scsynth::write_training_corpus(out / "train", opt, tracks);
    scsynth::write_test_corpus(out / "test", opt, test_per_class);
    int total = 0;
    for (int t : tracks) total += t * opt.frames_per_track;
    std::printf("wrote %s: %d training images (%d classes), %d test images\n",
                out.string().c_str(), total, opt.classes, opt.classes * test_per_class);
    return 0;
}
