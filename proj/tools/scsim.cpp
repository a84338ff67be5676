#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sc/activity.hpp"
#include "sc/codec.hpp"
#include "sc/cubic_fit.hpp"
#include "sc/dataset.hpp"
#include "sc/errors.hpp"
#include "sc/image_io.hpp"
#include "sc/metrics.hpp"
#include "sc/parallel.hpp"
#include "sc/threshold.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string input;
    std::string output;
    std::string mode = "absolute";
    double threshold = 0.02;
    std::string thresholds;  // "a,b,c" or "start:stop:step"
    int side = 48;
    int target = 400;
    std::uint64_t seed = 1;
    int k = 5;
    int workers = 0;
    int track_stride = 3;
    std::string split;
    std::string index_file;
    std::string train_dir;
    std::string test_dir;
    std::string svg_path;
    std::string csv_path;
    int limit = 0;
    bool graded = false;
};

sc::ThresholdMode parse_mode(const std::string& mode) {
    if (mode == "absolute") return sc::ThresholdMode::Absolute;
    if (mode == "relative") return sc::ThresholdMode::Relative;
    throw CLI::ValidationError("--mode", "must be 'absolute' or 'relative'");
}

std::vector<double> parse_threshold_list(const std::string& text, sc::ThresholdMode mode) {
    std::vector<double> out;
    if (text.empty()) {
        // Defaults mirror the plotted operating ranges of the two modes.
        if (mode == sc::ThresholdMode::Absolute) {
            for (int i = 1; i <= 8; ++i) out.push_back(0.005 * i);
        } else {
            for (int i = 1; i <= 8; ++i) out.push_back(0.025 * i);
        }
        return out;
    }
    if (text.find(':') != std::string::npos) {
        double start = 0, stop = 0, step = 0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0)
            throw sc::Error("bad threshold range '" + text + "', expected start:stop:step");
        for (double v = start; v <= stop + step * 1e-9; v += step) out.push_back(v);
        return out;
    }
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        if (!token.empty()) out.push_back(std::stod(token));
    }
    if (out.empty()) throw sc::Error("no thresholds in '" + text + "'");
    return out;
}

std::vector<fs::path> collect_images(const fs::path& dir, int limit) {
    if (!fs::is_directory(dir)) throw sc::IoError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".ppm" || ext == ".pgm" || ext == ".png") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (limit > 0 && static_cast<int>(files.size()) > limit) files.resize(limit);
    if (files.empty()) throw sc::EmptyCorpus("no images under " + dir.string());
    return files;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw sc::IoError("cannot write " + path.string());
    out << text;
    if (!out) throw sc::IoError("short write: " + path.string());
}

std::string stream_summary(const sc::EncodedStream& stream) {
    const sc::TernaryEventImage ev = sc::unpack(stream);
    const sc::ActivityStats stats = sc::activity(ev);
    const std::uint64_t wire = sc::measured_bits(stream);
    const std::uint64_t ideal = sc::ideal_bits(
        {ev.width, ev.height, 1, 2, static_cast<double>(stream.rows.size()) / ev.height});
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "width:          %d\n"
                  "height:         %d\n"
                  "mode:           %s\n"
                  "threshold:      %g\n"
                  "event activity: %.6g\n"
                  "on fraction:    %.6g\n"
                  "off fraction:   %.6g\n"
                  "active rows:    %.6g (%zu of %d)\n"
                  "ideal bits:     %llu\n"
                  "measured bits:  %llu\n",
                  ev.width, ev.height, sc::to_string(ev.spec.mode), ev.spec.value,
                  stats.event_activity, stats.on_fraction, stats.off_fraction, stats.active_rows,
                  stream.rows.size(), ev.height, static_cast<unsigned long long>(ideal),
                  static_cast<unsigned long long>(wire));
    return buf;
}

sc::DatasetIndex load_index_for_cli(const Options& opt) {
    if (!opt.index_file.empty()) return sc::read_index_csv(opt.index_file);
    std::vector<sc::SampleIssue> issues;
    sc::DatasetIndex index = sc::load_index(opt.input, opt.split, &issues);
    for (const sc::SampleIssue& issue : issues)
        std::cerr << "warning: " << issue.path.generic_string() << ": " << issue.what << '\n';
    if (opt.track_stride > 1) index = sc::thin_tracks(index, opt.track_stride);
    return index;
}

int cmd_encode(const Options& opt) {
    const sc::ThresholdSpec spec{parse_mode(opt.mode), opt.threshold};
    const sc::RgbImage rgb = sc::load_image(opt.input);
    const sc::TernaryEventImage ev = sc::encode_events(sc::to_grayscale(rgb), spec);
    const sc::EncodedStream stream = sc::pack(ev);
    sc::write_scev(opt.output, stream);
    write_text(opt.output + ".txt", stream_summary(stream));
    std::cout << "wrote " << opt.output << " (" << sc::measured_bits(stream) / 8 << " bytes)\n";
    return 0;
}

int cmd_decode(const Options& opt) {
    const sc::EncodedStream stream = sc::read_scev(opt.input);
    sc::write_event_pgm(opt.output, sc::unpack(stream));
    std::cout << "wrote " << opt.output << '\n';
    return 0;
}

int cmd_render(const Options& opt) {
    const sc::ThresholdSpec spec{parse_mode(opt.mode), opt.threshold};
    const sc::RgbImage rgb = sc::load_image(opt.input);
    sc::write_event_pgm(opt.output, sc::encode_events(sc::to_grayscale(rgb), spec));
    std::cout << "wrote " << opt.output << '\n';
    return 0;
}

int cmd_stats(const Options& opt) {
    std::string text;
    if (fs::path(opt.input).extension() == ".scev") {
        text = stream_summary(sc::read_scev(opt.input));
    } else {
        const sc::ThresholdSpec spec{parse_mode(opt.mode), opt.threshold};
        const sc::RgbImage rgb = sc::load_image(opt.input);
        text = stream_summary(sc::pack(sc::encode_events(sc::to_grayscale(rgb), spec)));
    }
    std::cout << text;
    if (!opt.output.empty()) write_text(opt.output, text);
    return 0;
}

int cmd_sweep(const Options& opt) {
    const sc::ThresholdMode mode = parse_mode(opt.mode);
    const std::vector<double> thresholds = parse_threshold_list(opt.thresholds, mode);
    std::vector<sc::GrayImage> corpus;
    for (const fs::path& file : collect_images(opt.input, opt.limit)) {
        sc::GrayImage gray = sc::to_grayscale(sc::load_image(file));
        corpus.push_back(opt.side > 0 ? sc::resize(gray, opt.side) : std::move(gray));
    }
    const sc::SweepTable table = sc::sweep(corpus, mode, thresholds);

    std::vector<double> xs, ys;
    for (const sc::SweepRow& row : table.rows) {
        xs.push_back(row.threshold);
        ys.push_back(row.mean_event_activity);
    }
    std::optional<sc::CubicFit> fit;
    if (xs.size() >= 4) {
        fit = sc::fit_cubic(xs, ys);
        std::printf("cubic fit: c0=%.6g c1=%.6g c2=%.6g c3=%.6g rms=%.3g R2=%.6f\n",
                    fit->coefficients[0], fit->coefficients[1], fit->coefficients[2],
                    fit->coefficients[3], fit->rms_residual, fit->r_squared);
    }
    const std::string csv = sc::emit_plot_data(table, fit);
    if (opt.output.empty()) {
        std::cout << csv;
    } else {
        write_text(opt.output, csv);
        std::cout << "wrote " << opt.output << " (" << table.rows.size() << " thresholds, "
                  << corpus.size() << " images)\n";
    }
    if (!opt.svg_path.empty()) {
        write_text(opt.svg_path,
                   sc::emit_plot_svg(table, fit,
                                     std::string("mean event activity vs ") + opt.mode +
                                         " threshold"));
        std::cout << "wrote " << opt.svg_path << '\n';
    }
    return 0;
}

int cmd_balance(const Options& opt) {
    sc::DatasetIndex index = load_index_for_cli(opt);
    const sc::DatasetIndex balanced = sc::balance(index, opt.target, opt.seed);
    sc::write_index_csv(opt.output, balanced);
    std::vector<int> histogram(balanced.class_count, 0);
    for (const sc::SampleRecord& rec : balanced.records) ++histogram[rec.class_id];
    std::cout << "wrote " << opt.output << ": " << balanced.records.size() << " records, "
              << balanced.class_count << " classes x " << opt.target << '\n';
    return 0;
}

int cmd_convert(const Options& opt) {
    if (opt.input.empty() && opt.index_file.empty())
        throw sc::Error("convert: give either --root or --index");
    const sc::ThresholdSpec spec{parse_mode(opt.mode), opt.threshold};
    const sc::DatasetIndex index = load_index_for_cli(opt);
    const sc::ConversionReport report = sc::convert_corpus(index, spec, opt.side, opt.output);
    std::cout << report.to_text();
    return report.failures.empty() ? 0 : 1;
}

int cmd_classify(const Options& opt) {
    const sc::LabeledEvents train = sc::load_converted(opt.train_dir);
    const sc::LabeledEvents test = sc::load_converted(opt.test_dir);
    const int n_classes = std::max(train.class_count, test.class_count);
    const sc::EvalResult result = sc::evaluate(train.images, train.labels, test.images,
                                               test.labels, n_classes, opt.k, opt.graded);
    char head[128];
    std::snprintf(head, sizeof(head), "accuracy: %.6g (%zu test, %zu train, k=%d)\n",
                  result.accuracy, test.images.size(), train.images.size(), opt.k);
    const std::string text = head + result.report.to_text();
    std::cout << text;
    if (!opt.output.empty()) write_text(opt.output, text);
    if (!opt.csv_path.empty()) write_text(opt.csv_path, result.report.to_csv());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scsim: spatial-contrast event simulator, codec and dataset tools"};
    app.require_subcommand(1);
    Options opt;

    app.add_option("--workers", opt.workers,
                   "worker threads for parallel stages (0 = all cores, 1 = serial)")
        ->capture_default_str();

    const auto add_mode = [&](CLI::App* cmd) {
        cmd->add_option("--mode", opt.mode, "thresholding mode: absolute | relative")
            ->capture_default_str();
    };
    const auto add_threshold = [&](CLI::App* cmd) {
        cmd->add_option("--threshold", opt.threshold, "threshold value (rho or beta)")
            ->capture_default_str();
    };

    CLI::App* encode = app.add_subcommand("encode", "image -> .scev event stream (plus .txt summary)");
    encode->add_option("--in", opt.input, "input image (PNG/PPM/PGM)")->required();
    encode->add_option("--out", opt.output, "output .scev path")->required();
    add_mode(encode);
    add_threshold(encode);

    CLI::App* decode = app.add_subcommand("decode", ".scev -> PGM event rendering");
    decode->add_option("--in", opt.input, "input .scev path")->required();
    decode->add_option("--out", opt.output, "output .pgm path")->required();

    CLI::App* render = app.add_subcommand("render", "image -> PGM event rendering");
    render->add_option("--in", opt.input, "input image (PNG/PPM/PGM)")->required();
    render->add_option("--out", opt.output, "output .pgm path")->required();
    add_mode(render);
    add_threshold(render);

    CLI::App* stats = app.add_subcommand("stats", "activity statistics of an image or .scev stream");
    stats->add_option("--in", opt.input, "input image or .scev")->required();
    stats->add_option("--out", opt.output, "optional output text file");
    add_mode(stats);
    add_threshold(stats);

    CLI::App* sweepc = app.add_subcommand("sweep", "threshold sweep over an image directory, "
                                                   "with cubic fit and CSV output");
    sweepc->add_option("--in", opt.input, "corpus directory")->required();
    sweepc->add_option("--out", opt.output, "output CSV path (stdout when omitted)");
    add_mode(sweepc);
    sweepc->add_option("--thresholds", opt.thresholds,
                       "comma list 'a,b,c' or range 'start:stop:step' (defaults: absolute "
                       "0.005:0.04:0.005, relative 0.025:0.2:0.025)");
    sweepc->add_option("--side", opt.side, "resize images to side x side; 0 keeps native size")
        ->capture_default_str();
    sweepc->add_option("--limit", opt.limit, "cap the number of corpus images (0 = no cap)");
    sweepc->add_option("--svg", opt.svg_path, "optional SVG chart output");

    CLI::App* balancec = app.add_subcommand("balance", "emit a balanced dataset index CSV");
    balancec->add_option("--root", opt.input, "dataset root directory")->required();
    balancec->add_option("--split", opt.split, "optional split subdirectory");
    balancec->add_option("--out", opt.output, "output index CSV")->required();
    balancec->add_option("--target", opt.target, "samples per class after balancing")
        ->capture_default_str();
    balancec->add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
    balancec->add_option("--track-stride", opt.track_stride,
                         "keep every Nth frame of each track (1 keeps all)")
        ->capture_default_str();

    CLI::App* convert = app.add_subcommand("convert", "convert a sign corpus into a .scev dataset");
    convert->add_option("--root", opt.input, "dataset root directory");
    convert->add_option("--split", opt.split, "optional split subdirectory");
    convert->add_option("--index", opt.index_file, "balanced index CSV (overrides --root scan)");
    convert->add_option("--out", opt.output, "output dataset directory")->required();
    add_mode(convert);
    add_threshold(convert);
    convert->add_option("--side", opt.side, "network input side; images are cropped to the ROI "
                                            "and resized to side x side")
        ->capture_default_str();
    convert->add_option("--track-stride", opt.track_stride,
                        "keep every Nth frame of each track (1 keeps all)")
        ->capture_default_str();

    CLI::App* classify = app.add_subcommand("classify",
                                            "k-NN evaluation over two converted datasets");
    classify->add_option("--train", opt.train_dir, "converted training dataset directory")
        ->required();
    classify->add_option("--test", opt.test_dir, "converted test dataset directory")->required();
    classify->add_option("--k", opt.k, "number of neighbors")->capture_default_str();
    classify->add_flag("--graded", opt.graded, "count ON/OFF disagreement as cost 2");
    classify->add_option("--out", opt.output, "optional report text file");
    classify->add_option("--csv", opt.csv_path, "optional per-class CSV file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    sc::set_worker_count(opt.workers);
    try {
        if (app.got_subcommand(encode)) return cmd_encode(opt);
        if (app.got_subcommand(decode)) return cmd_decode(opt);
        if (app.got_subcommand(render)) return cmd_render(opt);
        if (app.got_subcommand(stats)) return cmd_stats(opt);
        if (app.got_subcommand(sweepc)) return cmd_sweep(opt);
        if (app.got_subcommand(balancec)) return cmd_balance(opt);
        if (app.got_subcommand(convert)) return cmd_convert(opt);
        if (app.got_subcommand(classify)) return cmd_classify(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
