#include "sc/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "sc/activity.hpp"
#include "sc/errors.hpp"
#include "sc/format.hpp"
#include "sc/image_io.hpp"
#include "sc/rng.hpp"

namespace fs = std::filesystem;

namespace sc {

namespace {

constexpr double kMaxRotationDeg = 20.0;
constexpr double kMaxShiftFrac = 0.2;
constexpr double kMaxZoomFrac = 0.2;

std::string fmt17(double v) { return format_general(v, 17); }

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".ppm" || ext == ".pgm" || ext == ".png";
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// 00013_00007 -> track 13, frame 7.
void parse_track_frame(SampleRecord& rec) {
    const std::string stem = rec.path.stem().string();
    if (stem.size() != 11 || stem[5] != '_') return;
    const std::string track = stem.substr(0, 5);
    const std::string frame = stem.substr(6, 5);
    if (!all_digits(track) || !all_digits(frame)) return;
    rec.track_id = std::stoi(track);
    rec.frame_id = std::stoi(frame);
}

std::vector<std::string> split_on(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

struct AnnotationRow {
    std::string filename;
    int width = 0, height = 0;
    Roi roi;
    int class_id = 0;
};

// Filename;Width;Height;Roi.X1;Roi.Y1;Roi.X2;Roi.Y2;ClassId
std::vector<AnnotationRow> parse_annotation_csv(const fs::path& csv,
                                                std::vector<SampleIssue>* issues) {
    std::ifstream in(csv);
    if (!in) throw IoError("cannot open " + csv.string());
    std::vector<AnnotationRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> f = split_on(line, ';');
        if (!f.empty() && f[0] == "Filename") continue;  // header
        if (f.size() < 8) {
            if (issues) issues->push_back({csv, "short annotation line: " + line});
            continue;
        }
        try {
            AnnotationRow row;
            row.filename = f[0];
            row.width = std::stoi(f[1]);
            row.height = std::stoi(f[2]);
            row.roi = {std::stoi(f[3]), std::stoi(f[4]), std::stoi(f[5]), std::stoi(f[6])};
            row.class_id = std::stoi(f[7]);
            rows.push_back(std::move(row));
        } catch (const std::exception&) {
            if (issues) issues->push_back({csv, "unparseable annotation line: " + line});
        }
    }
    return rows;
}

bool roi_ok(const Roi& r, int w, int h) {
    return r.x1 >= 0 && r.y1 >= 0 && r.x1 < r.x2 && r.y1 < r.y2 && r.x2 <= w && r.y2 <= h;
}

bool file_readable_image(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return false;
    unsigned char sig[2] = {0, 0};
    in.read(reinterpret_cast<char*>(sig), 2);
    if (in.gcount() < 2) return false;
    if (sig[0] == 'P' && (sig[1] == '5' || sig[1] == '6')) return true;
    if (sig[0] == 0x89 && sig[1] == 'P') return true;
    return false;
}

void index_directory(const fs::path& dir, std::optional<int> forced_class,
                     std::vector<SampleRecord>& out, std::vector<SampleIssue>* issues) {
    std::vector<fs::path> images;
    std::vector<fs::path> csvs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (is_image_file(entry.path())) {
            images.push_back(entry.path());
        } else if (entry.path().extension() == ".csv") {
            csvs.push_back(entry.path());
        }
    }
    std::sort(images.begin(), images.end());
    std::sort(csvs.begin(), csvs.end());

    std::map<std::string, AnnotationRow> annotated;
    for (const fs::path& csv : csvs) {
        for (AnnotationRow& row : parse_annotation_csv(csv, issues)) {
            annotated[row.filename] = std::move(row);
        }
    }
    if (!forced_class && csvs.empty() && !images.empty())
        throw MissingAnnotation("flat corpus without annotation csv: " + dir.string());

    for (const fs::path& img : images) {
        if (!file_readable_image(img)) {
            if (issues) issues->push_back({img, "unreadable image"});
            continue;
        }
        SampleRecord rec;
        rec.path = img;
        parse_track_frame(rec);
        const auto it = annotated.find(img.filename().string());
        if (it != annotated.end()) {
            rec.class_id = it->second.class_id;
            if (roi_ok(it->second.roi, it->second.width, it->second.height)) {
                rec.roi = it->second.roi;
            } else if (issues) {
                issues->push_back({img, "annotation roi out of bounds, ignored"});
            }
            annotated.erase(it);
        } else if (forced_class) {
            rec.class_id = *forced_class;
        } else {
            if (issues) issues->push_back({img, "image not covered by annotation csv"});
            continue;
        }
        out.push_back(std::move(rec));
    }
    if (issues) {
        for (const auto& [name, row] : annotated)
            issues->push_back({dir / name, "annotated image missing on disk"});
    }
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

std::uint8_t sample_channel_bilinear(const RgbImage& img, double sx, double sy, int ch) {
    const int w = img.width;
    const int h = img.height;
    const double fx0 = std::floor(sx);
    const double fy0 = std::floor(sy);
    const double fx = sx - fx0;
    const double fy = sy - fy0;
    const auto cx = [&](int v) { return v < 0 ? 0 : (v >= w ? w - 1 : v); };
    const auto cy = [&](int v) { return v < 0 ? 0 : (v >= h ? h - 1 : v); };
    const int x0 = cx(static_cast<int>(fx0));
    const int x1 = cx(static_cast<int>(fx0) + 1);
    const int y0 = cy(static_cast<int>(fy0));
    const int y1 = cy(static_cast<int>(fy0) + 1);
    const auto px = [&](int x, int y) {
        return static_cast<double>(img.pixels[(static_cast<std::size_t>(y) * w + x) * 3 + ch]);
    };
    const double v = (1.0 - fx) * (1.0 - fy) * px(x0, y0) + fx * (1.0 - fy) * px(x1, y0) +
                     (1.0 - fx) * fy * px(x0, y1) + fx * fy * px(x1, y1);
    const double r = std::round(v);
    return static_cast<std::uint8_t>(r < 0.0 ? 0.0 : (r > 255.0 ? 255.0 : r));
}

}  // namespace

DatasetIndex load_index(const fs::path& root, const std::string& split,
                        std::vector<SampleIssue>* issues) {
    fs::path dir = root;
    if (!split.empty()) dir /= split;
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());

    std::vector<std::pair<int, fs::path>> class_dirs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory() && all_digits(entry.path().filename().string()))
            class_dirs.emplace_back(std::stoi(entry.path().filename().string()), entry.path());
    }
    std::sort(class_dirs.begin(), class_dirs.end());

    DatasetIndex index;
    index.split = split;
    if (!class_dirs.empty()) {
        for (const auto& [class_id, class_dir] : class_dirs)
            index_directory(class_dir, class_id, index.records, issues);
    } else {
        index_directory(dir, std::nullopt, index.records, issues);
    }
    if (index.records.empty()) throw EmptyCorpus("no samples under " + dir.string());

    std::sort(index.records.begin(), index.records.end(),
              [](const SampleRecord& a, const SampleRecord& b) {
                  return a.path.generic_string() < b.path.generic_string();
              });
    int max_class = 0;
    for (const SampleRecord& r : index.records) {
        if (r.class_id < 0) throw LabelOutOfRange("negative class id in " + r.path.string());
        max_class = std::max(max_class, r.class_id);
    }
    index.class_count = max_class + 1;
    return index;
}

DatasetIndex thin_tracks(const DatasetIndex& index, int keep_every) {
    if (keep_every < 1) throw Error("thin_tracks: keep_every must be >= 1");
    DatasetIndex out;
    out.split = index.split;
    out.class_count = index.class_count;
    for (const SampleRecord& rec : index.records) {
        if (!rec.track_id || !rec.frame_id || *rec.frame_id % keep_every == 0)
            out.records.push_back(rec);
    }
    return out;
}

DatasetIndex balance(const DatasetIndex& index, int target, std::uint64_t seed) {
    if (target < 1) throw Error("balance: target must be >= 1");
    std::vector<std::vector<std::size_t>> by_class(index.class_count);
    for (std::size_t i = 0; i < index.records.size(); ++i)
        by_class[index.records[i].class_id].push_back(i);
    for (int c = 0; c < index.class_count; ++c) {
        if (by_class[c].empty())
            throw EmptyCorpus("balance: class " + std::to_string(c) + " has no samples");
    }

    DatasetIndex out;
    out.split = index.split;
    out.class_count = index.class_count;
    out.records.reserve(static_cast<std::size_t>(index.class_count) * target);

    for (int c = 0; c < index.class_count; ++c) {
        std::vector<std::size_t>& members = by_class[c];
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
        const std::size_t n = members.size();
        if (n >= static_cast<std::size_t>(target)) {
            // Partial Fisher-Yates, then restore original relative order.
            for (std::size_t i = 0; i < static_cast<std::size_t>(target); ++i) {
                const std::size_t j = i + rng.pick(n - i);
                std::swap(members[i], members[j]);
            }
            std::vector<std::size_t> chosen(members.begin(), members.begin() + target);
            std::sort(chosen.begin(), chosen.end());
            for (std::size_t idx : chosen) out.records.push_back(index.records[idx]);
        } else {
            for (std::size_t idx : members) out.records.push_back(index.records[idx]);
            for (std::size_t i = n; i < static_cast<std::size_t>(target); ++i) {
                SampleRecord synth = index.records[members[rng.pick(n)]];
                AugmentParams p;
                p.rotation_deg = rng.uniform(-kMaxRotationDeg, kMaxRotationDeg);
                p.shift_x_frac = rng.uniform(-kMaxShiftFrac, kMaxShiftFrac);
                p.shift_y_frac = rng.uniform(-kMaxShiftFrac, kMaxShiftFrac);
                p.zoom_frac = rng.uniform(-kMaxZoomFrac, kMaxZoomFrac);
                synth.augment = p;
                out.records.push_back(std::move(synth));
            }
        }
    }
    return out;
}

RgbImage augment(const RgbImage& img, const AugmentParams& p) {
    if (!img.valid()) throw DimensionMismatch("augment: invalid image");
    const int w = img.width;
    const int h = img.height;
    const double cx = (w - 1) / 2.0;
    const double cy = (h - 1) / 2.0;
    const double theta = p.rotation_deg * 3.14159265358979323846 / 180.0;
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);
    const double scale = 1.0 + p.zoom_frac;
    const double tx = p.shift_x_frac * w;
    const double ty = p.shift_y_frac * h;

    RgbImage out;
    out.width = w;
    out.height = h;
    out.pixels.resize(img.pixels.size());
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            // Invert translate, rotate, zoom (applied forward in that
            // composition order about the image center).
            const double ux = x - tx - cx;
            const double uy = y - ty - cy;
            const double rx = cos_t * ux + sin_t * uy;
            const double ry = -sin_t * ux + cos_t * uy;
            const double sx = rx / scale + cx;
            const double sy = ry / scale + cy;
            for (int ch = 0; ch < 3; ++ch) {
                out.pixels[(static_cast<std::size_t>(y) * w + x) * 3 + ch] =
                    sample_channel_bilinear(img, sx, sy, ch);
            }
        }
    }
    return out;
}

RgbImage crop(const RgbImage& img, const Roi& roi) {
    if (!img.valid()) throw DimensionMismatch("crop: invalid image");
    if (!roi_ok(roi, img.width, img.height))
        throw DimensionMismatch("crop: roi out of bounds");
    RgbImage out;
    out.width = roi.x2 - roi.x1;
    out.height = roi.y2 - roi.y1;
    out.pixels.resize(out.pixel_count() * 3);
    for (int y = 0; y < out.height; ++y) {
        const std::uint8_t* src =
            img.pixels.data() + ((static_cast<std::size_t>(y + roi.y1) * img.width) + roi.x1) * 3;
        std::uint8_t* dst = out.pixels.data() + static_cast<std::size_t>(y) * out.width * 3;
        std::copy(src, src + static_cast<std::size_t>(out.width) * 3, dst);
    }
    return out;
}

GrayImage resize(const GrayImage& img, int side) {
    if (side < 1) throw Error("resize: side must be >= 1");
    if (img.width < 1 || img.height < 1 || img.pixels.size() != img.pixel_count())
        throw DimensionMismatch("resize: invalid image");
    GrayImage out;
    out.width = side;
    out.height = side;
    out.pixels.resize(out.pixel_count());
    const double x_ratio = static_cast<double>(img.width) / side;
    const double y_ratio = static_cast<double>(img.height) / side;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < side; ++j) {
        const double sy = (j + 0.5) * y_ratio - 0.5;
        const double fy0 = std::floor(sy);
        const double fy = sy - fy0;
        const int y0 = std::clamp(static_cast<int>(fy0), 0, img.height - 1);
        const int y1 = std::clamp(static_cast<int>(fy0) + 1, 0, img.height - 1);
        for (int i = 0; i < side; ++i) {
            const double sx = (i + 0.5) * x_ratio - 0.5;
            const double fx0 = std::floor(sx);
            const double fx = sx - fx0;
            const int x0 = std::clamp(static_cast<int>(fx0), 0, img.width - 1);
            const int x1 = std::clamp(static_cast<int>(fx0) + 1, 0, img.width - 1);
            const double v = (1.0 - fx) * (1.0 - fy) * img.at(x0, y0) +
                             fx * (1.0 - fy) * img.at(x1, y0) + (1.0 - fx) * fy * img.at(x0, y1) +
                             fx * fy * img.at(x1, y1);
            out.at(i, j) = clamp01(v);
        }
    }
    return out;
}

void write_index_csv(const fs::path& path, const DatasetIndex& index) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << "path,class_id,track_id,frame_id,roi_x1,roi_y1,roi_x2,roi_y2,"
           "rotation_deg,shift_x_frac,shift_y_frac,zoom_frac,augmented\n";
    for (const SampleRecord& r : index.records) {
        out << r.path.generic_string() << ',' << r.class_id << ',';
        if (r.track_id) out << *r.track_id;
        out << ',';
        if (r.frame_id) out << *r.frame_id;
        out << ',';
        if (r.roi)
            out << r.roi->x1 << ',' << r.roi->y1 << ',' << r.roi->x2 << ',' << r.roi->y2;
        else
            out << ",,,";
        out << ',';
        if (r.augment) {
            out << fmt17(r.augment->rotation_deg) << ',' << fmt17(r.augment->shift_x_frac) << ','
                << fmt17(r.augment->shift_y_frac) << ',' << fmt17(r.augment->zoom_frac) << ",1\n";
        } else {
            out << ",,,,0\n";
        }
    }
    if (!out) throw IoError("short write: " + path.string());
}

DatasetIndex read_index_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    DatasetIndex index;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (first) {
            first = false;
            if (line.rfind("path,", 0) == 0) continue;
        }
        const std::vector<std::string> f = split_on(line, ',');
        if (f.size() != 13) throw IoError("malformed index line: " + line);
        SampleRecord r;
        r.path = f[0];
        r.class_id = std::stoi(f[1]);
        if (!f[2].empty()) r.track_id = std::stoi(f[2]);
        if (!f[3].empty()) r.frame_id = std::stoi(f[3]);
        if (!f[4].empty())
            r.roi = Roi{std::stoi(f[4]), std::stoi(f[5]), std::stoi(f[6]), std::stoi(f[7])};
        if (f[12] == "1")
            r.augment = AugmentParams{std::stod(f[8]), std::stod(f[9]), std::stod(f[10]),
                                      std::stod(f[11])};
        index.records.push_back(std::move(r));
    }
    for (const SampleRecord& r : index.records)
        index.class_count = std::max(index.class_count, r.class_id + 1);
    return index;
}

std::string ConversionReport::to_text() const {
    std::ostringstream out;
    out << "samples total:        " << total << '\n';
    out << "converted:            " << converted << '\n';
    out << "failed:               " << failures.size() << '\n';
    out << "side:                 " << side << '\n';
    out << "mode:                 " << to_string(spec.mode) << '\n';
    out << "threshold:            " << fmt17(spec.value) << '\n';
    if (converted > 0) {
        out << "mean event activity:  " << fmt17(mean_event_activity) << '\n';
        out << "mean active rows:     " << fmt17(mean_active_rows) << '\n';
        out << "mean on fraction:     " << fmt17(mean_on_fraction) << '\n';
        out << "mean off fraction:    " << fmt17(mean_off_fraction) << '\n';
        out << "mean ideal reduction: " << fmt17(mean_ideal_reduction) << "  (24-bit RGB vs 2-bit"
            << " row-gated, over " << ideal_reduction_count << " samples with active rows)\n";
        out << "measured reduction:   " << fmt17(measured_reduction)
            << "  (total RGB bits / total SCEV bits incl. headers)\n";
    }
    for (const SampleIssue& f : failures)
        out << "failure: " << f.path.generic_string() << ": " << f.what << '\n';
    return out.str();
}

ConversionReport convert_corpus(const DatasetIndex& index, const ThresholdSpec& spec, int side,
                                const fs::path& out_dir) {
    validate(spec);
    if (side < 1) throw Error("convert_corpus: side must be >= 1");
    fs::create_directories(out_dir);

    struct SampleResult {
        bool ok = false;
        std::string scev_file;
        ActivityStats stats;
        std::uint64_t wire_bits = 0;
        long long active_row_count = 0;
        std::string error;
    };
    const std::size_t n = index.records.size();
    std::vector<SampleResult> results(n);

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const SampleRecord& rec = index.records[i];
        SampleResult& res = results[i];
        try {
            RgbImage rgb = load_image(rec.path);
            if (rec.roi) rgb = crop(rgb, *rec.roi);
            if (rec.augment) rgb = augment(rgb, *rec.augment);
            const GrayImage gray = resize(to_grayscale(rgb), side);
            const TernaryEventImage ev = encode_events(gray, spec);
            const EncodedStream stream = pack(ev);
            char name[32];
            std::snprintf(name, sizeof(name), "%06lld.scev", static_cast<long long>(i));
            write_scev(out_dir / name, stream);
            res.scev_file = name;
            res.stats = activity(ev);
            res.wire_bits = measured_bits(stream);
            res.active_row_count = static_cast<long long>(stream.rows.size());
            res.ok = true;
        } catch (const std::exception& e) {
            res.error = e.what();
        }
    }

    ConversionReport report;
    report.total = static_cast<int>(n);
    report.side = side;
    report.spec = spec;

    std::ofstream manifest(out_dir / "manifest.csv", std::ios::trunc);
    if (!manifest) throw IoError("cannot write manifest.csv");
    manifest << "source_path,scev_file,class_id,event_activity,on_fraction,off_fraction,"
                "active_rows,measured_bits\n";

    const double rgb_bits = 24.0 * side * side;  // 3 channels x 8 bits, all rows
    double sum_ea = 0.0, sum_ar = 0.0, sum_on = 0.0, sum_off = 0.0, sum_reduction = 0.0;
    std::uint64_t sum_wire_bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const SampleResult& res = results[i];
        if (!res.ok) {
            report.failures.push_back({index.records[i].path, res.error});
            continue;
        }
        ++report.converted;
        manifest << index.records[i].path.generic_string() << ',' << res.scev_file << ','
                 << index.records[i].class_id << ',' << fmt17(res.stats.event_activity) << ','
                 << fmt17(res.stats.on_fraction) << ',' << fmt17(res.stats.off_fraction) << ','
                 << fmt17(res.stats.active_rows) << ',' << res.wire_bits << '\n';
        sum_ea += res.stats.event_activity;
        sum_ar += res.stats.active_rows;
        sum_on += res.stats.on_fraction;
        sum_off += res.stats.off_fraction;
        sum_wire_bits += res.wire_bits;
        if (res.active_row_count > 0) {
            // Exact integer bit counts: RGB side*side*24 vs SC 2*side*rows.
            sum_reduction += rgb_bits / static_cast<double>(2LL * side * res.active_row_count);
            ++report.ideal_reduction_count;
        }
    }
    if (!manifest) throw IoError("short write: manifest.csv");
    manifest.close();

    if (report.converted > 0) {
        report.mean_event_activity = sum_ea / report.converted;
        report.mean_active_rows = sum_ar / report.converted;
        report.mean_on_fraction = sum_on / report.converted;
        report.mean_off_fraction = sum_off / report.converted;
        report.measured_reduction =
            rgb_bits * report.converted / static_cast<double>(sum_wire_bits);
    }
    if (report.ideal_reduction_count > 0)
        report.mean_ideal_reduction = sum_reduction / report.ideal_reduction_count;

    std::ofstream summary(out_dir / "summary.txt", std::ios::trunc);
    if (!summary) throw IoError("cannot write summary.txt");
    summary << report.to_text();
    return report;
}

LabeledEvents load_converted(const fs::path& dir) {
    std::ifstream manifest(dir / "manifest.csv");
    if (!manifest) throw IoError("cannot open " + (dir / "manifest.csv").string());
    LabeledEvents out;
    std::string line;
    bool first = true;
    while (std::getline(manifest, line)) {
        if (line.empty() || line == "\r") continue;
        if (first) {
            first = false;
            if (line.rfind("source_path,", 0) == 0) continue;
        }
        const std::vector<std::string> f = split_on(line, ',');
        if (f.size() != 8) throw IoError("malformed manifest line: " + line);
        out.images.push_back(unpack(read_scev(dir / f[1])));
        out.labels.push_back(std::stoi(f[2]));
    }
    for (int label : out.labels) out.class_count = std::max(out.class_count, label + 1);
    return out;
}

}  // namespace sc
