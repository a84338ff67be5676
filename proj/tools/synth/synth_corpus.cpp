#include "synth_corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "sc/errors.hpp"
#include "sc/image_io.hpp"
#include "sc/rng.hpp"

namespace fs = std::filesystem;

namespace scsynth {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Color {
    double r, g, b;
};

Color lerp(const Color& a, const Color& b, double t) {
    return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

Color jitter(Color c, sc::Rng& rng, double amount) {
    c.r += rng.uniform(-amount, amount);
    c.g += rng.uniform(-amount, amount);
    c.b += rng.uniform(-amount, amount);
    return c;
}

// Per-track latent state; every frame of a track shares it.
struct TrackState {
    int canvas = 64;
    double base_scale = 0.75;  // sign diameter as a fraction of the canvas
    double base_rot_deg = 0.0;
    double off_x = 0.0, off_y = 0.0;  // center offset, canvas fractions
    double scale_drift = 0.0;         // per-frame growth (approach simulation)
    double brightness = 1.0;
    double noise_sigma = 0.03;
    Color bg_top{0.5, 0.55, 0.65};
    Color bg_bottom{0.3, 0.3, 0.28};
    Color border{0.72, 0.12, 0.12};
    Color fill{0.92, 0.92, 0.92};
    Color glyph{0.08, 0.08, 0.08};
    bool has_ring = true;
    double inner_scale = 0.70;
};

int shape_of(int class_id) { return class_id % 5; }
int glyph_of(int class_id) { return (class_id / 5) % 7; }
double glyph_thickness(int class_id) { return (class_id / 35) % 2 == 0 ? 1.0 : 1.45; }

TrackState make_track_state(const CorpusOptions& opt, int class_id, int track_id,
                            std::uint64_t salt) {
    sc::Rng rng(sc::mix_seed(opt.seed, salt));
    TrackState st;
    st.canvas = opt.min_canvas +
                static_cast<int>(rng.pick(static_cast<std::size_t>(opt.max_canvas -
                                                                   opt.min_canvas + 1)));
    st.base_scale = rng.uniform(0.66, 0.80);
    st.base_rot_deg = rng.uniform(-6.0, 6.0);
    st.off_x = rng.uniform(-0.035, 0.035);
    st.off_y = rng.uniform(-0.035, 0.035);
    st.scale_drift = rng.uniform(0.0, 0.004);
    st.brightness = rng.uniform(opt.min_brightness, opt.max_brightness);
    st.noise_sigma = rng.uniform(opt.min_noise, opt.max_noise);

    const double sky = rng.uniform(0.45, 0.8);
    st.bg_top = jitter({sky * 0.9, sky * 0.95, sky}, rng, 0.04);
    const double ground = rng.uniform(0.18, 0.42);
    st.bg_bottom = jitter({ground, ground, ground * 0.9}, rng, 0.04);

    const Color red{0.70, 0.12, 0.12};
    const Color white{0.92, 0.92, 0.92};
    const Color blue{0.15, 0.25, 0.72};
    const Color yellow{0.85, 0.72, 0.16};
    const Color black{0.10, 0.10, 0.10};
    switch (shape_of(class_id)) {
        case 0:  // circle: red ring, white fill, black glyph
        case 1:  // triangle up: same scheme
        case 2:  // triangle down
            st.border = jitter(red, rng, 0.05);
            st.fill = jitter(white, rng, 0.04);
            st.glyph = black;
            st.has_ring = true;
            st.inner_scale = 0.70;
            break;
        case 3:  // diamond: white ring, yellow fill, black glyph
            st.border = jitter(white, rng, 0.04);
            st.fill = jitter(yellow, rng, 0.05);
            st.glyph = black;
            st.has_ring = true;
            st.inner_scale = 0.78;
            break;
        default:  // square: blue fill, white glyph
            st.border = jitter(blue, rng, 0.05);
            st.fill = jitter(blue, rng, 0.05);
            st.glyph = white;
            st.has_ring = false;
            break;
    }
    (void)track_id;
    return st;
}

// Signed distances in sign coordinates (circumradius ~1, y grows downward).
double sdf_outline(int shape, double x, double y) {
    const double ax = std::fabs(x);
    const double ay = std::fabs(y);
    switch (shape) {
        case 0:
            return std::sqrt(x * x + y * y) - 1.0;
        case 1: {  // triangle, apex up (image y down)
            const double ym = -y;
            const double d1 = -ym;                                 // bottom edge, apothem 0.5
            const double d2 = 0.8660254037844386 * x + 0.5 * ym;   // right edge
            const double d3 = -0.8660254037844386 * x + 0.5 * ym;  // left edge
            return std::max({d1, d2, d3}) - 0.5;
        }
        case 2: {  // triangle, apex down
            const double ym = y;
            const double d1 = -ym;
            const double d2 = 0.8660254037844386 * x + 0.5 * ym;
            const double d3 = -0.8660254037844386 * x + 0.5 * ym;
            return std::max({d1, d2, d3}) - 0.5;
        }
        case 3:  // diamond
            return (ax + ay) * 0.7071067811865476 - 0.7071067811865476;
        default:  // square, circumradius ~1.1
            return std::max(ax, ay) - 0.78;
    }
}

double sdf_glyph(int glyph, double x, double y, double thickness) {
    const double t = thickness;
    const double ax = std::fabs(x);
    const double ay = std::fabs(y);
    switch (glyph) {
        case 1:  // vertical bar
            return std::max(ax - 0.15 * t, ay - 0.5);
        case 2: {  // two vertical bars
            const double lx = std::fabs(x + 0.26);
            const double rx = std::fabs(x - 0.26);
            return std::min(std::max(lx - 0.10 * t, ay - 0.5),
                            std::max(rx - 0.10 * t, ay - 0.5));
        }
        case 3:  // horizontal bar
            return std::max(ay - 0.15 * t, ax - 0.5);
        case 4: {  // X cross
            const double u = (x + y) * 0.7071067811865476;
            const double v = (x - y) * 0.7071067811865476;
            return std::min(std::max(std::fabs(u) - 0.12 * t, std::fabs(v) - 0.52),
                            std::max(std::fabs(v) - 0.12 * t, std::fabs(u) - 0.52));
        }
        case 5:  // ring
            return std::fabs(std::sqrt(x * x + y * y) - 0.40) - 0.11 * t;
        case 6:  // dot
            return std::sqrt(x * x + y * y) - 0.26 * t;
        default:  // none
            return 1.0;
    }
}

double coverage(double d, double edge) { return std::clamp(0.5 - d / edge, 0.0, 1.0); }

std::uint8_t quantize(double v) {
    const double r = std::round(v * 255.0);
    return static_cast<std::uint8_t>(r < 0.0 ? 0.0 : (r > 255.0 ? 255.0 : r));
}

}  // namespace

std::vector<int> default_track_counts(const CorpusOptions& opt, int base_tracks, int spread) {
    std::vector<int> counts(opt.classes);
    for (int c = 0; c < opt.classes; ++c) counts[c] = base_tracks + (c * 5 + 3) % spread;
    return counts;
}

RenderedFrame render_frame(const CorpusOptions& opt, int class_id, int track_id, int frame) {
    const std::uint64_t track_salt =
        (static_cast<std::uint64_t>(class_id) * 100000 + track_id) * 1024;
    const TrackState st = make_track_state(opt, class_id, track_id, track_salt);
    sc::Rng rng(sc::mix_seed(opt.seed, track_salt + 1 + frame));

    const int n = st.canvas;
    const double mid = opt.frames_per_track / 2.0;
    const double scale =
        st.base_scale * (1.0 + st.scale_drift * (frame - mid)) * (1.0 + rng.uniform(-0.01, 0.01));
    const double rot = (st.base_rot_deg + rng.uniform(-1.5, 1.5)) * kPi / 180.0;
    const double cx = n * (0.5 + st.off_x + rng.uniform(-0.008, 0.008));
    const double cy = n * (0.5 + st.off_y + rng.uniform(-0.008, 0.008));
    const double radius = scale * n / 2.0;
    const double light = st.brightness * (1.0 + rng.uniform(-0.05, 0.05));
    const double edge = 1.4 / radius;  // ~1.4 px transition band
    const double cos_r = std::cos(rot);
    const double sin_r = std::sin(rot);
    const int shape = shape_of(class_id);
    const int glyph = glyph_of(class_id);
    const double thick = glyph_thickness(class_id);

    RenderedFrame out;
    out.image.width = n;
    out.image.height = n;
    out.image.pixels.resize(static_cast<std::size_t>(n) * n * 3);

    for (int y = 0; y < n; ++y) {
        const double bg_t = static_cast<double>(y) / (n - 1);
        for (int x = 0; x < n; ++x) {
            Color c = lerp(st.bg_top, st.bg_bottom, bg_t);
            // low-frequency horizontal shading so backgrounds are not flat
            c.r += 0.03 * std::sin(2.0 * kPi * x / n + class_id);
            c.g += 0.03 * std::sin(2.0 * kPi * x / n + class_id);
            c.b += 0.03 * std::sin(2.0 * kPi * x / n + class_id);

            const double px = (x - cx) / radius;
            const double py = (y - cy) / radius;
            const double qx = cos_r * px + sin_r * py;
            const double qy = -sin_r * px + cos_r * py;

            const double a_sign = coverage(sdf_outline(shape, qx, qy), edge);
            if (a_sign > 0.0) {
                Color sign = st.fill;
                if (st.has_ring) {
                    const double a_in =
                        coverage(sdf_outline(shape, qx / st.inner_scale, qy / st.inner_scale),
                                 edge / st.inner_scale);
                    sign = lerp(st.border, st.fill, a_in);
                    const double a_glyph =
                        coverage(sdf_glyph(glyph, qx / 0.62, qy / 0.62, thick), edge / 0.62) * a_in;
                    sign = lerp(sign, st.glyph, a_glyph);
                } else {
                    const double a_glyph =
                        coverage(sdf_glyph(glyph, qx / 0.62, qy / 0.62, thick), edge / 0.62);
                    sign = lerp(sign, st.glyph, a_glyph);
                }
                c = lerp(c, sign, a_sign);
            }

            std::uint8_t* dst = out.image.pixels.data() + (static_cast<std::size_t>(y) * n + x) * 3;
            dst[0] = quantize(c.r * light + st.noise_sigma * rng.gaussian());
            dst[1] = quantize(c.g * light + st.noise_sigma * rng.gaussian());
            dst[2] = quantize(c.b * light + st.noise_sigma * rng.gaussian());
        }
    }

    // Bounding box with roughly a 10% margin around the sign.
    const double reach = radius * 1.14;
    int x1 = static_cast<int>(std::floor(cx - reach));
    int y1 = static_cast<int>(std::floor(cy - reach));
    int x2 = static_cast<int>(std::ceil(cx + reach)) + 1;
    int y2 = static_cast<int>(std::ceil(cy + reach)) + 1;
    x1 = std::clamp(x1, 0, n - 2);
    y1 = std::clamp(y1, 0, n - 2);
    x2 = std::clamp(x2, x1 + 1, n);
    y2 = std::clamp(y2, y1 + 1, n);
    out.roi = {x1, y1, x2, y2};
    return out;
}

namespace {

std::string annotation_line(const std::string& filename, const RenderedFrame& f, int class_id) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s;%d;%d;%d;%d;%d;%d;%d", filename.c_str(), f.image.width,
                  f.image.height, f.roi.x1, f.roi.y1, f.roi.x2, f.roi.y2, class_id);
    return buf;
}

}  // namespace

void write_training_corpus(const fs::path& root, const CorpusOptions& opt,
                           std::span<const int> tracks_per_class) {
    if (static_cast<int>(tracks_per_class.size()) != opt.classes)
        throw sc::Error("write_training_corpus: track count list does not match class count");
    fs::create_directories(root);
    for (int c = 0; c < opt.classes; ++c) {
        char dirname[16];
        std::snprintf(dirname, sizeof(dirname), "%05d", c);
        const fs::path class_dir = root / dirname;
        fs::create_directories(class_dir);

        struct Job {
            int track, frame;
        };
        std::vector<Job> jobs;
        for (int t = 0; t < tracks_per_class[c]; ++t)
            for (int f = 0; f < opt.frames_per_track; ++f) jobs.push_back({t, f});

        std::vector<std::string> lines(jobs.size());
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t j = 0; j < static_cast<std::int64_t>(jobs.size()); ++j) {
            const RenderedFrame frame = render_frame(opt, c, jobs[j].track, jobs[j].frame);
            char name[32];
            std::snprintf(name, sizeof(name), "%05d_%05d.ppm", jobs[j].track, jobs[j].frame);
            sc::write_ppm(class_dir / name, frame.image);
            lines[j] = annotation_line(name, frame, c);
        }

        char csv_name[24];
        std::snprintf(csv_name, sizeof(csv_name), "GT-%05d.csv", c);
        std::ofstream csv(class_dir / csv_name, std::ios::trunc);
        if (!csv) throw sc::IoError("cannot write " + (class_dir / csv_name).string());
        csv << "Filename;Width;Height;Roi.X1;Roi.Y1;Roi.X2;Roi.Y2;ClassId\n";
        for (const std::string& line : lines) csv << line << '\n';
    }
}

void write_test_corpus(const fs::path& root, const CorpusOptions& opt, int images_per_class) {
    fs::create_directories(root);
    struct Job {
        int class_id, ordinal;
    };
    std::vector<Job> jobs;
    for (int c = 0; c < opt.classes; ++c)
        for (int i = 0; i < images_per_class; ++i) jobs.push_back({c, i});

    // Interleave classes in the flat file order, like a shuffled test split.
    std::vector<std::size_t> order(jobs.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = (i % opt.classes) * images_per_class + i / opt.classes;

    std::vector<std::string> lines(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(order.size()); ++k) {
        const Job job = jobs[order[k]];
        // Unseen track ids: one fresh track per test image, offset past any
        // plausible training track, with a frame sampled mid-track.
        const int track = 50000 + job.ordinal;
        const int frame = (job.ordinal * 7 + job.class_id * 3) % opt.frames_per_track;
        const RenderedFrame frame_img = render_frame(opt, job.class_id, track, frame);
        char name[32];
        std::snprintf(name, sizeof(name), "%05lld.ppm", static_cast<long long>(k));
        sc::write_ppm(root / name, frame_img.image);
        lines[k] = annotation_line(name, frame_img, job.class_id);
    }

    std::ofstream csv(root / "GT-test.csv", std::ios::trunc);
    if (!csv) throw sc::IoError("cannot write " + (root / "GT-test.csv").string());
    csv << "Filename;Width;Height;Roi.X1;Roi.Y1;Roi.X2;Roi.Y2;ClassId\n";
    for (const std::string& line : lines) csv << line << '\n';
}

}  // namespace scsynth
