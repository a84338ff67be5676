#include "sc/activity.hpp"

#include <cmath>
#include <sstream>

#include "sc/errors.hpp"
#include "sc/format.hpp"

namespace sc {

namespace {

std::string fmt6(double v) { return format_general(v, 6); }

}  // namespace

ActivityStats activity(const TernaryEventImage& ev) {
    if (ev.width < 1 || ev.height < 1 || ev.events.size() != ev.pixel_count())
        throw DimensionMismatch("activity: invalid event image");
    const int w = ev.width;
    const int h = ev.height;
    long long on = 0;
    long long off = 0;
    long long rows_active = 0;
#pragma omp parallel for schedule(static) reduction(+ : on, off, rows_active)
    for (int y = 0; y < h; ++y) {
        const std::int8_t* row = ev.events.data() + static_cast<std::size_t>(y) * w;
        long long row_on = 0;
        long long row_off = 0;
        for (int x = 0; x < w; ++x) {
            row_on += row[x] > 0;
            row_off += row[x] < 0;
        }
        on += row_on;
        off += row_off;
        rows_active += (row_on + row_off) > 0;
    }
    const double pixels = static_cast<double>(w) * h;
    ActivityStats s;
    s.event_activity = static_cast<double>(on + off) / pixels;
    s.on_fraction = static_cast<double>(on) / pixels;
    s.off_fraction = static_cast<double>(off) / pixels;
    s.active_rows = static_cast<double>(rows_active) / h;
    return s;
}

SweepTable sweep(const std::vector<GrayImage>& corpus, ThresholdMode mode,
                 const std::vector<double>& thresholds) {
    if (corpus.empty()) throw EmptyCorpus("sweep: empty corpus");
    if (thresholds.empty()) throw Error("sweep: no thresholds given");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        validate({mode, thresholds[i]});
        if (i > 0 && !(thresholds[i] > thresholds[i - 1]))
            throw Error("sweep: thresholds must be strictly increasing");
    }

    const std::size_t n_img = corpus.size();
    const std::size_t n_thr = thresholds.size();
    std::vector<ActivityStats> cell(n_img * n_thr);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n_img); ++i) {
        const GrayImage& img = corpus[i];
        const SCImage contrast = spatial_contrast(img);
        for (std::size_t t = 0; t < n_thr; ++t) {
            TernaryEventImage ev = mode == ThresholdMode::Absolute
                                       ? apply_absolute(contrast, thresholds[t])
                                       : apply_relative(contrast, img, thresholds[t]);
            cell[static_cast<std::size_t>(i) * n_thr + t] = activity(ev);
        }
    }

    SweepTable table;
    table.mode = mode;
    table.rows.resize(n_thr);
    for (std::size_t t = 0; t < n_thr; ++t) {
        SweepRow& row = table.rows[t];
        row.threshold = thresholds[t];
        row.image_count = static_cast<int>(n_img);
        double ea = 0.0, ar = 0.0, on = 0.0, off = 0.0;
        for (std::size_t i = 0; i < n_img; ++i) {
            const ActivityStats& s = cell[i * n_thr + t];
            ea += s.event_activity;
            ar += s.active_rows;
            on += s.on_fraction;
            off += s.off_fraction;
        }
        row.mean_event_activity = ea / static_cast<double>(n_img);
        row.mean_active_rows = ar / static_cast<double>(n_img);
        row.mean_on_fraction = on / static_cast<double>(n_img);
        row.mean_off_fraction = off / static_cast<double>(n_img);
    }
    return table;
}

std::string emit_plot_data(const SweepTable& table, const std::optional<CubicFit>& fit) {
    std::string out = "threshold,mean_event_activity,mean_active_rows,fitted_value\n";
    for (const SweepRow& row : table.rows) {
        out += fmt6(row.threshold);
        out += ',';
        out += fmt6(row.mean_event_activity);
        out += ',';
        out += fmt6(row.mean_active_rows);
        out += ',';
        if (fit) out += fmt6((*fit)(row.threshold));
        out += '\n';
    }
    return out;
}

std::string emit_plot_svg(const SweepTable& table, const std::optional<CubicFit>& fit,
                          const std::string& title) {
    const int width = 640;
    const int height = 400;
    const int ml = 60, mr = 20, mt = 40, mb = 50;
    const double plot_w = width - ml - mr;
    const double plot_h = height - mt - mb;

    double x_min = 0.0, x_max = 1.0;
    if (!table.rows.empty()) {
        x_min = table.rows.front().threshold;
        x_max = table.rows.back().threshold;
        if (x_max == x_min) x_max = x_min + 1.0;
    }
    const auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * plot_w; };
    const auto py = [&](double y) { return mt + (1.0 - y) * plot_h; };  // y axis is [0, 1]

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << py(0) << "\" x2=\"" << width - mr << "\" y2=\""
        << py(0) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << py(0) << "\" x2=\"" << ml << "\" y2=\"" << mt
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml << "\" y=\"" << height - 16 << "\" font-size=\"12\">" << fmt6(x_min)
        << "</text>\n";
    svg << "<text x=\"" << width - mr - 40 << "\" y=\"" << height - 16 << "\" font-size=\"12\">"
        << fmt6(x_max) << "</text>\n";
    svg << "<text x=\"8\" y=\"" << py(1) + 4 << "\" font-size=\"12\">1.0</text>\n";
    svg << "<text x=\"8\" y=\"" << py(0) + 4 << "\" font-size=\"12\">0.0</text>\n";

    if (fit && !table.rows.empty()) {
        svg << "<polyline fill=\"none\" stroke=\"#cc3333\" stroke-width=\"1.5\" points=\"";
        for (int i = 0; i <= 100; ++i) {
            const double x = x_min + (x_max - x_min) * i / 100.0;
            double y = (*fit)(x);
            if (y < 0.0) y = 0.0;
            if (y > 1.0) y = 1.0;
            svg << px(x) << "," << py(y) << " ";
        }
        svg << "\"/>\n";
    }
    for (const SweepRow& row : table.rows) {
        svg << "<circle cx=\"" << px(row.threshold) << "\" cy=\"" << py(row.mean_event_activity)
            << "\" r=\"3\" fill=\"#3355cc\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace sc
