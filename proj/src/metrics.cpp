#include "sc/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "sc/errors.hpp"
#include "sc/format.hpp"

namespace sc {

namespace {

std::string fmt6(double v) { return format_general(v, 6); }

void check_labels(std::span<const int> labels, int n_classes) {
    for (int label : labels) {
        if (label < 0 || label >= n_classes)
            throw LabelOutOfRange("label " + std::to_string(label) + " outside [0, " +
                                  std::to_string(n_classes) + ")");
    }
}

}  // namespace

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> pred,
                                 int n_classes) {
    if (truth.size() != pred.size() || truth.empty())
        throw LengthMismatch("confusion_matrix: label lists must be nonempty and equal length");
    if (n_classes < 1) throw LabelOutOfRange("confusion_matrix: n_classes must be >= 1");
    check_labels(truth, n_classes);
    check_labels(pred, n_classes);
    ConfusionMatrix m;
    m.n_classes = n_classes;
    m.counts.assign(static_cast<std::size_t>(n_classes) * n_classes, 0);
    for (std::size_t i = 0; i < truth.size(); ++i)
        ++m.counts[static_cast<std::size_t>(truth[i]) * n_classes + pred[i]];
    return m;
}

F1Report macro_f1(std::span<const int> truth, std::span<const int> pred, int n_classes) {
    const ConfusionMatrix m = confusion_matrix(truth, pred, n_classes);
    F1Report report;
    report.precision.resize(n_classes);
    report.recall.resize(n_classes);
    report.f1.resize(n_classes);
    double sum = 0.0;
    for (int c = 0; c < n_classes; ++c) {
        std::uint64_t tp = m.at(c, c);
        std::uint64_t fp = 0;
        std::uint64_t fn = 0;
        for (int other = 0; other < n_classes; ++other) {
            if (other == c) continue;
            fp += m.at(other, c);
            fn += m.at(c, other);
        }
        const double precision =
            tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
        const double recall =
            tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
        const double f1 =
            precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
        report.precision[c] = precision;
        report.recall[c] = recall;
        report.f1[c] = f1;
        sum += f1;
    }
    report.macro_f1 = sum / n_classes;
    return report;
}

std::string F1Report::to_text() const {
    std::ostringstream out;
    out << "macro F1: " << fmt6(macro_f1) << '\n';
    for (std::size_t c = 0; c < f1.size(); ++c) {
        out << "class " << c << ": precision " << fmt6(precision[c]) << ", recall "
            << fmt6(recall[c]) << ", f1 " << fmt6(f1[c]) << '\n';
    }
    return out.str();
}

std::string F1Report::to_csv() const {
    std::string out = "class,precision,recall,f1\n";
    for (std::size_t c = 0; c < f1.size(); ++c) {
        out += std::to_string(c) + ',' + fmt6(precision[c]) + ',' + fmt6(recall[c]) + ',' +
               fmt6(f1[c]) + '\n';
    }
    return out;
}

std::uint64_t event_distance(const TernaryEventImage& a, const TernaryEventImage& b, bool graded) {
    if (a.width != b.width || a.height != b.height)
        throw DimensionMismatch("event_distance: image shapes differ");
    std::uint64_t cost = 0;
    const std::size_t n = a.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const int da = a.events[i];
        const int db = b.events[i];
        if (da == db) continue;
        cost += graded && da != 0 && db != 0 ? 2 : 1;
    }
    return cost;
}

int knn_predict(const std::vector<TernaryEventImage>& train_images,
                const std::vector<int>& train_labels, const TernaryEventImage& query, int k,
                bool graded) {
    if (train_images.size() != train_labels.size())
        throw LengthMismatch("knn_predict: images and labels differ in length");
    if (train_images.empty() || k < 1 || static_cast<std::size_t>(k) > train_images.size())
        throw Error("knn_predict: k must satisfy 1 <= k <= train size");

    std::vector<std::pair<std::uint64_t, std::size_t>> order(train_images.size());
    for (std::size_t i = 0; i < train_images.size(); ++i)
        order[i] = {event_distance(train_images[i], query, graded), i};
    std::partial_sort(order.begin(), order.begin() + k, order.end());

    int best_class = -1;
    int best_votes = 0;
    std::vector<int> votes;
    for (int i = 0; i < k; ++i) {
        const int label = train_labels[order[i].second];
        if (label < 0) throw LabelOutOfRange("knn_predict: negative class id");
        if (label >= static_cast<int>(votes.size())) votes.resize(label + 1, 0);
        ++votes[label];
    }
    for (std::size_t c = 0; c < votes.size(); ++c) {
        if (votes[c] > best_votes) {
            best_votes = votes[c];
            best_class = static_cast<int>(c);
        }
    }
    return best_class;
}

EvalResult evaluate(const std::vector<TernaryEventImage>& train_images,
                    const std::vector<int>& train_labels,
                    const std::vector<TernaryEventImage>& test_images,
                    const std::vector<int>& test_labels, int n_classes, int k, bool graded) {
    if (test_images.size() != test_labels.size())
        throw LengthMismatch("evaluate: images and labels differ in length");
    if (test_images.empty()) throw LengthMismatch("evaluate: empty test set");

    EvalResult result;
    result.predictions.assign(test_images.size(), -1);
    std::string first_error;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(test_images.size()); ++i) {
        try {
            result.predictions[i] = knn_predict(train_images, train_labels, test_images[i], k,
                                                graded);
        } catch (const std::exception& e) {
#pragma omp critical
            if (first_error.empty()) first_error = e.what();
        }
    }
    if (!first_error.empty()) throw Error("evaluate: " + first_error);

    std::size_t correct = 0;
    for (std::size_t i = 0; i < test_labels.size(); ++i)
        correct += result.predictions[i] == test_labels[i];
    result.accuracy = static_cast<double>(correct) / static_cast<double>(test_labels.size());
    result.report = macro_f1(test_labels, result.predictions, n_classes);
    return result;
}

}  // namespace sc
