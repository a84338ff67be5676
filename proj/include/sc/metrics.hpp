#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sc/threshold.hpp"

namespace sc {

// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
    int n_classes = 0;
    std::vector<std::uint64_t> counts;

    std::uint64_t at(int truth, int pred) const {
        return counts[static_cast<std::size_t>(truth) * n_classes + pred];
    }
};

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> pred,
                                 int n_classes);

struct F1Report {
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
    double macro_f1 = 0.0;

    std::string to_text() const;
    std::string to_csv() const;  // per-class rows: class,precision,recall,f1
};

// Per class: precision TP/(TP+FP), recall TP/(TP+FN), f1 = 2PR/(P+R), with
// every 0/0 defined as 0; macro_f1 is the unweighted mean over all classes.
F1Report macro_f1(std::span<const int> truth, std::span<const int> pred, int n_classes);

// Per-pixel mismatch cost between two ternary images. With graded = true an
// ON/OFF disagreement costs 2 instead of 1.
std::uint64_t event_distance(const TernaryEventImage& a, const TernaryEventImage& b,
                             bool graded = false);

// Majority vote among the k nearest training images under event_distance.
// Distance ties prefer the earlier training index; vote ties prefer the
// smaller class id.
int knn_predict(const std::vector<TernaryEventImage>& train_images,
                const std::vector<int>& train_labels, const TernaryEventImage& query, int k,
                bool graded = false);

struct EvalResult {
    F1Report report;
    double accuracy = 0.0;
    std::vector<int> predictions;
};

// Scores every test sample with knn_predict (concurrently; predictions are
// assembled in input order).
EvalResult evaluate(const std::vector<TernaryEventImage>& train_images,
                    const std::vector<int>& train_labels,
                    const std::vector<TernaryEventImage>& test_images,
                    const std::vector<int>& test_labels, int n_classes, int k,
                    bool graded = false);

}  // namespace sc
