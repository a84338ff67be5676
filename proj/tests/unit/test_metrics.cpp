#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "sc/errors.hpp"
#include "sc/metrics.hpp"
#include "test_util.hpp"

using namespace sc;

namespace {

// Brute-force oracle: per-class tallies computed by rescanning the label
// lists, no confusion matrix involved.
double brute_force_macro_f1(const std::vector<int>& truth, const std::vector<int>& pred,
                            int n_classes) {
    double sum = 0.0;
    for (int c = 0; c < n_classes; ++c) {
        long long tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (truth[i] == c && pred[i] == c) ++tp;
            if (truth[i] != c && pred[i] == c) ++fp;
            if (truth[i] == c && pred[i] != c) ++fn;
        }
        const double p = tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
        const double r = tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn);
        sum += p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
    }
    return sum / n_classes;
}

TernaryEventImage constant_events(int w, int h, std::int8_t value) {
    TernaryEventImage ev;
    ev.width = w;
    ev.height = h;
    ev.events.assign(static_cast<std::size_t>(w) * h, value);
    return ev;
}

}  // namespace

TEST_CASE("macro_f1: perfect prediction scores 1") {
    const std::vector<int> labels{0, 1, 2, 0, 1, 2, 2};
    const F1Report report = macro_f1(labels, labels, 3);
    CHECK(report.macro_f1 == 1.0);
    for (double f1 : report.f1) CHECK(f1 == 1.0);
}

TEST_CASE("macro_f1: worked two-class example") {
    const std::vector<int> truth{0, 0, 1, 1};
    const std::vector<int> pred{0, 1, 1, 1};
    const F1Report report = macro_f1(truth, pred, 2);
    CHECK(report.f1[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(report.f1[1] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(report.macro_f1 == doctest::Approx(0.7333333333333334).epsilon(1e-12));
}

TEST_CASE("macro_f1: completely wrong prediction scores 0") {
    const std::vector<int> truth{0, 0, 0};
    const std::vector<int> pred{1, 1, 1};
    CHECK(macro_f1(truth, pred, 2).macro_f1 == 0.0);
}

TEST_CASE("macro_f1: errors") {
    CHECK_THROWS_AS(macro_f1(std::vector<int>{0, 1}, std::vector<int>{0}, 2), LengthMismatch);
    CHECK_THROWS_AS(macro_f1(std::vector<int>{}, std::vector<int>{}, 2), LengthMismatch);
    CHECK_THROWS_AS(macro_f1(std::vector<int>{0, 2}, std::vector<int>{0, 1}, 2), LabelOutOfRange);
    CHECK_THROWS_AS(macro_f1(std::vector<int>{0, -1}, std::vector<int>{0, 1}, 2), LabelOutOfRange);
}

TEST_CASE("macro_f1: equals the brute-force oracle on random labelings") {
    Rng rng(1313);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n_classes = 2 + static_cast<int>(rng.pick(42));  // up to 43
        const int n = 1 + static_cast<int>(rng.pick(60));
        std::vector<int> truth(n), pred(n);
        for (int i = 0; i < n; ++i) {
            truth[i] = static_cast<int>(rng.pick(n_classes));
            pred[i] = static_cast<int>(rng.pick(n_classes));
        }
        const double expected = brute_force_macro_f1(truth, pred, n_classes);
        CHECK(macro_f1(truth, pred, n_classes).macro_f1 ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("macro_f1: invariant under consistent label permutation") {
    Rng rng(1414);
    for (int trial = 0; trial < 50; ++trial) {
        const int n_classes = 3 + static_cast<int>(rng.pick(8));
        std::vector<int> perm(n_classes);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.pick(i)]);
        const int n = 20 + static_cast<int>(rng.pick(40));
        std::vector<int> truth(n), pred(n), truth_p(n), pred_p(n);
        for (int i = 0; i < n; ++i) {
            truth[i] = static_cast<int>(rng.pick(n_classes));
            pred[i] = static_cast<int>(rng.pick(n_classes));
            truth_p[i] = perm[truth[i]];
            pred_p[i] = perm[pred[i]];
        }
        CHECK(macro_f1(truth, pred, n_classes).macro_f1 ==
              doctest::Approx(macro_f1(truth_p, pred_p, n_classes).macro_f1).epsilon(1e-12));
    }
}

TEST_CASE("event_distance: metric properties on random triples") {
    Rng rng(1515);
    for (int trial = 0; trial < 200; ++trial) {
        const TernaryEventImage a = testutil::random_events(7, 5, rng);
        const TernaryEventImage b = testutil::random_events(7, 5, rng);
        const TernaryEventImage c = testutil::random_events(7, 5, rng);
        const auto dab = event_distance(a, b);
        const auto dba = event_distance(b, a);
        const auto dac = event_distance(a, c);
        const auto dcb = event_distance(c, b);
        CHECK(dab == dba);
        CHECK(event_distance(a, a) == 0);
        CHECK((dab == 0) == (a.events == b.events));
        CHECK(dab <= dac + dcb);
    }
}

TEST_CASE("event_distance: graded cost doubles ON/OFF disagreement") {
    TernaryEventImage a = constant_events(2, 1, 1);
    TernaryEventImage b = constant_events(2, 1, -1);
    b.events[1] = 0;
    CHECK(event_distance(a, b, false) == 2);
    CHECK(event_distance(a, b, true) == 3);  // ON/OFF costs 2, ON/NO costs 1
}

TEST_CASE("knn_predict: exact match wins at k = 1") {
    Rng rng(1616);
    std::vector<TernaryEventImage> train;
    std::vector<int> labels;
    for (int i = 0; i < 6; ++i) {
        train.push_back(testutil::random_events(6, 6, rng));
        labels.push_back(i % 3);
    }
    for (std::size_t i = 0; i < train.size(); ++i)
        CHECK(knn_predict(train, labels, train[i], 1) == labels[i]);
}

TEST_CASE("knn_predict: all-ON vs all-OFF prototypes") {
    const std::vector<TernaryEventImage> train{constant_events(4, 4, 1), constant_events(4, 4, -1)};
    const std::vector<int> labels{0, 1};
    CHECK(knn_predict(train, labels, constant_events(4, 4, 1), 1) == 0);
    CHECK(knn_predict(train, labels, constant_events(4, 4, -1), 1) == 1);
}

TEST_CASE("knn_predict: worked majority vote at distances {2,5,5}") {
    // train images at hand-built distances from an all-zero query
    TernaryEventImage base = constant_events(8, 1, 0);
    const auto at_distance = [&](int d) {
        TernaryEventImage ev = base;
        for (int i = 0; i < d; ++i) ev.events[i] = 1;
        return ev;
    };
    const std::vector<TernaryEventImage> train{at_distance(2), at_distance(5), at_distance(5)};
    const std::vector<int> labels{0, 1, 1};
    CHECK(knn_predict(train, labels, base, 3) == 1);  // majority {a, b, b} -> b
}

TEST_CASE("knn_predict: tie breaking") {
    TernaryEventImage base = constant_events(4, 1, 0);
    TernaryEventImage one = base;
    one.events[0] = 1;
    SUBCASE("distance ties prefer the earlier training index") {
        // both at distance 1 from base; k = 1 must take index 0
        const std::vector<TernaryEventImage> train{one, one};
        CHECK(knn_predict(train, {7, 3}, base, 1) == 7);
    }
    SUBCASE("vote ties prefer the smaller class id") {
        TernaryEventImage two = base;
        two.events[1] = 1;
        const std::vector<TernaryEventImage> train{one, two};
        CHECK(knn_predict(train, {5, 2}, base, 2) == 2);
    }
}

TEST_CASE("knn_predict: errors") {
    const std::vector<TernaryEventImage> train{constant_events(4, 4, 1)};
    CHECK_THROWS_AS(knn_predict(train, {0}, constant_events(5, 4, 1), 1), DimensionMismatch);
    CHECK_THROWS_AS(knn_predict(train, {0}, constant_events(4, 4, 1), 2), Error);
    CHECK_THROWS_AS(knn_predict(train, {0}, constant_events(4, 4, 1), 0), Error);
}

TEST_CASE("evaluate: test set equal to train set scores accuracy 1 at k = 1") {
    Rng rng(1717);
    std::vector<TernaryEventImage> train;
    std::vector<int> labels;
    for (int i = 0; i < 12; ++i) {
        train.push_back(testutil::random_events(8, 8, rng));
        labels.push_back(static_cast<int>(rng.pick(4)));
    }
    const EvalResult result = evaluate(train, labels, train, labels, 4, 1);
    CHECK(result.accuracy == 1.0);
}

TEST_CASE("evaluate: single training sample predicts its class everywhere") {
    Rng rng(1818);
    const std::vector<TernaryEventImage> train{testutil::random_events(6, 6, rng)};
    std::vector<TernaryEventImage> test;
    std::vector<int> test_labels;
    for (int i = 0; i < 8; ++i) {
        test.push_back(testutil::random_events(6, 6, rng));
        test_labels.push_back(static_cast<int>(rng.pick(3)));
    }
    const EvalResult result = evaluate(train, {2}, test, test_labels, 3, 1);
    for (int p : result.predictions) CHECK(p == 2);
}

TEST_CASE("evaluate: deterministic and order-invariant over the test set") {
    Rng rng(1919);
    std::vector<TernaryEventImage> train, test;
    std::vector<int> train_labels, test_labels;
    for (int i = 0; i < 20; ++i) {
        train.push_back(testutil::random_events(10, 10, rng));
        train_labels.push_back(static_cast<int>(rng.pick(5)));
    }
    for (int i = 0; i < 15; ++i) {
        test.push_back(testutil::random_events(10, 10, rng));
        test_labels.push_back(static_cast<int>(rng.pick(5)));
    }
    const EvalResult a = evaluate(train, train_labels, test, test_labels, 5, 3);
    const EvalResult b = evaluate(train, train_labels, test, test_labels, 5, 3);
    CHECK(a.predictions == b.predictions);
    CHECK(a.report.macro_f1 == b.report.macro_f1);

    // reversed test order gives reversed predictions
    std::vector<TernaryEventImage> rev_test(test.rbegin(), test.rend());
    std::vector<int> rev_labels(test_labels.rbegin(), test_labels.rend());
    const EvalResult c = evaluate(train, train_labels, rev_test, rev_labels, 5, 3);
    std::vector<int> expected(a.predictions.rbegin(), a.predictions.rend());
    CHECK(c.predictions == expected);
}

TEST_CASE("F1Report renders text and per-class CSV") {
    const F1Report report = macro_f1(std::vector<int>{0, 1, 1}, std::vector<int>{0, 1, 0}, 2);
    const std::string text = report.to_text();
    CHECK(text.find("macro F1") != std::string::npos);
    const std::string csv = report.to_csv();
    CHECK(csv.rfind("class,precision,recall,f1\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 classes
}
