#include <doctest.h>

#include <cmath>
#include <random>

#include "typedcrf/errors.hpp"
#include "typedcrf/learner.hpp"

using namespace typedcrf;

namespace {

// 1-node instances with 2 labels whose single feature is the label sign:
// trivially separable by a diagonal unary block.
std::vector<TrainingSample> separable_toy(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TrainingSample> data;
  data.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int label = static_cast<int>(rng() % 2);
    TypedGraphInstance g;
    g.node_features = {Matrix(1, 2)};
    g.node_features[0].at(0, label) = 1.0;
    g.edges.resize(1);
    g.edge_features = {Matrix(0, 0)};
    data.push_back({std::move(g), Labeling{{label}}});
  }
  return data;
}

TypeSchema toy_schema() { return TypeSchema{{2}, {2}, {0}}; }

long long training_errors(const TypeSchema& schema, const std::vector<TrainingSample>& data,
                          const Weights& w) {
  long long errors = 0;
  for (const TrainingSample& sample : data)
    errors += hamming(predict(schema, sample.instance, w), sample.gold);
  return errors;
}

}  // namespace

TEST_CASE("hamming counts disagreements across all types") {
  CHECK(hamming({{0, 1}, {2}}, {{0, 1}, {2}}) == 0);
  CHECK(hamming({{0, 0, 0}}, {{1, 1, 1}}) == 3);
  CHECK(hamming({{0, 1, 2}, {1, 1}}, {{0, 2, 2}, {1, 0}}) == 2);
  CHECK_THROWS_AS(hamming({{0}}, {{0, 1}}), DimensionError);
  CHECK_THROWS_AS(hamming({{0}}, {{0}, {1}}), DimensionError);
}

TEST_CASE("train_ssvm with zero C returns zero weights") {
  auto data = separable_toy(6, 1);
  SsvmSettings settings;
  settings.c = 0.0;
  settings.epochs = 3;
  Weights w = train_ssvm(toy_schema(), data, settings, {});
  for (double x : flatten(toy_schema(), w)) CHECK(x == 0.0);
}

TEST_CASE("train_ssvm rejects empty data") {
  CHECK_THROWS_AS(train_ssvm(toy_schema(), {}, {}, {}), std::invalid_argument);
}

TEST_CASE("train_ssvm separates the toy set") {
  auto data = separable_toy(20, 7);
  SsvmSettings settings;
  settings.c = 1.0;
  settings.epochs = 20;
  settings.seed = 5;
  Weights w = train_ssvm(toy_schema(), data, settings, {});
  CHECK(training_errors(toy_schema(), data, w) == 0);
}

TEST_CASE("relabeling the gold alphabet permutes the learned unary blocks") {
  auto data = separable_toy(16, 9);
  auto swapped = data;
  for (TrainingSample& sample : swapped) {
    // swap both the label and the feature layout so only the alphabet moves
    sample.gold[0][0] = 1 - sample.gold[0][0];
    std::swap(sample.instance.node_features[0].at(0, 0),
              sample.instance.node_features[0].at(0, 1));
  }
  SsvmSettings settings;
  settings.c = 0.5;
  settings.epochs = 10;
  settings.seed = 3;

  Weights w = train_ssvm(toy_schema(), data, settings, {});
  Weights w_swapped = train_ssvm(toy_schema(), swapped, settings, {});

  // label i over feature f in one run equals label 1-i over feature 1-f in the other
  for (int i = 0; i < 2; ++i)
    for (int f = 0; f < 2; ++f)
      CHECK(w.unary[0].at(i, f) ==
            doctest::Approx(w_swapped.unary[0].at(1 - i, 1 - f)).epsilon(1e-6));
}

TEST_CASE("train_ssvm is bitwise deterministic for a fixed seed") {
  auto data = separable_toy(12, 13);
  SsvmSettings settings;
  settings.c = 0.7;
  settings.epochs = 6;
  settings.seed = 11;
  auto flat_a = flatten(toy_schema(), train_ssvm(toy_schema(), data, settings, {}));
  auto flat_b = flatten(toy_schema(), train_ssvm(toy_schema(), data, settings, {}));
  CHECK(flat_a == flat_b);
}

TEST_CASE("parallel loss-augmented inference keeps chunk determinism") {
  auto data = separable_toy(12, 17);
  SsvmSettings settings;
  settings.c = 0.7;
  settings.epochs = 4;
  settings.seed = 11;
  settings.workers = 2;
  auto flat_a = flatten(toy_schema(), train_ssvm(toy_schema(), data, settings, {}));
  auto flat_b = flatten(toy_schema(), train_ssvm(toy_schema(), data, settings, {}));
  CHECK(flat_a == flat_b);
}

TEST_CASE("the epoch objective trend is mostly non-increasing on the toy set") {
  auto data = separable_toy(20, 21);
  SsvmSettings settings;
  settings.c = 1.0;
  settings.epochs = 15;
  settings.step_size = 0.05;
  settings.seed = 2;
  SsvmTrace trace;
  train_ssvm(toy_schema(), data, settings, {}, &trace);
  REQUIRE(trace.epoch_objective.size() == 15);
  int non_increasing = 0;
  for (std::size_t e = 1; e < trace.epoch_objective.size(); ++e)
    if (trace.epoch_objective[e] <= trace.epoch_objective[e - 1] + 1e-9) ++non_increasing;
  CHECK(non_increasing >= 12);  // 80% of 14 consecutive pairs, stochastic noise tolerated
}

TEST_CASE("training reaches the margin on most toy samples") {
  auto data = separable_toy(20, 23);
  SsvmSettings settings;
  settings.c = 2.0;
  settings.epochs = 30;
  settings.seed = 4;
  Weights w = train_ssvm(toy_schema(), data, settings, {});
  int satisfied = 0;
  for (const TrainingSample& sample : data) {
    Labeling y_hat = loss_augmented_predict(toy_schema(), sample.instance, w, sample.gold);
    const double margin_gap =
        potential(toy_schema(), sample.instance, sample.gold, w) -
        potential(toy_schema(), sample.instance, y_hat, w) -
        static_cast<double>(hamming(y_hat, sample.gold));
    if (margin_gap >= -1.0) ++satisfied;
  }
  CHECK(satisfied >= 18);  // 90%
}

TEST_CASE("train_logistic fits separable one-dimensional data") {
  Matrix features(20, 1);
  std::vector<int> labels(20);
  for (int i = 0; i < 20; ++i) {
    labels[static_cast<std::size_t>(i)] = i % 2;
    features.at(i, 0) = i % 2 == 0 ? -1.0 : 1.0;
  }
  LinearBinaryModel model = train_logistic(features, labels, 500, 0.5, 0);
  int correct = 0;
  for (int i = 0; i < 20; ++i) {
    auto [label, p] = predict_logistic(model, {features.at(i, 0)});
    correct += label == labels[static_cast<std::size_t>(i)] ? 1 : 0;
  }
  CHECK(correct == 20);
}

TEST_CASE("train_logistic with zero epochs returns the zero model") {
  Matrix features(4, 2);
  std::vector<int> labels{0, 1, 0, 1};
  LinearBinaryModel model = train_logistic(features, labels, 0, 0.1, 0);
  auto [label, p] = predict_logistic(model, {3.0, -2.0});
  CHECK(p == doctest::Approx(0.5));
  CHECK(label == 1);  // 0.5 boundary class
}

TEST_CASE("flipping all logistic labels negates the decision function") {
  std::mt19937 rng(77);
  Matrix features(30, 3);
  std::vector<int> labels(30);
  for (int i = 0; i < 30; ++i) {
    labels[static_cast<std::size_t>(i)] = static_cast<int>(rng() % 2);
    for (int f = 0; f < 3; ++f)
      features.at(i, f) = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
  }
  std::vector<int> flipped(labels);
  for (int& label : flipped) label = 1 - label;
  LinearBinaryModel a = train_logistic(features, labels, 200, 0.2, 0);
  LinearBinaryModel b = train_logistic(features, flipped, 200, 0.2, 0);
  for (std::size_t f = 0; f < a.weights.size(); ++f)
    CHECK(a.weights[f] == doctest::Approx(-b.weights[f]).epsilon(1e-6));
  CHECK(a.bias == doctest::Approx(-b.bias).epsilon(1e-6));
}

TEST_CASE("train_logistic rejects degenerate data") {
  Matrix features(3, 1);
  CHECK_THROWS_AS(train_logistic(features, {1, 1, 1}, 10, 0.1, 0), DegenerateDataError);
  CHECK_THROWS_AS(train_logistic(features, {0, 1}, 10, 0.1, 0), DimensionError);
}

TEST_CASE("predict_logistic is monotone in a positively-weighted feature") {
  LinearBinaryModel model;
  model.weights = {2.0, -1.0};
  model.bias = 0.1;
  double previous = -1.0;
  for (double x = -3.0; x <= 3.0; x += 0.25) {
    auto [label, p] = predict_logistic(model, {x, 0.5});
    CHECK(p > previous);
    previous = p;
  }
  auto [label_hi, p_hi] = predict_logistic(model, {100.0, 0.0});
  CHECK(label_hi == 1);
  CHECK_THROWS_AS(predict_logistic(model, {1.0}), DimensionError);
}
