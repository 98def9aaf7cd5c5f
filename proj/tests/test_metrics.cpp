#include <doctest.h>

#include "typedcrf/errors.hpp"
#include "typedcrf/experiment.hpp"
#include "typedcrf/metrics.hpp"

using namespace typedcrf;

TEST_CASE("perfect predictions score 1.0 on every metric") {
  std::vector<LabelGrid> gold{{0, 1, 2}, {10, 0}};
  CHECK(metric_pixel_accuracy(gold, gold) == doctest::Approx(1.0));
  bool defined = false;
  CHECK(metric_snake_cell_accuracy(gold, gold, &defined) == doctest::Approx(1.0));
  CHECK(defined);
  CHECK(metric_image_accuracy({0, 1}, {0, 1}) == doctest::Approx(1.0));
}

TEST_CASE("the all-background prediction has zero snake-cell accuracy") {
  std::vector<LabelGrid> gold{{0, 1, 2, 0}, {0, 10, 0, 0}};
  std::vector<LabelGrid> pred{{0, 0, 0, 0}, {0, 0, 0, 0}};
  bool defined = false;
  CHECK(metric_snake_cell_accuracy(pred, gold, &defined) == doctest::Approx(0.0));
  CHECK(defined);
  // pixel accuracy still counts the background hits: 5 of 8
  CHECK(metric_pixel_accuracy(pred, gold) == doctest::Approx(5.0 / 8.0));
}

TEST_CASE("a constructed half-correct case scores one half") {
  std::vector<LabelGrid> gold{{1, 2, 3, 4}};
  std::vector<LabelGrid> pred{{1, 2, 0, 0}};
  CHECK(metric_snake_cell_accuracy(pred, gold) == doctest::Approx(0.5));
  CHECK(metric_pixel_accuracy(pred, gold) == doctest::Approx(0.5));
  CHECK(metric_image_accuracy({0, 1}, {1, 1}) == doctest::Approx(0.5));
}

TEST_CASE("metrics flag gold collections without snake cells") {
  std::vector<LabelGrid> gold{{0, 0}};
  bool defined = true;
  CHECK(metric_snake_cell_accuracy(gold, gold, &defined) == doctest::Approx(0.0));
  CHECK_FALSE(defined);
}

TEST_CASE("metrics reject misaligned collections") {
  CHECK_THROWS_AS(metric_pixel_accuracy({{0}}, {{0}, {1}}), DimensionError);
  CHECK_THROWS_AS(metric_pixel_accuracy({{0, 1}}, {{0}}), DimensionError);
  CHECK_THROWS_AS(metric_image_accuracy({0}, {0, 1}), DimensionError);
}

TEST_CASE("cell counters match their definitions") {
  std::vector<LabelGrid> grids{{0, 1, 10}, {0, 0}};
  CHECK(count_cells(grids) == 5);
  CHECK(count_snake_cells(grids) == 2);
}

TEST_CASE("welch_t_test reproduces a reference comparison") {
  // agrees with scipy.stats.ttest_ind(a, b, equal_var=False)
  std::vector<double> a{17.2, 20.9, 22.6, 18.1, 21.7};
  std::vector<double> b{21.5, 22.8, 21.0, 23.0, 21.6};
  WelchResult r = welch_t_test(a, b);
  CHECK(r.t == doctest::Approx(-1.6846).epsilon(1e-3));
  CHECK(r.df == doctest::Approx(5.0942).epsilon(1e-3));
  CHECK(r.p_value == doctest::Approx(0.15179).epsilon(1e-2));
}

TEST_CASE("welch_t_test handles identical samples") {
  std::vector<double> a{1.0, 1.0, 1.0};
  WelchResult r = welch_t_test(a, a);
  CHECK(r.p_value == doctest::Approx(1.0));
}

TEST_CASE("evaluate_predictions pools grids and image labels") {
  auto data = make_hidden_dataset(5, 7);
  auto oracle = std::vector<Prediction>();
  for (const HiddenSnakeSample& sample : data) {
    Prediction p;
    p.height = sample.image.height;
    p.width = sample.image.width;
    p.labels.assign(static_cast<std::size_t>(sample.image.cells()), 0);
    p.image_label = 1;  // call everything NoSnake
    oracle.push_back(std::move(p));
  }
  EvalResult eval = evaluate_predictions(oracle, data);
  CHECK(eval.pixels == count_cells([&] {
          std::vector<LabelGrid> grids;
          for (const auto& sample : data) grids.push_back(sample.image.labels);
          return grids;
        }()));
  CHECK(eval.snake_cells_present);
  CHECK(eval.snake_cell_accuracy == doctest::Approx(0.0));
  REQUIRE(eval.image_accuracy.has_value());
  int no_snakes = 0;
  for (const auto& sample : data) no_snakes += sample.image_label == ImageClass::NoSnake ? 1 : 0;
  CHECK(*eval.image_accuracy ==
        doctest::Approx(static_cast<double>(no_snakes) / static_cast<double>(data.size())));
}
