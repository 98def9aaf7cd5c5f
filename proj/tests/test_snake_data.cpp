#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "typedcrf/crf_model.hpp"
#include "typedcrf/errors.hpp"
#include "typedcrf/snake_data.hpp"

using namespace typedcrf;

namespace {

SnakeImage straight_right_snake() {
  return snake_from_moves(std::vector<CellColor>(9, CellColor::Right));
}

}  // namespace

TEST_CASE("a straight walk becomes a 3x12 image of RIGHT cells labeled 1..10") {
  SnakeImage image = straight_right_snake();
  CHECK(image.height == 3);
  CHECK(image.width == 12);
  for (int c = 1; c <= 10; ++c) {
    CHECK(image.color(1, c) == CellColor::Right);
    CHECK(image.label(1, c) == c);
  }
  int colored = 0;
  for (CellColor color : image.colors) colored += color != CellColor::Background ? 1 : 0;
  CHECK(colored == 10);
}

TEST_CASE("snake_from_moves rejects self-intersecting walks") {
  std::vector<CellColor> loop{CellColor::Right, CellColor::Down, CellColor::Left,
                              CellColor::Up,    CellColor::Right, CellColor::Right,
                              CellColor::Right, CellColor::Right, CellColor::Right};
  CHECK_THROWS_AS(snake_from_moves(loop), std::invalid_argument);
  CHECK_THROWS_AS(snake_from_moves({CellColor::Up}), std::invalid_argument);
}

TEST_CASE("every generated snake passes the checker") {
  std::mt19937_64 rng(303);
  for (int i = 0; i < 1000; ++i) {
    SnakeImage image = generate_snake(rng());
    CHECK(contains_snake(image));
  }
}

TEST_CASE("generated images have the expected non-background fraction") {
  std::mt19937_64 rng(404);
  double fraction_sum = 0.0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    SnakeImage image = generate_snake(rng());
    fraction_sum += 10.0 / static_cast<double>(image.cells());
  }
  const double mean = fraction_sum / n;
  CHECK(mean > 0.267 - 0.05);
  CHECK(mean < 0.267 + 0.05);
}

TEST_CASE("contains_snake rejects non-snakes") {
  SnakeImage blank;
  blank.height = 3;
  blank.width = 4;
  blank.colors.assign(12, CellColor::Background);
  blank.labels.assign(12, 0);
  CHECK_FALSE(contains_snake(blank));

  SnakeImage broken = recolor_cell(straight_right_snake(), 1, 5, CellColor::Up);
  CHECK_FALSE(contains_snake(broken));
}

TEST_CASE("corrupt returns label-cleared NoSnake samples that fail the checker") {
  std::mt19937_64 rng(551);
  int returned = 0;
  const int total = 300;
  for (int i = 0; i < total; ++i) {
    SnakeImage image = generate_snake(rng());
    auto damaged = corrupt(image, rng());
    if (!damaged) continue;
    ++returned;
    CHECK(damaged->image_label == ImageClass::NoSnake);
    CHECK_FALSE(contains_snake(damaged->image));
    for (int label : damaged->image.labels) CHECK(label == 0);
  }
  // discard rate: about 12%, give or take ten points
  const double discard = 1.0 - static_cast<double>(returned) / total;
  CHECK(discard >= 0.02);
  CHECK(discard <= 0.22);
}

TEST_CASE("corrupt discards recolorings that still form a snake") {
  // hunt for a snake with a surviving recoloring, then confirm the discard
  std::mt19937_64 rng(661);
  bool found = false;
  for (int attempt = 0; attempt < 20000 && !found; ++attempt) {
    SnakeImage image = generate_snake(rng());
    for (int r = 0; r < image.height && !found; ++r)
      for (int c = 0; c < image.width && !found; ++c) {
        if (image.label(r, c) == 0) continue;
        for (CellColor color : {CellColor::Up, CellColor::Down, CellColor::Left, CellColor::Right}) {
          if (color == image.color(r, c)) continue;
          if (contains_snake(recolor_cell(image, r, c, color))) {
            found = true;
            break;
          }
        }
      }
    if (!found) continue;
    // the corrupt operation never returns those survivors
    for (int seed = 0; seed < 60; ++seed) {
      auto damaged = corrupt(image, static_cast<std::uint64_t>(seed));
      if (damaged) CHECK_FALSE(contains_snake(damaged->image));
    }
  }
  CHECK(found);
}

TEST_CASE("hidden datasets keep n snakes and nearly n corruptions") {
  auto data = make_hidden_dataset(150, 99);
  int snakes = 0, no_snakes = 0;
  for (const HiddenSnakeSample& sample : data) {
    if (sample.image_label == ImageClass::Snake) {
      ++snakes;
      CHECK(contains_snake(sample.image));
    } else {
      ++no_snakes;
      CHECK_FALSE(contains_snake(sample.image));
    }
  }
  CHECK(snakes == 150);
  CHECK(no_snakes >= 112);  // 0.75 n
  CHECK(no_snakes <= 150);
}

TEST_CASE("featurize_pixels pads a lone background cell with background one-hots") {
  SnakeImage image;
  image.height = 1;
  image.width = 1;
  image.colors = {CellColor::Background};
  image.labels = {0};
  PixelFeatures feats = featurize_pixels(image);
  CHECK(feats.nodes.rows == 1);
  CHECK(feats.nodes.cols == 45);
  CHECK(feats.edges.empty());
  for (int block = 0; block < 9; ++block) {
    for (int color = 0; color < 5; ++color) {
      const double expected = color == 4 ? 1.0 : 0.0;  // background slot
      CHECK(feats.nodes.at(0, block * 5 + color) == expected);
    }
  }
}

TEST_CASE("featurize_pixels produces the grid edge count and one-hot blocks") {
  std::mt19937_64 rng(17);
  SnakeImage image = generate_snake(rng());
  PixelFeatures feats = featurize_pixels(image);
  const int h = image.height, w = image.width;
  CHECK(feats.nodes.rows == h * w);
  CHECK(static_cast<int>(feats.edges.size()) == h * (w - 1) + (h - 1) * w);
  CHECK(feats.edge_features.rows == static_cast<int>(feats.edges.size()));
  CHECK(feats.edge_features.cols == 180);
  for (int v = 0; v < feats.nodes.rows; ++v)
    for (int block = 0; block < 9; ++block) {
      double sum = 0.0;
      for (int color = 0; color < 5; ++color) sum += feats.nodes.at(v, block * 5 + color);
      CHECK(sum == doctest::Approx(1.0));
    }
  // vertical edges fill the first two 45-blocks, horizontal ones the last two
  for (std::size_t e = 0; e < feats.edges.size(); ++e) {
    const Edge& edge = feats.edges[e];
    const bool horizontal = edge.target == edge.source + 1;
    double top = 0.0, bottom = 0.0, left = 0.0, right = 0.0;
    for (int f = 0; f < 45; ++f) {
      top += feats.edge_features.at(static_cast<int>(e), f);
      bottom += feats.edge_features.at(static_cast<int>(e), 45 + f);
      left += feats.edge_features.at(static_cast<int>(e), 90 + f);
      right += feats.edge_features.at(static_cast<int>(e), 135 + f);
    }
    if (horizontal) {
      CHECK(top == 0.0);
      CHECK(bottom == 0.0);
      CHECK(left == doctest::Approx(9.0));
      CHECK(right == doctest::Approx(9.0));
    } else {
      CHECK(top == doctest::Approx(9.0));
      CHECK(bottom == doctest::Approx(9.0));
      CHECK(left == 0.0);
      CHECK(right == 0.0);
    }
  }
}

TEST_CASE("featurize_image matches the hand-counted examples") {
  {
    SnakeImage blank;
    blank.height = 3;
    blank.width = 4;
    blank.colors.assign(12, CellColor::Background);
    blank.labels.assign(12, 0);
    CHECK(featurize_image(blank) == std::vector<double>{0, 0, 0, 0, 0, 0, 12});
  }
  {
    auto f = featurize_image(straight_right_snake());
    CHECK(f == std::vector<double>{1, 10, 0, 0, 0, 10, 26});
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    SnakeImage image = generate_snake(rng());
    auto f = featurize_image(image);
    CHECK(f[2] + f[3] + f[4] + f[5] + f[6] == doctest::Approx(image.cells()));
  }
}

TEST_CASE("the single-type builder fills the 11-label 45/180 schema") {
  SnakeImage image = straight_right_snake();
  auto [instance, labeling] = build_single_type_instance(image);
  const TypeSchema schema = single_type_schema();
  validate_instance(schema, instance);
  validate_labeling(schema, instance, labeling);
  CHECK(instance.num_nodes(0) == image.cells());
  CHECK(instance.node_features[0].cols == 45);
  CHECK(instance.edge_features[0].cols == 180);
  CHECK(param_count_typed(schema, true) == 22275);
}

TEST_CASE("the two-type builder adds one image node wired to every pixel") {
  std::mt19937_64 rng(77);
  HiddenSnakeSample sample{generate_snake(rng()), ImageClass::Snake};
  auto [instance, labeling] = build_typed_instance(sample);
  const TypeSchema schema = two_type_schema();
  validate_instance(schema, instance);
  validate_labeling(schema, instance, labeling);
  CHECK(instance.num_nodes(1) == 1);
  CHECK(instance.edges[1].size() == static_cast<std::size_t>(sample.image.cells()));
  for (const Edge& e : instance.edges[1]) CHECK(e.target == 0);
  CHECK(labeling[1][0] == 0);  // Snake maps to 0
  CHECK(param_count_typed(schema, true) == 23279);

  auto corrupted = corrupt(sample.image, 3);
  if (corrupted) {
    auto [bad_instance, bad_labeling] = build_typed_instance(*corrupted);
    CHECK(bad_labeling[1][0] == 1);
  }
}

TEST_CASE("make_constraints yields ten at-most-one constraints over all pixels") {
  std::mt19937_64 rng(88);
  HiddenSnakeSample sample{generate_snake(rng()), ImageClass::Snake};
  auto constraints = make_constraints(sample);
  REQUIRE(constraints.size() == 10);
  for (std::size_t s = 0; s < constraints.size(); ++s) {
    CHECK(constraints[s].op == FactorKind::AtMostOne);
    CHECK(constraints[s].literals.size() == static_cast<std::size_t>(sample.image.cells()));
    for (const ConstraintLiteral& lit : constraints[s].literals) {
      CHECK(lit.type == 0);
      CHECK(lit.state == static_cast<int>(s) + 1);
      CHECK_FALSE(lit.negated);
    }
  }
  // the gold labeling uses every snake state exactly once
  auto [instance, labeling] = build_typed_instance(sample);
  (void)instance;
  CHECK(check(constraints, labeling));
}

TEST_CASE("datasets round-trip through save and load") {
  auto data = make_hidden_dataset(8, 1234);
  const std::string path =
      (std::filesystem::temp_directory_path() / "typedcrf_dataset_test.txt").string();
  save_dataset(path, data);
  auto loaded = load_dataset(path);
  REQUIRE(loaded.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(loaded[i].image_label == data[i].image_label);
    CHECK(loaded[i].image.height == data[i].image.height);
    CHECK(loaded[i].image.width == data[i].image.width);
    CHECK(loaded[i].image.colors == data[i].image.colors);
    CHECK(loaded[i].image.labels == data[i].image.labels);
  }
  std::filesystem::remove(path);
}

TEST_CASE("an empty dataset file loads as an empty dataset") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "typedcrf_empty_test.txt").string();
  std::ofstream(path).close();
  CHECK(load_dataset(path).empty());
  std::filesystem::remove(path);
}

TEST_CASE("truncated dataset records raise parse errors with a line number") {
  auto data = make_snake_dataset(1, 55);
  const std::string path =
      (std::filesystem::temp_directory_path() / "typedcrf_truncated_test.txt").string();
  save_dataset(path, data);
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  in.close();
  std::string text = buffer.str();
  text.resize(text.size() / 2);  // cut mid-record
  std::ofstream out(path);
  out << text;
  out.close();
  try {
    load_dataset(path);
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line_number > 0);
  }
  std::filesystem::remove(path);
}
