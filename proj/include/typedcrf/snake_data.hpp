#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "typedcrf/constraints.hpp"
#include "typedcrf/crf_types.hpp"

namespace typedcrf {

enum class CellColor : std::uint8_t { Up, Down, Left, Right, Background };

char to_char(CellColor color);
CellColor color_from_char(char c);

// Colored grid with per-cell labels: 0 background, 1..10 snake cells in
// traversal order (tail = 1, head = 10).
struct SnakeImage {
  int height = 0;
  int width = 0;
  std::vector<CellColor> colors;  // row-major
  std::vector<int> labels;        // row-major

  CellColor color(int r, int c) const { return colors[static_cast<std::size_t>(r) * width + c]; }
  int label(int r, int c) const { return labels[static_cast<std::size_t>(r) * width + c]; }
  int cells() const { return height * width; }
};

enum class ImageClass : std::uint8_t { Snake, NoSnake };

struct HiddenSnakeSample {
  SnakeImage image;
  ImageClass image_label = ImageClass::Snake;
};

// Builds the image of a 10-cell walk given its 9 moves, cropped to the
// bounding box plus a one-cell background margin. Cell i is colored with the
// direction of the move out of it; the head repeats the last move's color.
// Throws std::invalid_argument when the walk revisits a cell.
SnakeImage snake_from_moves(const std::vector<CellColor>& moves);

// Uniform self-avoiding 10-cell walk by rejection sampling.
SnakeImage generate_snake(std::uint64_t seed);

// True iff exactly ten non-background cells form a color-consistent
// self-avoiding path; the head cell's color marks where the snake is heading
// out and is not constrained.
bool contains_snake(const SnakeImage& image);

// Copy with one cell recolored; labels are preserved.
SnakeImage recolor_cell(const SnakeImage& image, int r, int c, CellColor color);

// Recolors one random snake cell to a random other direction. Returns nothing
// when the damaged image still contains a snake; otherwise a NoSnake sample
// with all labels cleared.
std::optional<HiddenSnakeSample> corrupt(const SnakeImage& image, std::uint64_t seed);

// `count` Snake samples with their gold labels.
std::vector<HiddenSnakeSample> make_snake_dataset(int count, std::uint64_t seed);

// Each snake followed by its corruption when the corruption survives.
std::vector<HiddenSnakeSample> augment_with_corruptions(
    const std::vector<HiddenSnakeSample>& snakes, std::uint64_t seed);

// `count` Snake samples interleaved with their surviving corruptions.
std::vector<HiddenSnakeSample> make_hidden_dataset(int count, std::uint64_t seed);

struct PixelFeatures {
  Matrix nodes;             // cells x 45, one-hot of the 8-neighborhood + self
  std::vector<Edge> edges;  // 4-neighborhood, right then down per cell
  Matrix edge_features;     // edges x 180, [top|bottom|left|right] blocks
};

PixelFeatures featurize_pixels(const SnakeImage& image);

// (non-background bbox height, bbox width, #up, #down, #left, #right, #background)
std::vector<double> featurize_image(const SnakeImage& image);

TypeSchema single_type_schema();
TypeSchema two_type_schema();

// Grid CRF over pixels: 11 labels, 45/180 features.
std::pair<TypedGraphInstance, Labeling> build_single_type_instance(const SnakeImage& image);

// Adds an image-level node (2 labels, 7 features) and one edge from every
// pixel to it carrying the pixel's own 45 features.
std::pair<TypedGraphInstance, Labeling> build_typed_instance(const HiddenSnakeSample& sample);

// For each state 1..10, at most one pixel may carry it.
std::vector<NodeStateConstraint> make_constraints(const HiddenSnakeSample& sample);

void save_dataset(const std::string& path, const std::vector<HiddenSnakeSample>& samples);
std::vector<HiddenSnakeSample> load_dataset(const std::string& path);

}  // namespace typedcrf
