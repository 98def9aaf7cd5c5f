#include "typedcrf/snake_data.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "typedcrf/errors.hpp"

namespace typedcrf {

char to_char(CellColor color) {
  switch (color) {
    case CellColor::Up: return 'U';
    case CellColor::Down: return 'D';
    case CellColor::Left: return 'L';
    case CellColor::Right: return 'R';
    case CellColor::Background: return '.';
  }
  return '?';
}

CellColor color_from_char(char c) {
  switch (c) {
    case 'U': return CellColor::Up;
    case 'D': return CellColor::Down;
    case 'L': return CellColor::Left;
    case 'R': return CellColor::Right;
    case '.': return CellColor::Background;
  }
  throw std::invalid_argument(std::string("unknown color code '") + c + "'");
}

namespace {

constexpr int kSnakeLength = 10;

struct Offset {
  int dr;
  int dc;
};

Offset direction_offset(CellColor color) {
  switch (color) {
    case CellColor::Up: return {-1, 0};
    case CellColor::Down: return {1, 0};
    case CellColor::Left: return {0, -1};
    case CellColor::Right: return {0, 1};
    case CellColor::Background: break;
  }
  throw std::invalid_argument("background has no direction");
}

}  // namespace

SnakeImage snake_from_moves(const std::vector<CellColor>& moves) {
  if (moves.size() != kSnakeLength - 1)
    throw std::invalid_argument("a snake has exactly nine moves");
  std::vector<std::pair<int, int>> path{{0, 0}};
  for (CellColor move : moves) {
    Offset o = direction_offset(move);
    path.push_back({path.back().first + o.dr, path.back().second + o.dc});
  }
  for (std::size_t a = 0; a < path.size(); ++a)
    for (std::size_t b = a + 1; b < path.size(); ++b)
      if (path[a] == path[b]) throw std::invalid_argument("walk revisits a cell");

  int min_r = 0, max_r = 0, min_c = 0, max_c = 0;
  for (auto [r, c] : path) {
    min_r = std::min(min_r, r);
    max_r = std::max(max_r, r);
    min_c = std::min(min_c, c);
    max_c = std::max(max_c, c);
  }
  SnakeImage image;
  image.height = max_r - min_r + 3;  // bounding box plus a one-cell margin
  image.width = max_c - min_c + 3;
  image.colors.assign(static_cast<std::size_t>(image.cells()), CellColor::Background);
  image.labels.assign(static_cast<std::size_t>(image.cells()), 0);
  for (int i = 0; i < kSnakeLength; ++i) {
    const int r = path[static_cast<std::size_t>(i)].first - min_r + 1;
    const int c = path[static_cast<std::size_t>(i)].second - min_c + 1;
    const std::size_t idx = static_cast<std::size_t>(r) * image.width + c;
    // the head repeats the direction of the move that reached it
    image.colors[idx] = i < kSnakeLength - 1 ? moves[static_cast<std::size_t>(i)] : moves.back();
    image.labels[idx] = i + 1;
  }
  return image;
}

SnakeImage generate_snake(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 3);
  const CellColor directions[4] = {CellColor::Up, CellColor::Down, CellColor::Left,
                                   CellColor::Right};
  std::vector<CellColor> moves(kSnakeLength - 1);
  while (true) {
    for (CellColor& move : moves) move = directions[pick(rng)];
    try {
      return snake_from_moves(moves);
    } catch (const std::invalid_argument&) {
      // revisiting walk; resample
    }
  }
}

bool contains_snake(const SnakeImage& image) {
  std::vector<std::pair<int, int>> colored;
  for (int r = 0; r < image.height; ++r)
    for (int c = 0; c < image.width; ++c)
      if (image.color(r, c) != CellColor::Background) colored.push_back({r, c});
  if (colored.size() != kSnakeLength) return false;

  // A snake exists when some colored cell starts a self-avoiding path whose
  // colors point along it through all ten cells. The head's own color only
  // marks where the snake is heading out and carries no validity information.
  for (auto [start_r, start_c] : colored) {
    std::vector<std::pair<int, int>> visited{{start_r, start_c}};
    int r = start_r, c = start_c;
    bool broke = false;
    for (int step = 0; step < kSnakeLength - 1; ++step) {
      Offset o = direction_offset(image.color(r, c));
      r += o.dr;
      c += o.dc;
      if (r < 0 || r >= image.height || c < 0 || c >= image.width ||
          image.color(r, c) == CellColor::Background ||
          std::find(visited.begin(), visited.end(), std::make_pair(r, c)) != visited.end()) {
        broke = true;
        break;
      }
      visited.push_back({r, c});
    }
    if (!broke) return true;
  }
  return false;
}

SnakeImage recolor_cell(const SnakeImage& image, int r, int c, CellColor color) {
  SnakeImage out = image;
  out.colors[static_cast<std::size_t>(r) * image.width + c] = color;
  return out;
}

std::optional<HiddenSnakeSample> corrupt(const SnakeImage& image, std::uint64_t seed) {
  std::vector<std::pair<int, int>> snake_cells(kSnakeLength);
  int found = 0;
  for (int r = 0; r < image.height; ++r)
    for (int c = 0; c < image.width; ++c) {
      int label = image.label(r, c);
      if (label > 0) {
        snake_cells[static_cast<std::size_t>(label - 1)] = {r, c};
        ++found;
      }
    }
  if (found != kSnakeLength)
    throw std::invalid_argument("corrupt expects a labeled snake image");

  std::mt19937_64 rng(seed);
  auto [r, c] = snake_cells[std::uniform_int_distribution<std::size_t>(0, kSnakeLength - 1)(rng)];
  const CellColor directions[4] = {CellColor::Up, CellColor::Down, CellColor::Left,
                                   CellColor::Right};
  std::vector<CellColor> others;
  for (CellColor d : directions)
    if (d != image.color(r, c)) others.push_back(d);
  CellColor replacement = others[std::uniform_int_distribution<std::size_t>(0, others.size() - 1)(rng)];

  SnakeImage damaged = recolor_cell(image, r, c, replacement);
  if (contains_snake(damaged)) return std::nullopt;  // discard: still a snake
  std::fill(damaged.labels.begin(), damaged.labels.end(), 0);
  return HiddenSnakeSample{std::move(damaged), ImageClass::NoSnake};
}

std::vector<HiddenSnakeSample> make_snake_dataset(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<HiddenSnakeSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out.push_back({generate_snake(rng()), ImageClass::Snake});
  return out;
}

std::vector<HiddenSnakeSample> augment_with_corruptions(
    const std::vector<HiddenSnakeSample>& snakes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<HiddenSnakeSample> out;
  out.reserve(2 * snakes.size());
  for (const HiddenSnakeSample& sample : snakes) {
    std::uint64_t corrupt_seed = rng();
    out.push_back(sample);
    if (auto damaged = corrupt(sample.image, corrupt_seed)) out.push_back(std::move(*damaged));
  }
  return out;
}

std::vector<HiddenSnakeSample> make_hidden_dataset(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uint64_t snakes_seed = rng();
  std::uint64_t corrupt_seed = rng();
  return augment_with_corruptions(make_snake_dataset(count, snakes_seed), corrupt_seed);
}

namespace {

constexpr int kColors = 5;
constexpr int kNeighborhood = 9;  // self + 8 neighbors
constexpr int kNodeDim = kNeighborhood * kColors;
constexpr int kEdgeDim = 4 * kNodeDim;

// (self, N, NE, E, SE, S, SW, W, NW)
constexpr Offset kNeighborOrder[kNeighborhood] = {
    {0, 0}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}};

void write_node_feature(const SnakeImage& image, int r, int c, double* row) {
  for (int nb = 0; nb < kNeighborhood; ++nb) {
    const int nr = r + kNeighborOrder[nb].dr;
    const int nc = c + kNeighborOrder[nb].dc;
    CellColor color = CellColor::Background;
    if (nr >= 0 && nr < image.height && nc >= 0 && nc < image.width)
      color = image.color(nr, nc);
    row[nb * kColors + static_cast<int>(color)] = 1.0;
  }
}

}  // namespace

PixelFeatures featurize_pixels(const SnakeImage& image) {
  PixelFeatures out;
  out.nodes = Matrix(image.cells(), kNodeDim);
  for (int r = 0; r < image.height; ++r)
    for (int c = 0; c < image.width; ++c)
      write_node_feature(image, r, c, out.nodes.row(r * image.width + c));

  for (int r = 0; r < image.height; ++r)
    for (int c = 0; c < image.width; ++c) {
      if (c + 1 < image.width)
        out.edges.push_back({r * image.width + c, r * image.width + c + 1});
      if (r + 1 < image.height)
        out.edges.push_back({r * image.width + c, (r + 1) * image.width + c});
    }

  out.edge_features = Matrix(static_cast<int>(out.edges.size()), kEdgeDim);
  for (std::size_t e = 0; e < out.edges.size(); ++e) {
    const Edge& edge = out.edges[e];
    double* row = out.edge_features.row(static_cast<int>(e));
    const bool horizontal = edge.target == edge.source + 1;
    // block order: top, bottom, left, right; two blocks per edge are non-zero
    const double* source_row = out.nodes.row(edge.source);
    const double* target_row = out.nodes.row(edge.target);
    if (horizontal) {
      std::copy(source_row, source_row + kNodeDim, row + 2 * kNodeDim);
      std::copy(target_row, target_row + kNodeDim, row + 3 * kNodeDim);
    } else {
      std::copy(source_row, source_row + kNodeDim, row);
      std::copy(target_row, target_row + kNodeDim, row + kNodeDim);
    }
  }
  return out;
}

std::vector<double> featurize_image(const SnakeImage& image) {
  int min_r = image.height, max_r = -1, min_c = image.width, max_c = -1;
  double counts[kColors] = {0, 0, 0, 0, 0};
  for (int r = 0; r < image.height; ++r)
    for (int c = 0; c < image.width; ++c) {
      CellColor color = image.color(r, c);
      counts[static_cast<int>(color)] += 1.0;
      if (color != CellColor::Background) {
        min_r = std::min(min_r, r);
        max_r = std::max(max_r, r);
        min_c = std::min(min_c, c);
        max_c = std::max(max_c, c);
      }
    }
  const double bbox_h = max_r >= min_r ? static_cast<double>(max_r - min_r + 1) : 0.0;
  const double bbox_w = max_c >= min_c ? static_cast<double>(max_c - min_c + 1) : 0.0;
  return {bbox_h,
          bbox_w,
          counts[static_cast<int>(CellColor::Up)],
          counts[static_cast<int>(CellColor::Down)],
          counts[static_cast<int>(CellColor::Left)],
          counts[static_cast<int>(CellColor::Right)],
          counts[static_cast<int>(CellColor::Background)]};
}

TypeSchema single_type_schema() {
  TypeSchema schema;
  schema.labels = {11};
  schema.node_dims = {kNodeDim};
  schema.edge_dims = {kEdgeDim};
  return schema;
}

TypeSchema two_type_schema() {
  TypeSchema schema;
  schema.labels = {11, 2};
  schema.node_dims = {kNodeDim, 7};
  // pairs row-major: (pixel,pixel)=180, (pixel,image)=45, (image,*)=none
  schema.edge_dims = {kEdgeDim, kNodeDim, 0, 0};
  return schema;
}

std::pair<TypedGraphInstance, Labeling> build_single_type_instance(const SnakeImage& image) {
  PixelFeatures feats = featurize_pixels(image);
  TypedGraphInstance g;
  g.node_features = {std::move(feats.nodes)};
  g.edges = {std::move(feats.edges)};
  g.edge_features = {std::move(feats.edge_features)};
  Labeling y{image.labels};
  return {std::move(g), std::move(y)};
}

std::pair<TypedGraphInstance, Labeling> build_typed_instance(const HiddenSnakeSample& sample) {
  const SnakeImage& image = sample.image;
  PixelFeatures feats = featurize_pixels(image);

  TypedGraphInstance g;
  g.node_features.resize(2);
  g.edges.resize(4);
  g.edge_features.resize(4);

  Matrix image_node(1, 7);
  std::vector<double> image_feature = featurize_image(image);
  std::copy(image_feature.begin(), image_feature.end(), image_node.row(0));

  Matrix pixel_to_image(image.cells(), kNodeDim);
  std::vector<Edge> image_edges;
  image_edges.reserve(static_cast<std::size_t>(image.cells()));
  for (int v = 0; v < image.cells(); ++v) {
    image_edges.push_back({v, 0});
    const double* row = feats.nodes.row(v);
    std::copy(row, row + kNodeDim, pixel_to_image.row(v));
  }

  g.node_features[0] = std::move(feats.nodes);
  g.node_features[1] = std::move(image_node);
  g.edges[0] = std::move(feats.edges);
  g.edge_features[0] = std::move(feats.edge_features);
  g.edges[1] = std::move(image_edges);
  g.edge_features[1] = std::move(pixel_to_image);

  Labeling y(2);
  y[0] = image.labels;
  y[1] = {sample.image_label == ImageClass::Snake ? 0 : 1};
  return {std::move(g), std::move(y)};
}

std::vector<NodeStateConstraint> make_constraints(const HiddenSnakeSample& sample) {
  const int cells = sample.image.cells();
  std::vector<NodeStateConstraint> constraints;
  constraints.reserve(kSnakeLength);
  for (int state = 1; state <= kSnakeLength; ++state) {
    NodeStateConstraint c;
    c.op = FactorKind::AtMostOne;
    c.literals.reserve(static_cast<std::size_t>(cells));
    for (int v = 0; v < cells; ++v) c.literals.push_back({0, v, state, false});
    constraints.push_back(std::move(c));
  }
  return constraints;
}

void save_dataset(const std::string& path, const std::vector<HiddenSnakeSample>& samples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open dataset file for writing: " + path);
  for (const HiddenSnakeSample& sample : samples) {
    const SnakeImage& image = sample.image;
    out << image.height << ' ' << image.width << ' '
        << (sample.image_label == ImageClass::Snake ? 'S' : 'N') << '\n';
    for (int r = 0; r < image.height; ++r) {
      for (int c = 0; c < image.width; ++c) out << to_char(image.color(r, c));
      out << '\n';
    }
    for (int r = 0; r < image.height; ++r) {
      for (int c = 0; c < image.width; ++c) {
        if (c) out << ' ';
        out << image.label(r, c);
      }
      out << '\n';
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing dataset file: " + path);
}

std::vector<HiddenSnakeSample> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::vector<HiddenSnakeSample> samples;
  std::string line;
  std::size_t line_number = 0;

  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;

    std::istringstream head(line);
    HiddenSnakeSample sample;
    char label_char = 0;
    if (!(head >> sample.image.height >> sample.image.width >> label_char) ||
        sample.image.height < 1 || sample.image.width < 1)
      throw ParseError("bad record header", line_number);
    if (label_char == 'S') sample.image_label = ImageClass::Snake;
    else if (label_char == 'N') sample.image_label = ImageClass::NoSnake;
    else throw ParseError("bad image label (expected S or N)", line_number);

    SnakeImage& image = sample.image;
    image.colors.assign(static_cast<std::size_t>(image.cells()), CellColor::Background);
    image.labels.assign(static_cast<std::size_t>(image.cells()), 0);

    for (int r = 0; r < image.height; ++r) {
      if (!std::getline(in, line)) throw ParseError("truncated color grid", line_number);
      ++line_number;
      if (static_cast<int>(line.size()) != image.width)
        throw ParseError("color row width disagrees with the header", line_number);
      for (int c = 0; c < image.width; ++c) {
        try {
          image.colors[static_cast<std::size_t>(r) * image.width + c] = color_from_char(line[static_cast<std::size_t>(c)]);
        } catch (const std::invalid_argument&) {
          throw ParseError("bad color code", line_number);
        }
      }
    }
    for (int r = 0; r < image.height; ++r) {
      if (!std::getline(in, line)) throw ParseError("truncated label grid", line_number);
      ++line_number;
      std::istringstream row(line);
      for (int c = 0; c < image.width; ++c) {
        int value = 0;
        if (!(row >> value) || value < 0 || value > 10)
          throw ParseError("bad label value", line_number);
        image.labels[static_cast<std::size_t>(r) * image.width + c] = value;
      }
      int extra = 0;
      if (row >> extra) throw ParseError("label row longer than the header width", line_number);
    }
    samples.push_back(std::move(sample));
  }
  return samples;
}

}  // namespace typedcrf
