#pragma once

#include <cstddef>
#include <vector>

namespace typedcrf {

// Dense row-major matrix, the only shape the model needs.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }
  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
};

// Shapes of a k-type model: per-type label and node-feature counts, and
// per ordered type pair the edge-feature count (0 admits no edges).
struct TypeSchema {
  std::vector<int> labels;     // l_t, one per type
  std::vector<int> node_dims;  // d_t, one per type
  std::vector<int> edge_dims;  // d_{t,t'}, k*k row-major

  int num_types() const { return static_cast<int>(labels.size()); }
  int pair_dim(int t, int u) const {
    return edge_dims[static_cast<std::size_t>(t) * labels.size() + u];
  }
};

struct Edge {
  int source = 0;
  int target = 0;
};

// One input graph: per-type node feature rows, per-type-pair edge lists with
// matching edge feature rows. Pair containers are k*k row-major like the
// schema's edge_dims.
struct TypedGraphInstance {
  std::vector<Matrix> node_features;
  std::vector<std::vector<Edge>> edges;
  std::vector<Matrix> edge_features;

  int num_nodes(int type) const { return node_features[static_cast<std::size_t>(type)].rows; }
};

// Per type, one label in {0, .., l_t - 1} per node.
using Labeling = std::vector<std::vector<int>>;

// Unary block per type (l_t x d_t) and pairwise block per ordered type pair
// (l_t x l_{t'} x d_{t,t'}, label-pair-major then feature).
struct Weights {
  std::vector<Matrix> unary;
  std::vector<std::vector<double>> pairwise;

  double pairwise_at(const TypeSchema& schema, int t, int u, int i, int j, int f) const {
    const int lu = schema.labels[static_cast<std::size_t>(u)];
    const int d = schema.pair_dim(t, u);
    return pairwise[static_cast<std::size_t>(t) * schema.labels.size() + u]
                   [(static_cast<std::size_t>(i) * lu + j) * d + f];
  }
};

// Maps each (type, node) to the contiguous range of its per-state binary
// variables inside an unrolled factor graph.
struct BlockIndex {
  std::vector<int> labels;                    // copy of schema label counts
  std::vector<std::vector<int>> node_offset;  // per type, per node
  int num_node_variables = 0;

  int variable(int type, int node, int state) const {
    return node_offset[static_cast<std::size_t>(type)][static_cast<std::size_t>(node)] + state;
  }
};

}  // namespace typedcrf
