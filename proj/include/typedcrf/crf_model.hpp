#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "typedcrf/constraints.hpp"
#include "typedcrf/crf_types.hpp"
#include "typedcrf/factor_graph.hpp"

namespace typedcrf {

// Throw DimensionError when shapes disagree with the schema.
void validate_schema(const TypeSchema& schema);
void validate_instance(const TypeSchema& schema, const TypedGraphInstance& g);
void validate_labeling(const TypeSchema& schema, const TypedGraphInstance& g, const Labeling& y);
void validate_weights(const TypeSchema& schema, const Weights& w);

Weights zero_weights(const TypeSchema& schema);

std::size_t flat_size(const TypeSchema& schema);

// Canonical flattening: unary blocks in type order (row-major), then pairwise
// blocks in (t, t') lexicographic order (label-pair-major, then feature).
std::vector<double> flatten(const TypeSchema& schema, const Weights& w);
Weights unflatten(const TypeSchema& schema, const std::vector<double>& flat);

// Score of labeling y: unary terms over nodes plus pairwise terms over edges.
double potential(const TypeSchema& schema, const TypedGraphInstance& g,
                 const Labeling& y, const Weights& w);

// Features aggregated per (type, label) and (type pair, label pair), laid out
// in the weight flattening order, so potential == dot(flatten(w), joint_feature).
std::vector<double> joint_feature(const TypeSchema& schema, const TypedGraphInstance& g,
                                  const Labeling& y);

// Label-block count of the single-concatenated-label-space model.
long long param_count_naive(const TypeSchema& schema);

// Typed model parameter count; with_feature_dims multiplies blocks by their
// feature dimensionalities (pairs with no edge features contribute nothing).
long long param_count_typed(const TypeSchema& schema, bool with_feature_dims);

struct UnrolledGraph {
  FactorGraph graph;
  BlockIndex blocks;
};

// Binarization: one variable per (node, state) with its unary score, an XOR
// factor per node, one variable per (edge, state pair) with its pairwise
// score, and per edge the marginalization XOR factors tying edge variables to
// the (negated) endpoint variables. Constraint factors are appended last.
UnrolledGraph unroll(const TypeSchema& schema, const TypedGraphInstance& g,
                     const Weights& w,
                     const std::vector<NodeStateConstraint>& constraints = {});

// Per-node argmax over each node's posterior block; ties take the lowest state.
Labeling round_labeling(const std::vector<double>& posteriors, const BlockIndex& blocks);

// MAP decoding: unroll, solve, round per node. Constrained predictions are
// repaired to satisfy the constraints exactly when rounding breaks them.
// `details`, when non-null, receives the raw solver result.
Labeling predict(const TypeSchema& schema, const TypedGraphInstance& g, const Weights& w,
                 const AdmmSettings& settings = {},
                 const std::vector<NodeStateConstraint>& constraints = {},
                 InferenceResult* details = nullptr);

// Margin-rescaled decoding: every non-gold state earns +1 (per-node Hamming).
Labeling loss_augmented_predict(const TypeSchema& schema, const TypedGraphInstance& g,
                                const Weights& w, const Labeling& gold,
                                const AdmmSettings& settings = {},
                                InferenceResult* details = nullptr);

// Relaxed margin-rescaled decoding for learning. When inference is integral
// the expected quantities coincide with joint_feature / hamming of the
// rounded labeling; on fractional solutions they follow the posteriors, which
// keeps the violation signal the rounding would destroy.
struct RelaxedDecode {
  Labeling labeling;
  std::vector<double> expected_feature;
  double expected_loss = 0.0;
  SolveStatus status = SolveStatus::MaxIterations;
};

RelaxedDecode loss_augmented_decode(const TypeSchema& schema, const TypedGraphInstance& g,
                                    const Weights& w, const Labeling& gold,
                                    const AdmmSettings& settings = {});

// Text model file: one header line with the schema counts, then the flattened
// weights one value per line.
void save_model(const std::string& path, const TypeSchema& schema, const Weights& w);
std::pair<TypeSchema, Weights> load_model(const std::string& path);

}  // namespace typedcrf
