#include "typedcrf/crf_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "typedcrf/errors.hpp"

namespace typedcrf {

void validate_schema(const TypeSchema& schema) {
  const std::size_t k = schema.labels.size();
  if (k == 0) throw DimensionError("schema needs at least one type");
  if (schema.node_dims.size() != k || schema.edge_dims.size() != k * k)
    throw DimensionError("schema shape vectors disagree with the type count");
  for (int l : schema.labels)
    if (l < 1) throw DimensionError("every type needs at least one label");
  for (int d : schema.node_dims)
    if (d < 1) throw DimensionError("every type needs at least one node feature");
  for (int d : schema.edge_dims)
    if (d < 0) throw DimensionError("edge feature counts cannot be negative");
}

void validate_instance(const TypeSchema& schema, const TypedGraphInstance& g) {
  validate_schema(schema);
  const std::size_t k = schema.labels.size();
  if (g.node_features.size() != k || g.edges.size() != k * k || g.edge_features.size() != k * k)
    throw DimensionError("instance containers disagree with the type count");
  for (std::size_t t = 0; t < k; ++t)
    if (g.node_features[t].cols != schema.node_dims[t])
      throw DimensionError("node feature width disagrees with the schema");
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t u = 0; u < k; ++u) {
      const std::size_t p = t * k + u;
      const int d = schema.edge_dims[p];
      if (d == 0 && !g.edges[p].empty())
        throw DimensionError("type pair with no edge features admits no edges");
      if (g.edge_features[p].rows != static_cast<int>(g.edges[p].size()))
        throw DimensionError("edge feature row count disagrees with the edge list");
      if (!g.edges[p].empty() && g.edge_features[p].cols != d)
        throw DimensionError("edge feature width disagrees with the schema");
      for (const Edge& e : g.edges[p]) {
        if (e.source < 0 || e.source >= g.node_features[t].rows ||
            e.target < 0 || e.target >= g.node_features[u].rows)
          throw DimensionError("edge endpoint out of range");
      }
    }
  }
}

void validate_labeling(const TypeSchema& schema, const TypedGraphInstance& g, const Labeling& y) {
  if (y.size() != schema.labels.size())
    throw DimensionError("labeling type count disagrees with the schema");
  for (std::size_t t = 0; t < y.size(); ++t) {
    if (static_cast<int>(y[t].size()) != g.node_features[t].rows)
      throw DimensionError("labeling length disagrees with the node count");
    for (int label : y[t])
      if (label < 0 || label >= schema.labels[t])
        throw DimensionError("label out of range for its type");
  }
}

void validate_weights(const TypeSchema& schema, const Weights& w) {
  const std::size_t k = schema.labels.size();
  if (w.unary.size() != k || w.pairwise.size() != k * k)
    throw DimensionError("weight containers disagree with the type count");
  for (std::size_t t = 0; t < k; ++t)
    if (w.unary[t].rows != schema.labels[t] || w.unary[t].cols != schema.node_dims[t])
      throw DimensionError("unary weight block has the wrong shape");
  for (std::size_t t = 0; t < k; ++t)
    for (std::size_t u = 0; u < k; ++u) {
      const std::size_t expected = static_cast<std::size_t>(schema.labels[t]) *
                                   schema.labels[u] * schema.pair_dim(static_cast<int>(t), static_cast<int>(u));
      if (w.pairwise[t * k + u].size() != expected)
        throw DimensionError("pairwise weight block has the wrong size");
    }
}

Weights zero_weights(const TypeSchema& schema) {
  validate_schema(schema);
  const std::size_t k = schema.labels.size();
  Weights w;
  w.unary.reserve(k);
  for (std::size_t t = 0; t < k; ++t)
    w.unary.emplace_back(schema.labels[t], schema.node_dims[t]);
  w.pairwise.resize(k * k);
  for (std::size_t t = 0; t < k; ++t)
    for (std::size_t u = 0; u < k; ++u)
      w.pairwise[t * k + u].assign(static_cast<std::size_t>(schema.labels[t]) *
                                       schema.labels[u] *
                                       schema.pair_dim(static_cast<int>(t), static_cast<int>(u)),
                                   0.0);
  return w;
}

std::size_t flat_size(const TypeSchema& schema) {
  const std::size_t k = schema.labels.size();
  std::size_t total = 0;
  for (std::size_t t = 0; t < k; ++t)
    total += static_cast<std::size_t>(schema.labels[t]) * schema.node_dims[t];
  for (std::size_t t = 0; t < k; ++t)
    for (std::size_t u = 0; u < k; ++u)
      total += static_cast<std::size_t>(schema.labels[t]) * schema.labels[u] *
               schema.pair_dim(static_cast<int>(t), static_cast<int>(u));
  return total;
}

std::vector<double> flatten(const TypeSchema& schema, const Weights& w) {
  validate_weights(schema, w);
  std::vector<double> flat;
  flat.reserve(flat_size(schema));
  for (const Matrix& block : w.unary)
    flat.insert(flat.end(), block.data.begin(), block.data.end());
  for (const std::vector<double>& block : w.pairwise)
    flat.insert(flat.end(), block.begin(), block.end());
  return flat;
}

Weights unflatten(const TypeSchema& schema, const std::vector<double>& flat) {
  if (flat.size() != flat_size(schema))
    throw DimensionError("flat weight vector has the wrong length");
  Weights w = zero_weights(schema);
  std::size_t pos = 0;
  for (Matrix& block : w.unary) {
    std::copy(flat.begin() + pos, flat.begin() + pos + block.data.size(), block.data.begin());
    pos += block.data.size();
  }
  for (std::vector<double>& block : w.pairwise) {
    std::copy(flat.begin() + pos, flat.begin() + pos + block.size(), block.begin());
    pos += block.size();
  }
  return w;
}

namespace {

double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double potential(const TypeSchema& schema, const TypedGraphInstance& g,
                 const Labeling& y, const Weights& w) {
  validate_instance(schema, g);
  validate_labeling(schema, g, y);
  validate_weights(schema, w);
  const std::size_t k = schema.labels.size();
  double total = 0.0;
  for (std::size_t t = 0; t < k; ++t) {
    const Matrix& feats = g.node_features[t];
    const Matrix& block = w.unary[t];
    for (int v = 0; v < feats.rows; ++v)
      total += dot(block.row(y[t][static_cast<std::size_t>(v)]), feats.row(v), feats.cols);
  }
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t u = 0; u < k; ++u) {
      const std::size_t p = t * k + u;
      const int d = schema.edge_dims[p];
      if (d == 0) continue;
      const std::vector<double>& block = w.pairwise[p];
      const Matrix& feats = g.edge_features[p];
      const int lu = schema.labels[u];
      for (std::size_t e = 0; e < g.edges[p].size(); ++e) {
        const Edge& edge = g.edges[p][e];
        const int i = y[t][static_cast<std::size_t>(edge.source)];
        const int j = y[u][static_cast<std::size_t>(edge.target)];
        total += dot(block.data() + (static_cast<std::size_t>(i) * lu + j) * d,
                     feats.row(static_cast<int>(e)), d);
      }
    }
  }
  return total;
}

std::vector<double> joint_feature(const TypeSchema& schema, const TypedGraphInstance& g,
                                  const Labeling& y) {
  validate_instance(schema, g);
  validate_labeling(schema, g, y);
  const std::size_t k = schema.labels.size();
  std::vector<double> phi(flat_size(schema), 0.0);

  std::size_t offset = 0;
  for (std::size_t t = 0; t < k; ++t) {
    const Matrix& feats = g.node_features[t];
    const int d = feats.cols;
    for (int v = 0; v < feats.rows; ++v) {
      double* slot = phi.data() + offset +
                     static_cast<std::size_t>(y[t][static_cast<std::size_t>(v)]) * d;
      const double* row = feats.row(v);
      for (int f = 0; f < d; ++f) slot[f] += row[f];
    }
    offset += static_cast<std::size_t>(schema.labels[t]) * d;
  }
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t u = 0; u < k; ++u) {
      const std::size_t p = t * k + u;
      const int d = schema.edge_dims[p];
      const int lu = schema.labels[u];
      const Matrix& feats = g.edge_features[p];
      for (std::size_t e = 0; e < g.edges[p].size(); ++e) {
        const Edge& edge = g.edges[p][e];
        const int i = y[t][static_cast<std::size_t>(edge.source)];
        const int j = y[u][static_cast<std::size_t>(edge.target)];
        double* slot = phi.data() + offset + (static_cast<std::size_t>(i) * lu + j) * d;
        const double* row = feats.row(static_cast<int>(e));
        for (int f = 0; f < d; ++f) slot[f] += row[f];
      }
      offset += static_cast<std::size_t>(schema.labels[t]) * lu * d;
    }
  }
  return phi;
}

long long param_count_naive(const TypeSchema& schema) {
  validate_schema(schema);
  long long label_sum = 0;
  for (int l : schema.labels) label_sum += l;
  return static_cast<long long>(schema.num_types()) * label_sum + label_sum * label_sum;
}

long long param_count_typed(const TypeSchema& schema, bool with_feature_dims) {
  validate_schema(schema);
  const int k = schema.num_types();
  long long total = 0;
  for (int t = 0; t < k; ++t)
    total += static_cast<long long>(schema.labels[static_cast<std::size_t>(t)]) *
             (with_feature_dims ? schema.node_dims[static_cast<std::size_t>(t)] : 1);
  for (int t = 0; t < k; ++t)
    for (int u = 0; u < k; ++u) {
      const long long pair = static_cast<long long>(schema.labels[static_cast<std::size_t>(t)]) *
                             schema.labels[static_cast<std::size_t>(u)];
      total += with_feature_dims ? pair * schema.pair_dim(t, u) : pair;
    }
  return total;
}

UnrolledGraph unroll(const TypeSchema& schema, const TypedGraphInstance& g,
                     const Weights& w, const std::vector<NodeStateConstraint>& constraints) {
  validate_instance(schema, g);
  validate_weights(schema, w);
  const std::size_t k = schema.labels.size();

  UnrolledGraph out;
  out.blocks.labels = schema.labels;
  out.blocks.node_offset.resize(k);

  // Node variables and one XOR per node.
  for (std::size_t t = 0; t < k; ++t) {
    const Matrix& feats = g.node_features[t];
    const Matrix& block = w.unary[t];
    out.blocks.node_offset[t].resize(static_cast<std::size_t>(feats.rows));
    for (int v = 0; v < feats.rows; ++v) {
      const int first = out.graph.num_variables();
      out.blocks.node_offset[t][static_cast<std::size_t>(v)] = first;
      for (int i = 0; i < schema.labels[t]; ++i)
        out.graph.add_variable(dot(block.row(i), feats.row(v), feats.cols));
      std::vector<Literal> lits;
      lits.reserve(static_cast<std::size_t>(schema.labels[t]));
      for (int i = 0; i < schema.labels[t]; ++i) lits.push_back({first + i, false});
      out.graph.add_factor(FactorKind::Xor, std::move(lits));
    }
  }
  out.blocks.num_node_variables = out.graph.num_variables();

  // Edge variables plus the marginalization XORs tying them to the endpoints.
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t u = 0; u < k; ++u) {
      const std::size_t p = t * k + u;
      const int d = schema.edge_dims[p];
      if (d == 0) continue;
      const int lt = schema.labels[t];
      const int lu = schema.labels[u];
      const std::vector<double>& block = w.pairwise[p];
      const Matrix& feats = g.edge_features[p];
      for (std::size_t e = 0; e < g.edges[p].size(); ++e) {
        const Edge& edge = g.edges[p][e];
        const int first = out.graph.num_variables();
        const double* row = feats.row(static_cast<int>(e));
        for (int i = 0; i < lt; ++i)
          for (int j = 0; j < lu; ++j)
            out.graph.add_variable(
                dot(block.data() + (static_cast<std::size_t>(i) * lu + j) * d, row, d));
        for (int i = 0; i < lt; ++i) {
          std::vector<Literal> lits;
          lits.reserve(static_cast<std::size_t>(lu) + 1);
          for (int j = 0; j < lu; ++j) lits.push_back({first + i * lu + j, false});
          lits.push_back({out.blocks.variable(static_cast<int>(t), edge.source, i), true});
          out.graph.add_factor(FactorKind::Xor, std::move(lits));
        }
        for (int j = 0; j < lu; ++j) {
          std::vector<Literal> lits;
          lits.reserve(static_cast<std::size_t>(lt) + 1);
          for (int i = 0; i < lt; ++i) lits.push_back({first + i * lu + j, false});
          lits.push_back({out.blocks.variable(static_cast<int>(u), edge.target, j), true});
          out.graph.add_factor(FactorKind::Xor, std::move(lits));
        }
      }
    }
  }

  for (Factor& factor : compile(constraints, out.blocks))
    out.graph.add_factor(factor.kind, std::move(factor.literals));
  return out;
}

Labeling round_labeling(const std::vector<double>& posteriors, const BlockIndex& blocks) {
  Labeling y(blocks.node_offset.size());
  for (std::size_t t = 0; t < blocks.node_offset.size(); ++t) {
    y[t].resize(blocks.node_offset[t].size());
    for (std::size_t v = 0; v < blocks.node_offset[t].size(); ++v) {
      const int first = blocks.node_offset[t][v];
      int best = 0;
      double best_score = posteriors[static_cast<std::size_t>(first)];
      for (int i = 1; i < blocks.labels[t]; ++i) {
        double s = posteriors[static_cast<std::size_t>(first + i)];
        if (s > best_score) {
          best_score = s;
          best = i;
        }
      }
      y[t][v] = best;
    }
  }
  return y;
}

namespace {

// Posterior-guided repair: make y satisfy every constraint by demoting or
// promoting the weakest literals. Bounded; throws when no fix is found.
void repair_constraints(Labeling& y, const std::vector<NodeStateConstraint>& constraints,
                        const std::vector<double>& posteriors, const BlockIndex& blocks) {
  auto posterior_of = [&](int t, int v, int s) {
    return posteriors[static_cast<std::size_t>(blocks.variable(t, v, s))];
  };
  // (type, node, state) combinations already vacated; never reassign them.
  std::vector<std::vector<std::vector<char>>> banned(blocks.node_offset.size());
  for (std::size_t t = 0; t < blocks.node_offset.size(); ++t)
    banned[t].assign(blocks.node_offset[t].size(),
                     std::vector<char>(static_cast<std::size_t>(blocks.labels[t]), 0));

  auto relabel_away = [&](int t, int v, int avoid) {
    banned[static_cast<std::size_t>(t)][static_cast<std::size_t>(v)]
          [static_cast<std::size_t>(avoid)] = 1;
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < blocks.labels[static_cast<std::size_t>(t)]; ++s) {
      if (banned[static_cast<std::size_t>(t)][static_cast<std::size_t>(v)]
                [static_cast<std::size_t>(s)])
        continue;
      double p = posterior_of(t, v, s);
      if (p > best_score) {
        best_score = p;
        best = s;
      }
    }
    if (best < 0) throw UnsatisfiableError("constraint repair ran out of states");
    y[static_cast<std::size_t>(t)][static_cast<std::size_t>(v)] = best;
  };
  auto relabel_to = [&](int t, int v, int s) {
    y[static_cast<std::size_t>(t)][static_cast<std::size_t>(v)] = s;
  };

  std::size_t budget = 16;
  for (std::size_t t = 0; t < blocks.node_offset.size(); ++t)
    budget += blocks.node_offset[t].size() * static_cast<std::size_t>(blocks.labels[t]);

  while (budget-- > 0) {
    bool all_ok = true;
    for (const NodeStateConstraint& c : constraints) {
      std::vector<char> truth(c.literals.size());
      int true_count = 0;
      for (std::size_t l = 0; l < c.literals.size(); ++l) {
        const ConstraintLiteral& lit = c.literals[l];
        bool on = y[static_cast<std::size_t>(lit.type)][static_cast<std::size_t>(lit.node)] == lit.state;
        truth[l] = (on != lit.negated) ? 1 : 0;
        true_count += truth[l];
      }
      auto literal_strength = [&](std::size_t l) {
        const ConstraintLiteral& lit = c.literals[l];
        double p = posterior_of(lit.type, lit.node, lit.state);
        return lit.negated ? 1.0 - p : p;
      };
      auto force_true = [&](std::size_t l) {
        const ConstraintLiteral& lit = c.literals[l];
        if (lit.negated)
          relabel_away(lit.type, lit.node, lit.state);
        else
          relabel_to(lit.type, lit.node, lit.state);
      };
      auto force_false = [&](std::size_t l) {
        const ConstraintLiteral& lit = c.literals[l];
        if (lit.negated)
          relabel_to(lit.type, lit.node, lit.state);
        else
          relabel_away(lit.type, lit.node, lit.state);
      };

      bool violated = false;
      if (c.op == FactorKind::Xor) violated = true_count != 1;
      else if (c.op == FactorKind::AtMostOne) violated = true_count > 1;
      else if (c.op == FactorKind::Or) violated = true_count < 1;
      else violated = truth[0] && !truth[1];
      if (!violated) continue;
      all_ok = false;

      if (c.op == FactorKind::Imply) {
        // Prefer the cheaper of satisfying the consequent or dropping the
        // antecedent.
        if (literal_strength(1) >= 1.0 - literal_strength(0)) force_true(1);
        else force_false(0);
      } else if (true_count < 1) {
        std::size_t best = 0;
        for (std::size_t l = 1; l < c.literals.size(); ++l)
          if (literal_strength(l) > literal_strength(best)) best = l;
        force_true(best);
      } else {
        // Too many true literals: keep the strongest, demote the rest.
        std::size_t keep = 0;
        double keep_score = -1.0;
        for (std::size_t l = 0; l < c.literals.size(); ++l)
          if (truth[l] && literal_strength(l) > keep_score) {
            keep_score = literal_strength(l);
            keep = l;
          }
        for (std::size_t l = 0; l < c.literals.size(); ++l)
          if (truth[l] && l != keep) force_false(l);
      }
      break;  // re-evaluate from the first constraint after each change
    }
    if (all_ok) return;
  }
  throw UnsatisfiableError("could not repair the labeling to satisfy the constraints");
}

}  // namespace

Labeling predict(const TypeSchema& schema, const TypedGraphInstance& g, const Weights& w,
                 const AdmmSettings& settings,
                 const std::vector<NodeStateConstraint>& constraints,
                 InferenceResult* details) {
  UnrolledGraph unrolled = unroll(schema, g, w, constraints);
  InferenceResult result = solve_map(unrolled.graph, settings);
  Labeling y = round_labeling(result.posteriors, unrolled.blocks);
  if (!constraints.empty() && !check(constraints, y))
    repair_constraints(y, constraints, result.posteriors, unrolled.blocks);
  if (details) *details = std::move(result);
  return y;
}

namespace {

void add_hamming_augmentation(UnrolledGraph& unrolled, const TypeSchema& schema,
                              const TypedGraphInstance& g, const Labeling& gold) {
  for (std::size_t t = 0; t < schema.labels.size(); ++t)
    for (int v = 0; v < g.node_features[t].rows; ++v)
      for (int i = 0; i < schema.labels[t]; ++i)
        if (i != gold[t][static_cast<std::size_t>(v)])
          unrolled.graph.add_to_potential(
              unrolled.blocks.variable(static_cast<int>(t), v, i), 1.0);
}

}  // namespace

Labeling loss_augmented_predict(const TypeSchema& schema, const TypedGraphInstance& g,
                                const Weights& w, const Labeling& gold,
                                const AdmmSettings& settings, InferenceResult* details) {
  validate_labeling(schema, g, gold);
  UnrolledGraph unrolled = unroll(schema, g, w);
  add_hamming_augmentation(unrolled, schema, g, gold);
  InferenceResult result = solve_map(unrolled.graph, settings);
  Labeling y = round_labeling(result.posteriors, unrolled.blocks);
  if (details) *details = std::move(result);
  return y;
}

RelaxedDecode loss_augmented_decode(const TypeSchema& schema, const TypedGraphInstance& g,
                                    const Weights& w, const Labeling& gold,
                                    const AdmmSettings& settings) {
  validate_labeling(schema, g, gold);
  UnrolledGraph unrolled = unroll(schema, g, w);
  add_hamming_augmentation(unrolled, schema, g, gold);
  InferenceResult result = solve_map(unrolled.graph, settings);

  RelaxedDecode decode;
  decode.status = result.status;
  decode.labeling = round_labeling(result.posteriors, unrolled.blocks);
  decode.expected_feature.assign(flat_size(schema), 0.0);
  const std::vector<double>& z = result.posteriors;
  const std::size_t k = schema.labels.size();

  std::size_t offset = 0;
  for (std::size_t t = 0; t < k; ++t) {
    const Matrix& feats = g.node_features[t];
    const int d = feats.cols;
    for (int v = 0; v < feats.rows; ++v) {
      const double* row = feats.row(v);
      const int gold_label = gold[t][static_cast<std::size_t>(v)];
      for (int i = 0; i < schema.labels[t]; ++i) {
        const double weight =
            z[static_cast<std::size_t>(unrolled.blocks.variable(static_cast<int>(t), v, i))];
        if (i != gold_label) decode.expected_loss += weight;
        if (weight == 0.0) continue;
        double* slot = decode.expected_feature.data() + offset + static_cast<std::size_t>(i) * d;
        for (int f = 0; f < d; ++f) slot[f] += weight * row[f];
      }
    }
    offset += static_cast<std::size_t>(schema.labels[t]) * d;
  }
  // edge variables follow the node blocks in pair-lex, edge-list order
  int cursor = unrolled.blocks.num_node_variables;
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t u = 0; u < k; ++u) {
      const std::size_t p = t * k + u;
      const int d = schema.edge_dims[p];
      const int lt = schema.labels[t];
      const int lu = schema.labels[u];
      if (d == 0) continue;
      const Matrix& feats = g.edge_features[p];
      for (std::size_t e = 0; e < g.edges[p].size(); ++e) {
        const double* row = feats.row(static_cast<int>(e));
        for (int i = 0; i < lt; ++i)
          for (int j = 0; j < lu; ++j) {
            const double weight = z[static_cast<std::size_t>(cursor + i * lu + j)];
            if (weight != 0.0) {
              double* slot = decode.expected_feature.data() + offset +
                             (static_cast<std::size_t>(i) * lu + j) * d;
              for (int f = 0; f < d; ++f) slot[f] += weight * row[f];
            }
          }
        cursor += lt * lu;
      }
      offset += static_cast<std::size_t>(lt) * lu * d;
    }
  }
  return decode;
}

void save_model(const std::string& path, const TypeSchema& schema, const Weights& w) {
  validate_weights(schema, w);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
  out << schema.num_types();
  for (int l : schema.labels) out << ' ' << l;
  for (int d : schema.node_dims) out << ' ' << d;
  for (int d : schema.edge_dims) out << ' ' << d;
  out << '\n';
  char buffer[64];
  for (double value : flatten(schema, w)) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    out << buffer << '\n';
  }
  if (!out) throw std::runtime_error("failed writing model file: " + path);
}

std::pair<TypeSchema, Weights> load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::string header;
  if (!std::getline(in, header)) throw ParseError("missing model header", 1);
  std::istringstream head(header);
  int k = 0;
  if (!(head >> k) || k < 1) throw ParseError("bad type count in model header", 1);
  TypeSchema schema;
  schema.labels.resize(static_cast<std::size_t>(k));
  schema.node_dims.resize(static_cast<std::size_t>(k));
  schema.edge_dims.resize(static_cast<std::size_t>(k) * k);
  for (int& v : schema.labels)
    if (!(head >> v)) throw ParseError("bad label counts in model header", 1);
  for (int& v : schema.node_dims)
    if (!(head >> v)) throw ParseError("bad node dims in model header", 1);
  for (int& v : schema.edge_dims)
    if (!(head >> v)) throw ParseError("bad edge dims in model header", 1);
  validate_schema(schema);

  std::vector<double> flat;
  flat.reserve(flat_size(schema));
  std::string line;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      flat.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw ParseError("bad weight value", line_number);
    }
  }
  if (flat.size() != flat_size(schema))
    throw ParseError("weight count disagrees with the schema header", line_number);
  return {schema, unflatten(schema, flat)};
}

}  // namespace typedcrf
