#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "typedcrf/crf_model.hpp"
#include "typedcrf/crf_types.hpp"
#include "typedcrf/factor_graph.hpp"

namespace typedcrf {

struct SsvmSettings {
  double c = 1.0;            // regularization trade-off
  int epochs = 30;           // passes over the training set
  double step_size = 0.1;    // unused by the Frank-Wolfe optimizer; kept for interface stability
  bool averaging = true;     // weighted iterate averaging
  std::uint64_t seed = 0;    // drives the per-epoch sample order
  int workers = 1;           // loss-augmented inferences run in parallel per chunk
};

struct TrainingSample {
  TypedGraphInstance instance;
  Labeling gold;
};

// Optional per-epoch diagnostics filled by train_ssvm.
struct SsvmTrace {
  std::vector<double> epoch_objective;  // regularized hinge objective of the reported weights
};

// Count of positions, over all types, where the labelings differ.
long long hamming(const Labeling& a, const Labeling& b);

// Margin-rescaled structured SVM trained by block-coordinate Frank-Wolfe with
// analytic line search; the only structured dependency is loss-augmented
// decoding. Deterministic for fixed settings; inference inside one chunk of
// `workers` samples runs against a weight snapshot and updates apply in
// sample order.
Weights train_ssvm(const TypeSchema& schema, const std::vector<TrainingSample>& data,
                   const SsvmSettings& settings, const AdmmSettings& inference,
                   SsvmTrace* trace = nullptr);

// Regularized hinge objective 0.5|w|^2 + C sum_i max_y [pot+ham-pot_gold],
// with the max estimated by loss-augmented decoding.
double ssvm_objective(const TypeSchema& schema, const std::vector<TrainingSample>& data,
                      const Weights& w, double c, const AdmmSettings& inference);

struct LinearBinaryModel {
  std::vector<double> weights;
  double bias = 0.0;
};

// Full-batch gradient descent on mean log-loss from a zero start.
LinearBinaryModel train_logistic(const Matrix& features, const std::vector<int>& labels,
                                 int epochs, double rate, std::uint64_t seed);

// (label, probability) with label = probability >= 0.5.
std::pair<int, double> predict_logistic(const LinearBinaryModel& model,
                                        const std::vector<double>& features);

}  // namespace typedcrf
