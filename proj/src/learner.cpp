#include "typedcrf/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "typedcrf/errors.hpp"

namespace typedcrf {

long long hamming(const Labeling& a, const Labeling& b) {
  if (a.size() != b.size()) throw DimensionError("hamming: type counts differ");
  long long count = 0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (a[t].size() != b[t].size()) throw DimensionError("hamming: node counts differ");
    for (std::size_t v = 0; v < a[t].size(); ++v)
      if (a[t][v] != b[t][v]) ++count;
  }
  return count;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::mt19937_64 epoch_rng(std::uint64_t seed, int epoch) {
  // splitmix-style mixing keeps epoch streams independent of each other
  std::uint64_t state = seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(epoch + 1);
  state ^= state >> 30;
  state *= 0xbf58476d1ce4e5b9ull;
  state ^= state >> 27;
  return std::mt19937_64(state);
}

}  // namespace

// Block-coordinate Frank-Wolfe on the structured-SVM dual. Each visited
// sample moves its dual block toward the corner found by loss-augmented
// decoding, with the analytically optimal step; no step-size schedule is
// needed. Fractional decodes are valid corners of the relaxed polytope.
Weights train_ssvm(const TypeSchema& schema, const std::vector<TrainingSample>& data,
                   const SsvmSettings& settings, const AdmmSettings& inference,
                   SsvmTrace* trace) {
  if (data.empty()) throw std::invalid_argument("train_ssvm: empty training set");
  if (settings.c < 0.0) throw std::invalid_argument("train_ssvm: C must be non-negative");
  if (settings.epochs < 1) throw std::invalid_argument("train_ssvm: epochs must be positive");
  if (settings.workers < 1) throw std::invalid_argument("train_ssvm: workers must be positive");
  for (const TrainingSample& sample : data) {
    validate_instance(schema, sample.instance);
    validate_labeling(schema, sample.instance, sample.gold);
  }

  const std::size_t dim = flat_size(schema);
  const std::size_t n = data.size();

  if (settings.c == 0.0) return unflatten(schema, std::vector<double>(dim, 0.0));

  std::vector<std::vector<double>> phi_gold(n);
  for (std::size_t s = 0; s < n; ++s)
    phi_gold[s] = joint_feature(schema, data[s].instance, data[s].gold);

  // objective 0.5|w|^2 + C sum_i hinge_i == n*C * (lambda/2 |w|^2 + mean hinge)
  const double lambda = 1.0 / (static_cast<double>(n) * settings.c);

  std::vector<double> w(dim, 0.0);
  std::vector<double> w_avg(dim, 0.0);
  std::vector<std::vector<double>> w_block(n, std::vector<double>(dim, 0.0));
  std::vector<double> loss_block(n, 0.0);
  long long visits = 0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  const int chunk = std::max(1, settings.workers);
  std::vector<std::vector<double>> phi_hat(static_cast<std::size_t>(chunk));
  std::vector<double> losses(static_cast<std::size_t>(chunk));

  for (int epoch = 0; epoch < settings.epochs; ++epoch) {
    auto rng = epoch_rng(settings.seed, epoch);
    std::shuffle(order.begin(), order.end(), rng);

    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(chunk)) {
      const std::size_t count = std::min(static_cast<std::size_t>(chunk), n - start);
      const Weights snapshot = unflatten(schema, w);

      auto infer = [&](std::size_t slot) {
        const TrainingSample& sample = data[order[start + slot]];
        RelaxedDecode decode =
            loss_augmented_decode(schema, sample.instance, snapshot, sample.gold, inference);
        phi_hat[slot] = std::move(decode.expected_feature);
        losses[slot] = decode.expected_loss;
      };
      if (count == 1 || settings.workers == 1) {
        for (std::size_t slot = 0; slot < count; ++slot) infer(slot);
      } else {
        std::vector<std::thread> pool;
        pool.reserve(count);
        for (std::size_t slot = 0; slot < count; ++slot) pool.emplace_back(infer, slot);
        for (std::thread& th : pool) th.join();
      }

      for (std::size_t slot = 0; slot < count; ++slot) {
        const std::size_t s = order[start + slot];
        std::vector<double>& w_s = w_block[s];

        // corner step for this block
        const double scale = 1.0 / (lambda * static_cast<double>(n));
        double gap_numerator = 0.0;
        double gap_denominator = 0.0;
        // corner: w_corner = scale * (phi_gold - phi_hat); loss_corner = loss/n
        const double loss_corner = losses[slot] / static_cast<double>(n);
        for (std::size_t i = 0; i < dim; ++i) {
          const double corner = scale * (phi_gold[s][i] - phi_hat[slot][i]);
          const double diff = w_s[i] - corner;
          gap_numerator += lambda * diff * w[i];
          gap_denominator += lambda * diff * diff;
        }
        gap_numerator += loss_corner - loss_block[s];
        double gamma = gap_denominator > 0.0 ? gap_numerator / gap_denominator : 0.0;
        gamma = std::min(1.0, std::max(0.0, gamma));

        if (gamma > 0.0) {
          for (std::size_t i = 0; i < dim; ++i) {
            const double corner = scale * (phi_gold[s][i] - phi_hat[slot][i]);
            const double updated = (1.0 - gamma) * w_s[i] + gamma * corner;
            w[i] += updated - w_s[i];
            w_s[i] = updated;
          }
          loss_block[s] = (1.0 - gamma) * loss_block[s] + gamma * loss_corner;
        }

        ++visits;
        const double keep = static_cast<double>(visits - 1) / static_cast<double>(visits + 1);
        for (std::size_t i = 0; i < dim; ++i)
          w_avg[i] = keep * w_avg[i] + (1.0 - keep) * w[i];
      }
    }

    if (trace) {
      const std::vector<double>& report = settings.averaging ? w_avg : w;
      trace->epoch_objective.push_back(
          ssvm_objective(schema, data, unflatten(schema, report), settings.c, inference));
    }
  }

  return unflatten(schema, settings.averaging ? w_avg : w);
}

double ssvm_objective(const TypeSchema& schema, const std::vector<TrainingSample>& data,
                      const Weights& w, double c, const AdmmSettings& inference) {
  const std::vector<double> flat = flatten(schema, w);
  double objective = 0.5 * dot(flat, flat);
  for (const TrainingSample& sample : data) {
    RelaxedDecode decode = loss_augmented_decode(schema, sample.instance, w, sample.gold, inference);
    double hinge = dot(flat, decode.expected_feature) + decode.expected_loss -
                   potential(schema, sample.instance, sample.gold, w);
    objective += c * std::max(hinge, 0.0);
  }
  return objective;
}

LinearBinaryModel train_logistic(const Matrix& features, const std::vector<int>& labels,
                                 int epochs, double rate, std::uint64_t seed) {
  (void)seed;  // full-batch descent is deterministic as-is
  if (features.rows != static_cast<int>(labels.size()))
    throw DimensionError("train_logistic: feature rows and label count differ");
  if (features.rows < 2) throw DegenerateDataError("train_logistic: need at least two rows");
  bool has_zero = false, has_one = false;
  for (int label : labels) {
    if (label == 0) has_zero = true;
    else if (label == 1) has_one = true;
    else throw std::invalid_argument("train_logistic: labels must be 0 or 1");
  }
  if (!has_zero || !has_one)
    throw DegenerateDataError("train_logistic: both classes must be present");
  if (epochs < 0) throw std::invalid_argument("train_logistic: negative epochs");

  LinearBinaryModel model;
  model.weights.assign(static_cast<std::size_t>(features.cols), 0.0);
  const double inv_n = 1.0 / static_cast<double>(features.rows);
  std::vector<double> grad(static_cast<std::size_t>(features.cols));
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    for (int r = 0; r < features.rows; ++r) {
      const double* row = features.row(r);
      double score = model.bias;
      for (int f = 0; f < features.cols; ++f)
        score += model.weights[static_cast<std::size_t>(f)] * row[f];
      double p = 1.0 / (1.0 + std::exp(-score));
      double err = p - static_cast<double>(labels[static_cast<std::size_t>(r)]);
      for (int f = 0; f < features.cols; ++f)
        grad[static_cast<std::size_t>(f)] += err * row[f];
      grad_bias += err;
    }
    for (int f = 0; f < features.cols; ++f)
      model.weights[static_cast<std::size_t>(f)] -= rate * grad[static_cast<std::size_t>(f)] * inv_n;
    model.bias -= rate * grad_bias * inv_n;
  }
  return model;
}

std::pair<int, double> predict_logistic(const LinearBinaryModel& model,
                                        const std::vector<double>& features) {
  if (features.size() != model.weights.size())
    throw DimensionError("predict_logistic: feature dimension mismatch");
  double score = model.bias;
  for (std::size_t f = 0; f < features.size(); ++f)
    score += model.weights[f] * features[f];
  double p = 1.0 / (1.0 + std::exp(-score));
  return {p >= 0.5 ? 1 : 0, p};
}

}  // namespace typedcrf
