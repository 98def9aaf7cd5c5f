#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "typedcrf/crf_model.hpp"
#include "typedcrf/learner.hpp"
#include "typedcrf/snake_data.hpp"

namespace typedcrf {

// Training/evaluation knobs shared by the experiment series and the CLI.
struct FitSettings {
  int train_size = 200;   // base snakes before corruption augmentation
  int test_size = 100;
  double c = 3.0;
  int epochs = 20;
  double step_size = 0.1;
  bool averaging = true;
  int workers = 2;
  AdmmSettings train_inference{0.1, 300, 1e-3, 0};
  AdmmSettings test_inference{0.5, 2000, 1e-6, 0};
  int logistic_epochs = 300;
  double logistic_rate = 0.01;
};

enum class ModelKind { SingleType, TwoType };

// Recognizes the two snake schemas; anything else is an error.
ModelKind model_kind(const TypeSchema& schema);

Weights train_snake_model(ModelKind kind, const std::vector<HiddenSnakeSample>& data,
                          const FitSettings& fit, std::uint64_t seed);

struct Prediction {
  int height = 0;
  int width = 0;
  std::vector<int> labels;
  int image_label = -1;  // 0 Snake, 1 NoSnake, -1 not predicted
};

std::vector<Prediction> predict_dataset(ModelKind kind, const TypeSchema& schema,
                                        const Weights& w,
                                        const std::vector<HiddenSnakeSample>& data,
                                        bool with_constraints, const AdmmSettings& inference);

void save_predictions(const std::string& path, const std::vector<Prediction>& predictions);
std::vector<Prediction> load_predictions(const std::string& path);

struct EvalResult {
  long long pixels = 0;
  double pixel_accuracy = 0.0;
  bool snake_cells_present = false;
  double snake_cell_accuracy = 0.0;
  long long images = 0;                 // images carrying a predicted label
  std::optional<double> image_accuracy;
};

EvalResult evaluate_predictions(const std::vector<Prediction>& predictions,
                                const std::vector<HiddenSnakeSample>& gold);

struct ReportRow {
  std::string method;
  std::string dataset;
  int train_size = -1;  // -1 prints as n/a
  int run = -1;
  std::uint64_t seed = 0;
  EvalResult eval;
  double seconds = 0.0;  // kept out of the serialized report
};

struct ScalingSummary {
  std::string method;
  int train_size = 0;
  int runs = 0;
  double mean_pixel_accuracy = 0.0;
  double stddev = 0.0;
};

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

// Two-sided Welch's t-test for unequal variances.
WelchResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

struct WelchRow {
  std::string comparison;
  int train_size = 0;
  WelchResult test;
};

struct ExperimentReport {
  std::string name;
  std::vector<ReportRow> rows;
  std::vector<ScalingSummary> summaries;
  std::vector<WelchRow> ttests;

  // Deterministic columns only; wall-clock stays in memory.
  std::string to_tsv() const;
};

// Single-type CRF on the Snake task, then on the Hidden Snake task, with
// all-background oracle rows. `dump_dir`, when non-empty, receives the
// datasets and per-method prediction files. `progress`, when non-null, is the
// report being built; on failure it holds the completed rows.
ExperimentReport run_experiment_snake(std::uint64_t seed, const FitSettings& fit,
                                      const std::string& dump_dir = "",
                                      ExperimentReport* progress = nullptr);

// Oracle, single-type, logistic image baseline, two-type, and two-type with
// the ten at-most-one constraints, all on the Hidden Snake task.
ExperimentReport run_experiment_hidden(std::uint64_t seed, const FitSettings& fit,
                                       const std::string& dump_dir = "",
                                       ExperimentReport* progress = nullptr);

// Fresh training sets per (size, run); one fixed held-out test set. Reports
// per-run pixel accuracies plus mean/stddev and Welch comparisons.
ExperimentReport run_experiment_scaling(const std::vector<int>& sizes, int runs,
                                        std::uint64_t seed, const FitSettings& fit,
                                        int workers = 1, bool snake_only_test = false,
                                        const std::string& dump_dir = "",
                                        ExperimentReport* progress = nullptr);

}  // namespace typedcrf
