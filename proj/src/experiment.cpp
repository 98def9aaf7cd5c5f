#include "typedcrf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "typedcrf/errors.hpp"
#include "typedcrf/metrics.hpp"

namespace typedcrf {

namespace {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t x = base ^ (salt * 0x9e3779b97f4a7c15ull + 0xd1b54a32d192ed03ull);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string format_accuracy(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

}  // namespace

ModelKind model_kind(const TypeSchema& schema) {
  const TypeSchema single = single_type_schema();
  const TypeSchema two = two_type_schema();
  if (schema.labels == single.labels && schema.node_dims == single.node_dims &&
      schema.edge_dims == single.edge_dims)
    return ModelKind::SingleType;
  if (schema.labels == two.labels && schema.node_dims == two.node_dims &&
      schema.edge_dims == two.edge_dims)
    return ModelKind::TwoType;
  throw DimensionError("model schema is neither the single-type nor the two-type snake schema");
}

Weights train_snake_model(ModelKind kind, const std::vector<HiddenSnakeSample>& data,
                          const FitSettings& fit, std::uint64_t seed) {
  std::vector<TrainingSample> samples;
  samples.reserve(data.size());
  for (const HiddenSnakeSample& sample : data) {
    if (kind == ModelKind::SingleType) {
      auto [instance, gold] = build_single_type_instance(sample.image);
      samples.push_back({std::move(instance), std::move(gold)});
    } else {
      auto [instance, gold] = build_typed_instance(sample);
      samples.push_back({std::move(instance), std::move(gold)});
    }
  }
  SsvmSettings settings;
  settings.c = fit.c;
  settings.epochs = fit.epochs;
  settings.step_size = fit.step_size;
  settings.averaging = fit.averaging;
  settings.seed = seed;
  settings.workers = fit.workers;
  const TypeSchema schema = kind == ModelKind::SingleType ? single_type_schema() : two_type_schema();
  return train_ssvm(schema, samples, settings, fit.train_inference);
}

std::vector<Prediction> predict_dataset(ModelKind kind, const TypeSchema& schema,
                                        const Weights& w,
                                        const std::vector<HiddenSnakeSample>& data,
                                        bool with_constraints, const AdmmSettings& inference) {
  std::vector<Prediction> predictions;
  predictions.reserve(data.size());
  for (const HiddenSnakeSample& sample : data) {
    Prediction prediction;
    prediction.height = sample.image.height;
    prediction.width = sample.image.width;
    const std::vector<NodeStateConstraint> constraints =
        with_constraints ? make_constraints(sample) : std::vector<NodeStateConstraint>{};
    if (kind == ModelKind::SingleType) {
      auto [instance, gold] = build_single_type_instance(sample.image);
      (void)gold;
      Labeling y = predict(schema, instance, w, inference, constraints);
      prediction.labels = std::move(y[0]);
    } else {
      auto [instance, gold] = build_typed_instance(sample);
      (void)gold;
      Labeling y = predict(schema, instance, w, inference, constraints);
      prediction.labels = std::move(y[0]);
      prediction.image_label = y[1][0];
    }
    predictions.push_back(std::move(prediction));
  }
  return predictions;
}

void save_predictions(const std::string& path, const std::vector<Prediction>& predictions) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open predictions file for writing: " + path);
  for (const Prediction& prediction : predictions) {
    char image_label = prediction.image_label < 0 ? '-' : (prediction.image_label == 0 ? 'S' : 'N');
    out << prediction.height << ' ' << prediction.width << ' ' << image_label << '\n';
    for (int r = 0; r < prediction.height; ++r) {
      for (int c = 0; c < prediction.width; ++c) {
        if (c) out << ' ';
        out << prediction.labels[static_cast<std::size_t>(r) * prediction.width + c];
      }
      out << '\n';
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing predictions file: " + path);
}

std::vector<Prediction> load_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open predictions file: " + path);
  std::vector<Prediction> predictions;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::istringstream head(line);
    Prediction prediction;
    char image_label = 0;
    if (!(head >> prediction.height >> prediction.width >> image_label) ||
        prediction.height < 1 || prediction.width < 1)
      throw ParseError("bad prediction record header", line_number);
    if (image_label == 'S') prediction.image_label = 0;
    else if (image_label == 'N') prediction.image_label = 1;
    else if (image_label == '-') prediction.image_label = -1;
    else throw ParseError("bad image label (expected S, N or -)", line_number);
    prediction.labels.resize(static_cast<std::size_t>(prediction.height) * prediction.width);
    for (int r = 0; r < prediction.height; ++r) {
      if (!std::getline(in, line)) throw ParseError("truncated prediction grid", line_number);
      ++line_number;
      std::istringstream row(line);
      for (int c = 0; c < prediction.width; ++c)
        if (!(row >> prediction.labels[static_cast<std::size_t>(r) * prediction.width + c]))
          throw ParseError("bad prediction label", line_number);
    }
    predictions.push_back(std::move(prediction));
  }
  return predictions;
}

EvalResult evaluate_predictions(const std::vector<Prediction>& predictions,
                                const std::vector<HiddenSnakeSample>& gold) {
  if (predictions.size() != gold.size())
    throw DimensionError("evaluate: prediction and dataset sizes differ");
  std::vector<LabelGrid> pred_grids, gold_grids;
  std::vector<int> pred_images, gold_images;
  pred_grids.reserve(predictions.size());
  gold_grids.reserve(gold.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i].height != gold[i].image.height ||
        predictions[i].width != gold[i].image.width)
      throw DimensionError("evaluate: prediction grid shape disagrees with the dataset");
    pred_grids.push_back(predictions[i].labels);
    gold_grids.push_back(gold[i].image.labels);
    if (predictions[i].image_label >= 0) {
      pred_images.push_back(predictions[i].image_label);
      gold_images.push_back(gold[i].image_label == ImageClass::Snake ? 0 : 1);
    }
  }
  EvalResult result;
  result.pixels = count_cells(gold_grids);
  result.pixel_accuracy = metric_pixel_accuracy(pred_grids, gold_grids);
  result.snake_cell_accuracy =
      metric_snake_cell_accuracy(pred_grids, gold_grids, &result.snake_cells_present);
  result.images = static_cast<long long>(pred_images.size());
  if (!pred_images.empty())
    result.image_accuracy = metric_image_accuracy(pred_images, gold_images);
  return result;
}

WelchResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("welch_t_test: need at least two observations per side");
  auto mean_var = [](const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size() - 1);
    return std::pair<double, double>(mean, var);
  };
  auto [mean_a, var_a] = mean_var(a);
  auto [mean_b, var_b] = mean_var(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double se2 = var_a / na + var_b / nb;

  WelchResult result;
  if (se2 <= 0.0) {
    // identical constant samples: no evidence either way
    result.t = mean_a == mean_b ? 0.0 : std::numeric_limits<double>::infinity();
    result.df = na + nb - 2.0;
    result.p_value = mean_a == mean_b ? 1.0 : 0.0;
    return result;
  }
  result.t = (mean_a - mean_b) / std::sqrt(se2);
  result.df = se2 * se2 /
              (var_a * var_a / (na * na * (na - 1.0)) + var_b * var_b / (nb * nb * (nb - 1.0)));

  // Two-sided p-value via the regularized incomplete beta function.
  auto beta_cf = [](double x, double aa, double bb) {
    const int max_iter = 200;
    const double eps = 3e-14, fpmin = 1e-300;
    double qab = aa + bb, qap = aa + 1.0, qam = aa - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
      int m2 = 2 * m;
      double num = m * (bb - m) * x / ((qam + m2) * (aa + m2));
      d = 1.0 + num * d;
      if (std::abs(d) < fpmin) d = fpmin;
      c = 1.0 + num / c;
      if (std::abs(c) < fpmin) c = fpmin;
      d = 1.0 / d;
      h *= d * c;
      num = -(aa + m) * (qab + m) * x / ((aa + m2) * (qap + m2));
      d = 1.0 + num * d;
      if (std::abs(d) < fpmin) d = fpmin;
      c = 1.0 + num / c;
      if (std::abs(c) < fpmin) c = fpmin;
      d = 1.0 / d;
      double del = d * c;
      h *= del;
      if (std::abs(del - 1.0) < eps) break;
    }
    return h;
  };
  auto incomplete_beta = [&](double aa, double bb, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(aa + bb) - std::lgamma(aa) - std::lgamma(bb) +
                      aa * std::log(x) + bb * std::log(1.0 - x);
    double front = std::exp(ln_front);
    if (x < (aa + 1.0) / (aa + bb + 2.0)) return front * beta_cf(x, aa, bb) / aa;
    return 1.0 - front * beta_cf(1.0 - x, bb, aa) / bb;
  };
  const double x = result.df / (result.df + result.t * result.t);
  result.p_value = incomplete_beta(result.df / 2.0, 0.5, x);
  return result;
}

std::string ExperimentReport::to_tsv() const {
  std::ostringstream out;
  out << "section\tmethod\tdataset\ttrain_size\trun\tseed\tpixels\tpixel_accuracy"
         "\tsnake_cell_accuracy\timages\timage_accuracy\tmean\tstddev\tt\tdf\tp_value\n";
  auto na_or_int = [](long long v) {
    return v < 0 ? std::string("n/a") : std::to_string(v);
  };
  for (const ReportRow& row : rows) {
    out << "run\t" << row.method << '\t' << row.dataset << '\t' << na_or_int(row.train_size)
        << '\t' << na_or_int(row.run) << '\t' << row.seed << '\t' << row.eval.pixels << '\t'
        << format_accuracy(row.eval.pixel_accuracy) << '\t';
    if (row.eval.snake_cells_present)
      out << format_accuracy(row.eval.snake_cell_accuracy);
    else
      out << "0.000000*";  // flagged: no snake cells in gold
    out << '\t' << row.eval.images << '\t'
        << (row.eval.image_accuracy ? format_accuracy(*row.eval.image_accuracy)
                                    : std::string("n/a"))
        << "\tn/a\tn/a\tn/a\tn/a\tn/a\n";
  }
  for (const ScalingSummary& summary : summaries) {
    out << "summary\t" << summary.method << "\tn/a\t" << summary.train_size << "\tn/a\tn/a\tn/a"
        << "\tn/a\tn/a\t" << summary.runs << "\tn/a\t" << format_accuracy(summary.mean_pixel_accuracy)
        << '\t' << format_accuracy(summary.stddev) << "\tn/a\tn/a\tn/a\n";
  }
  for (const WelchRow& row : ttests) {
    char t_buf[32], df_buf[32], p_buf[32];
    std::snprintf(t_buf, sizeof(t_buf), "%.4f", row.test.t);
    std::snprintf(df_buf, sizeof(df_buf), "%.4f", row.test.df);
    std::snprintf(p_buf, sizeof(p_buf), "%.6f", row.test.p_value);
    out << "ttest\t" << row.comparison << "\tn/a\t" << row.train_size
        << "\tn/a\tn/a\tn/a\tn/a\tn/a\tn/a\tn/a\tn/a\tn/a\t" << t_buf << '\t' << df_buf << '\t'
        << p_buf << '\n';
  }
  return out.str();
}

namespace {

std::vector<Prediction> all_background_predictions(const std::vector<HiddenSnakeSample>& data) {
  std::vector<Prediction> predictions;
  predictions.reserve(data.size());
  for (const HiddenSnakeSample& sample : data) {
    Prediction prediction;
    prediction.height = sample.image.height;
    prediction.width = sample.image.width;
    prediction.labels.assign(static_cast<std::size_t>(sample.image.cells()), 0);
    predictions.push_back(std::move(prediction));
  }
  return predictions;
}

void maybe_dump(const std::string& dump_dir, const std::string& name,
                const std::vector<Prediction>& predictions) {
  if (dump_dir.empty()) return;
  save_predictions(dump_dir + "/" + name + ".pred", predictions);
}

void maybe_dump_dataset(const std::string& dump_dir, const std::string& name,
                        const std::vector<HiddenSnakeSample>& data) {
  if (dump_dir.empty()) return;
  save_dataset(dump_dir + "/" + name + ".data", data);
}

}  // namespace

ExperimentReport run_experiment_snake(std::uint64_t seed, const FitSettings& fit,
                                      const std::string& dump_dir,
                                      ExperimentReport* progress) {
  ExperimentReport local;
  ExperimentReport& report = progress ? *progress : local;
  report.name = "snake";

  const auto snake_train = make_snake_dataset(fit.train_size, mix_seed(seed, 1));
  const auto snake_test = make_snake_dataset(fit.test_size, mix_seed(seed, 2));
  const auto hidden_train = augment_with_corruptions(snake_train, mix_seed(seed, 3));
  const auto hidden_test = augment_with_corruptions(snake_test, mix_seed(seed, 4));
  maybe_dump_dataset(dump_dir, "snake_train", snake_train);
  maybe_dump_dataset(dump_dir, "snake_test", snake_test);
  maybe_dump_dataset(dump_dir, "hidden_train", hidden_train);
  maybe_dump_dataset(dump_dir, "hidden_test", hidden_test);

  auto add_row = [&](const std::string& method, const std::string& dataset,
                     const std::vector<Prediction>& predictions,
                     const std::vector<HiddenSnakeSample>& gold, double seconds) {
    ReportRow row;
    row.method = method;
    row.dataset = dataset;
    row.seed = seed;
    row.eval = evaluate_predictions(predictions, gold);
    row.seconds = seconds;
    report.rows.push_back(std::move(row));
    maybe_dump(dump_dir, report.name + "_" + method + "_" + dataset, predictions);
  };

  add_row("all_background", "snake_test", all_background_predictions(snake_test), snake_test, 0.0);
  {
    auto start = std::chrono::steady_clock::now();
    Weights w = train_snake_model(ModelKind::SingleType, snake_train, fit, mix_seed(seed, 5));
    auto predictions = predict_dataset(ModelKind::SingleType, single_type_schema(), w,
                                       snake_test, false, fit.test_inference);
    add_row("single_type", "snake_test", predictions, snake_test, seconds_since(start));
  }
  add_row("all_background", "hidden_test", all_background_predictions(hidden_test), hidden_test,
          0.0);
  {
    auto start = std::chrono::steady_clock::now();
    Weights w = train_snake_model(ModelKind::SingleType, hidden_train, fit, mix_seed(seed, 6));
    auto predictions = predict_dataset(ModelKind::SingleType, single_type_schema(), w,
                                       hidden_test, false, fit.test_inference);
    add_row("single_type", "hidden_test", predictions, hidden_test, seconds_since(start));
  }
  return report;
}

ExperimentReport run_experiment_hidden(std::uint64_t seed, const FitSettings& fit,
                                       const std::string& dump_dir,
                                       ExperimentReport* progress) {
  ExperimentReport local;
  ExperimentReport& report = progress ? *progress : local;
  report.name = "hidden";

  const auto snake_train = make_snake_dataset(fit.train_size, mix_seed(seed, 11));
  const auto snake_test = make_snake_dataset(fit.test_size, mix_seed(seed, 12));
  const auto hidden_train = augment_with_corruptions(snake_train, mix_seed(seed, 13));
  const auto hidden_test = augment_with_corruptions(snake_test, mix_seed(seed, 14));
  maybe_dump_dataset(dump_dir, "hidden_train", hidden_train);
  maybe_dump_dataset(dump_dir, "hidden_test", hidden_test);

  auto add_row = [&](const std::string& method, const std::vector<Prediction>& predictions,
                     double seconds) {
    ReportRow row;
    row.method = method;
    row.dataset = "hidden_test";
    row.seed = seed;
    row.eval = evaluate_predictions(predictions, hidden_test);
    row.seconds = seconds;
    report.rows.push_back(std::move(row));
    maybe_dump(dump_dir, report.name + "_" + method, predictions);
  };

  add_row("all_background", all_background_predictions(hidden_test), 0.0);

  {
    auto start = std::chrono::steady_clock::now();
    Weights w = train_snake_model(ModelKind::SingleType, hidden_train, fit, mix_seed(seed, 15));
    auto predictions = predict_dataset(ModelKind::SingleType, single_type_schema(), w,
                                       hidden_test, false, fit.test_inference);
    add_row("single_type", predictions, seconds_since(start));
  }

  {
    // Logistic baseline over the 7 image features; pixel grids stay background
    // so only the image column is meaningful.
    auto start = std::chrono::steady_clock::now();
    Matrix features(static_cast<int>(hidden_train.size()), 7);
    std::vector<int> labels(hidden_train.size());
    for (std::size_t i = 0; i < hidden_train.size(); ++i) {
      std::vector<double> f = featurize_image(hidden_train[i].image);
      std::copy(f.begin(), f.end(), features.row(static_cast<int>(i)));
      labels[i] = hidden_train[i].image_label == ImageClass::Snake ? 0 : 1;
    }
    LinearBinaryModel model =
        train_logistic(features, labels, fit.logistic_epochs, fit.logistic_rate, seed);
    std::vector<Prediction> predictions = all_background_predictions(hidden_test);
    for (std::size_t i = 0; i < hidden_test.size(); ++i)
      predictions[i].image_label =
          predict_logistic(model, featurize_image(hidden_test[i].image)).first;
    add_row("logistic", predictions, seconds_since(start));
  }

  {
    auto start = std::chrono::steady_clock::now();
    Weights w = train_snake_model(ModelKind::TwoType, hidden_train, fit, mix_seed(seed, 16));
    auto plain = predict_dataset(ModelKind::TwoType, two_type_schema(), w, hidden_test, false,
                                 fit.test_inference);
    double plain_seconds = seconds_since(start);
    add_row("two_type", plain, plain_seconds);

    auto constrained_start = std::chrono::steady_clock::now();
    auto constrained = predict_dataset(ModelKind::TwoType, two_type_schema(), w, hidden_test,
                                       true, fit.test_inference);
    add_row("two_type_logic", constrained, seconds_since(constrained_start));
  }
  return report;
}

ExperimentReport run_experiment_scaling(const std::vector<int>& sizes, int runs,
                                        std::uint64_t seed, const FitSettings& fit,
                                        int workers, bool snake_only_test,
                                        const std::string& dump_dir,
                                        ExperimentReport* progress) {
  if (sizes.empty()) throw std::invalid_argument("scaling experiment needs at least one size");
  if (runs < 1) throw std::invalid_argument("scaling experiment needs at least one run");

  ExperimentReport local;
  ExperimentReport& report = progress ? *progress : local;
  report.name = "scaling";

  const auto test_set = snake_only_test
                            ? make_snake_dataset(fit.test_size, mix_seed(seed, 21))
                            : augment_with_corruptions(
                                  make_snake_dataset(fit.test_size, mix_seed(seed, 21)),
                                  mix_seed(seed, 22));
  maybe_dump_dataset(dump_dir, "scaling_test", test_set);
  const char* test_name = snake_only_test ? "snake_test" : "hidden_test";

  struct RunOutcome {
    EvalResult single, multi, multi_logic;
    double seconds = 0.0;
    std::uint64_t seed = 0;
  };
  std::vector<std::vector<RunOutcome>> outcomes(sizes.size(),
                                                std::vector<RunOutcome>(static_cast<std::size_t>(runs)));

  FitSettings run_fit = fit;
  if (workers > 1) run_fit.workers = 1;  // runs provide the parallelism

  auto do_run = [&](std::size_t size_index, int run) {
    const int size = sizes[size_index];
    const std::uint64_t run_seed = mix_seed(seed, 1000 + 131 * size_index + static_cast<std::size_t>(run));
    auto start = std::chrono::steady_clock::now();
    const auto train_set =
        augment_with_corruptions(make_snake_dataset(size, mix_seed(run_seed, 1)),
                                 mix_seed(run_seed, 2));

    RunOutcome outcome;
    outcome.seed = run_seed;
    Weights single = train_snake_model(ModelKind::SingleType, train_set, run_fit, mix_seed(run_seed, 3));
    outcome.single = evaluate_predictions(
        predict_dataset(ModelKind::SingleType, single_type_schema(), single, test_set, false,
                        run_fit.test_inference),
        test_set);
    Weights multi = train_snake_model(ModelKind::TwoType, train_set, run_fit, mix_seed(run_seed, 4));
    outcome.multi = evaluate_predictions(
        predict_dataset(ModelKind::TwoType, two_type_schema(), multi, test_set, false,
                        run_fit.test_inference),
        test_set);
    outcome.multi_logic = evaluate_predictions(
        predict_dataset(ModelKind::TwoType, two_type_schema(), multi, test_set, true,
                        run_fit.test_inference),
        test_set);
    outcome.seconds = seconds_since(start);
    outcomes[size_index][static_cast<std::size_t>(run)] = std::move(outcome);
  };

  std::vector<std::pair<std::size_t, int>> tasks;
  for (std::size_t s = 0; s < sizes.size(); ++s)
    for (int r = 0; r < runs; ++r) tasks.push_back({s, r});

  if (workers <= 1) {
    for (auto [s, r] : tasks) do_run(s, r);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      while (true) {
        std::size_t index = next.fetch_add(1);
        if (index >= tasks.size()) return;
        do_run(tasks[index].first, tasks[index].second);
      }
    };
    std::vector<std::thread> pool;
    const int pool_size = std::min<std::size_t>(static_cast<std::size_t>(workers), tasks.size());
    for (int i = 0; i < pool_size; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  // Report assembly is sequential and ordered regardless of scheduling.
  const char* method_names[3] = {"single_type", "two_type", "two_type_logic"};
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    std::vector<std::vector<double>> accuracies(3);
    for (int r = 0; r < runs; ++r) {
      const RunOutcome& outcome = outcomes[s][static_cast<std::size_t>(r)];
      const EvalResult* evals[3] = {&outcome.single, &outcome.multi, &outcome.multi_logic};
      for (int m = 0; m < 3; ++m) {
        ReportRow row;
        row.method = method_names[m];
        row.dataset = test_name;
        row.train_size = sizes[s];
        row.run = r;
        row.seed = outcome.seed;
        row.eval = *evals[m];
        row.seconds = outcome.seconds;
        report.rows.push_back(std::move(row));
        accuracies[static_cast<std::size_t>(m)].push_back(evals[m]->pixel_accuracy);
      }
    }
    for (int m = 0; m < 3; ++m) {
      const std::vector<double>& xs = accuracies[static_cast<std::size_t>(m)];
      double mean = 0.0;
      for (double x : xs) mean += x;
      mean /= static_cast<double>(xs.size());
      double var = 0.0;
      for (double x : xs) var += (x - mean) * (x - mean);
      var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
      report.summaries.push_back(
          {method_names[m], sizes[s], runs, mean, std::sqrt(var)});
    }
    if (runs >= 2) {
      report.ttests.push_back(
          {"two_type_vs_single_type", sizes[s], welch_t_test(accuracies[1], accuracies[0])});
      report.ttests.push_back(
          {"two_type_logic_vs_two_type", sizes[s], welch_t_test(accuracies[2], accuracies[1])});
    }
  }
  return report;
}

}  // namespace typedcrf
