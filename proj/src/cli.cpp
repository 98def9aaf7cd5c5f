#include "typedcrf/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "typedcrf/errors.hpp"
#include "typedcrf/experiment.hpp"

namespace typedcrf {

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("TYPEDCRF_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("TYPEDCRF_SEED is not a valid integer");
    }
  }
  return 42;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing file: " + path);
}

void add_fit_options(CLI::App* cmd, FitSettings& fit) {
  cmd->add_option("--train-size", fit.train_size, "Base snakes in generated training sets");
  cmd->add_option("--test-size", fit.test_size, "Base snakes in generated test sets");
  cmd->add_option("--c", fit.c, "SSVM regularization trade-off");
  cmd->add_option("--epochs", fit.epochs, "SSVM epochs");
  cmd->add_option("--step-size", fit.step_size, "SSVM initial step size");
  cmd->add_option("--fit-workers", fit.workers, "Parallel loss-augmented inferences");
  cmd->add_option("--train-iters", fit.train_inference.max_iterations,
                  "ADMM iteration cap during training");
  cmd->add_option("--train-tol", fit.train_inference.residual_tolerance,
                  "ADMM residual tolerance during training");
  cmd->add_option("--test-iters", fit.test_inference.max_iterations,
                  "ADMM iteration cap at prediction time");
  cmd->add_option("--test-tol", fit.test_inference.residual_tolerance,
                  "ADMM residual tolerance at prediction time");
}

void print_report(const ExperimentReport& report, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string path = out_dir + "/" + report.name + "_report.tsv";
  write_file(path, report.to_tsv());
  std::cout << report.to_tsv();
  for (const ReportRow& row : report.rows)
    if (row.seconds > 0.0)
      std::cout << "# timing\t" << row.method << '\t' << row.dataset << '\t' << row.seconds
                << "s\n";
  std::cout << "report written to " << path << std::endl;
}

int run_parsed(CLI::App& app, const std::vector<std::string>& args) {
  // CLI11 wants reversed argv without the program name.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app.parse(reversed);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"typedcrf: multi-type CRF training, constrained MAP decoding and the "
               "snake benchmark harness"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a snake dataset file");
  int gen_count = 200;
  bool gen_hidden = false;
  std::uint64_t gen_seed = default_seed();
  std::string gen_out;
  gen->add_option("--count", gen_count, "Number of base snakes")->required();
  gen->add_flag("--hidden", gen_hidden, "Add surviving corruptions (Hidden Snake)");
  gen->add_option("--seed", gen_seed, "Random seed (default: TYPEDCRF_SEED or 42)");
  gen->add_option("--out", gen_out, "Output dataset path")->required();
  gen->callback([&]() {
    auto data = gen_hidden ? make_hidden_dataset(gen_count, gen_seed)
                           : make_snake_dataset(gen_count, gen_seed);
    save_dataset(gen_out, data);
    std::cout << "wrote " << data.size() << " samples to " << gen_out << std::endl;
  });

  // train
  auto* train = app.add_subcommand("train", "Train a CRF model on a dataset file");
  std::string train_model = "single";
  std::string train_data, train_out;
  std::uint64_t train_seed = default_seed();
  FitSettings train_fit;
  train->add_option("--model", train_model, "single or multi")
      ->check(CLI::IsMember({"single", "multi"}));
  train->add_option("--data", train_data, "Training dataset path")->required();
  train->add_option("--seed", train_seed, "Random seed (default: TYPEDCRF_SEED or 42)");
  train->add_option("--out", train_out, "Output model path")->required();
  add_fit_options(train, train_fit);
  train->callback([&]() {
    auto data = load_dataset(train_data);
    const ModelKind kind = train_model == "single" ? ModelKind::SingleType : ModelKind::TwoType;
    Weights w = train_snake_model(kind, data, train_fit, train_seed);
    const TypeSchema schema =
        kind == ModelKind::SingleType ? single_type_schema() : two_type_schema();
    save_model(train_out, schema, w);
    std::cout << "trained " << train_model << " model on " << data.size() << " samples -> "
              << train_out << std::endl;
  });

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Decode a dataset with a trained model");
  std::string predict_model, predict_data, predict_out;
  std::string predict_constraints = "none";
  AdmmSettings predict_inference{0.1, 600, 1e-6, 0};
  predict_cmd->add_option("--model-file", predict_model, "Model path")->required();
  predict_cmd->add_option("--data", predict_data, "Dataset path")->required();
  predict_cmd->add_option("--constraints", predict_constraints,
                          "none, snake10, or a constraints file");
  predict_cmd->add_option("--iters", predict_inference.max_iterations, "ADMM iteration cap");
  predict_cmd->add_option("--tol", predict_inference.residual_tolerance,
                          "ADMM residual tolerance");
  predict_cmd->add_option("--out", predict_out, "Output predictions path")->required();
  predict_cmd->callback([&]() {
    auto [schema, weights] = load_model(predict_model);
    const ModelKind kind = model_kind(schema);
    auto data = load_dataset(predict_data);
    std::vector<Prediction> predictions;
    if (predict_constraints == "none" || predict_constraints == "snake10") {
      predictions = predict_dataset(kind, schema, weights, data,
                                    predict_constraints == "snake10", predict_inference);
    } else {
      const auto constraints = parse_constraints(read_file(predict_constraints));
      predictions.reserve(data.size());
      for (const HiddenSnakeSample& sample : data) {
        Prediction prediction;
        prediction.height = sample.image.height;
        prediction.width = sample.image.width;
        if (kind == ModelKind::SingleType) {
          auto [instance, gold] = build_single_type_instance(sample.image);
          (void)gold;
          Labeling y = predict(schema, instance, weights, predict_inference, constraints);
          prediction.labels = std::move(y[0]);
        } else {
          auto [instance, gold] = build_typed_instance(sample);
          (void)gold;
          Labeling y = predict(schema, instance, weights, predict_inference, constraints);
          prediction.labels = std::move(y[0]);
          prediction.image_label = y[1][0];
        }
        predictions.push_back(std::move(prediction));
      }
    }
    save_predictions(predict_out, predictions);
    std::cout << "wrote predictions for " << predictions.size() << " samples to " << predict_out
              << std::endl;
  });

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Score a predictions file against a dataset");
  std::string eval_pred, eval_data, eval_out;
  eval_cmd->add_option("--pred", eval_pred, "Predictions path")->required();
  eval_cmd->add_option("--data", eval_data, "Gold dataset path")->required();
  eval_cmd->add_option("--out", eval_out, "Optional output TSV path");
  eval_cmd->callback([&]() {
    EvalResult eval = evaluate_predictions(load_predictions(eval_pred), load_dataset(eval_data));
    std::ostringstream out;
    out << "pixels\tpixel_accuracy\tsnake_cell_accuracy\tsnake_cells_present\timages"
           "\timage_accuracy\n";
    char pix[32], snake[32];
    std::snprintf(pix, sizeof(pix), "%.6f", eval.pixel_accuracy);
    std::snprintf(snake, sizeof(snake), "%.6f", eval.snake_cell_accuracy);
    out << eval.pixels << '\t' << pix << '\t' << snake << '\t'
        << (eval.snake_cells_present ? 1 : 0) << '\t' << eval.images << '\t';
    if (eval.image_accuracy) {
      char img[32];
      std::snprintf(img, sizeof(img), "%.6f", *eval.image_accuracy);
      out << img << '\n';
    } else {
      out << "n/a\n";
    }
    std::cout << out.str();
    if (!eval_out.empty()) write_file(eval_out, out.str());
  });

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run an experiment series");
  std::string series;
  std::uint64_t exp_seed = default_seed();
  int exp_runs = 10;
  std::vector<int> exp_sizes = {200, 400, 600, 800};
  int exp_workers = 1;
  bool snake_only = false;
  std::string exp_out = "experiments";
  FitSettings exp_fit;
  experiment->add_option("series", series, "snake, hidden, or scaling")
      ->required()
      ->check(CLI::IsMember({"snake", "hidden", "scaling"}));
  experiment->add_option("--seed", exp_seed, "Random seed (default: TYPEDCRF_SEED or 42)");
  experiment->add_option("--runs", exp_runs, "Scaling: runs per training size");
  experiment->add_option("--sizes", exp_sizes, "Scaling: training set sizes");
  experiment->add_option("--workers", exp_workers, "Scaling: concurrent runs");
  experiment->add_flag("--snake-only", snake_only, "Scaling: evaluate on a Snake-only test set");
  experiment->add_option("--out", exp_out, "Output directory");
  add_fit_options(experiment, exp_fit);
  experiment->callback([&]() {
    std::filesystem::create_directories(exp_out);
    ExperimentReport report;
    try {
      if (series == "snake") run_experiment_snake(exp_seed, exp_fit, exp_out, &report);
      else if (series == "hidden") run_experiment_hidden(exp_seed, exp_fit, exp_out, &report);
      else
        run_experiment_scaling(exp_sizes, exp_runs, exp_seed, exp_fit, exp_workers, snake_only,
                               exp_out, &report);
    } catch (const std::exception& e) {
      // flush whatever completed, marked as failed
      write_file(exp_out + "/" + series + "_report.tsv",
                 report.to_tsv() + "# FAILED: " + e.what() + "\n");
      throw;
    }
    print_report(report, exp_out);
  });

  try {
    run_parsed(app, args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}

}  // namespace typedcrf
