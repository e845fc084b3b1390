#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include "CLI11.hpp"
#include "commands.hpp"

namespace tsnn::cli {

std::string resolve_input_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path)) return path;
  if (const char* dir = std::getenv("TSNN_DATA_DIR")) {
    const fs::path candidate = fs::path(dir) / path;
    if (fs::exists(candidate)) return candidate.string();
  }
  throw UsageError("no such file: " + path);
}

}  // namespace tsnn::cli

int main(int argc, char** argv) {
  using namespace tsnn::cli;

  CLI::App app{"Single-spike temporal-coded SNN toolkit"};
  app.require_subcommand(1);

  PreprocessArgs pre;
  CLI::App* preprocess =
      app.add_subcommand("preprocess", "Encode NSL-KDD or AWID records");
  preprocess->add_option("--dataset", pre.dataset, "nsl-kdd | awid")->required();
  preprocess->add_option("--variant", pre.variant, "original | resampled")
      ->required();
  preprocess->add_option("--train", pre.train_path,
                         "training split (defines the encoding manifest)")
      ->required();
  preprocess->add_option("--test", pre.test_paths,
                         "additional splits encoded with the same manifest");
  preprocess->add_option("--awid-manifest", pre.awid_manifest_path,
                         "feature-selection manifest (awid only)");
  preprocess->add_option("--out", pre.out_dir, "output directory")->required();
  preprocess->add_option("--grf-fields", pre.grf_fields,
                         "receptive fields per continuous column");
  preprocess->add_option("--grf-gamma", pre.grf_gamma,
                         "receptive-field width parameter");
  preprocess->add_option("--width", pre.expected_width,
                         "override the expected encoded width");

  TrainArgs tr;
  CLI::App* train = app.add_subcommand("train", "Train a network");
  train->add_option("--config", tr.config_path, "key = value config file")
      ->required();
  train->add_option("--data", tr.data_path, "encoded training dataset")
      ->required();
  train->add_option("--val", tr.val_path, "encoded validation dataset");
  train->add_option("--val-fraction", tr.val_fraction,
                    "stratified validation split fraction");
  train->add_option("--out", tr.out_dir, "output directory")->required();
  train->add_option("--seed", tr.seed_override, "override the config seed");
  train->add_option("--threads", tr.threads_override, "worker threads");
  train->add_option("--kernels", tr.kernels, "kernel backend (scalar|avx2|auto)");

  EvalArgs ev;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("--checkpoint", ev.checkpoint_path, "trained checkpoint")
      ->required();
  eval->add_option("--data", ev.data_path, "encoded dataset")->required();
  eval->add_option("--out", ev.out_dir, "output directory")->required();
  eval->add_option("--threads", ev.threads, "worker threads");
  eval->add_option("--kernels", ev.kernels, "kernel backend");

  PlotCurvesArgs pc;
  CLI::App* plot = app.add_subcommand(
      "plot-curves", "Sweep one input spike time and one weight; emit CSV");
  plot->add_option("--model", pc.model,
                   "nlif-step | nlif-exp | lif-step | lif-exp-bt1 | "
                   "lif-exp-bthalf")
      ->required();
  plot->add_option("--out", pc.out_dir, "output directory")->required();
  plot->add_option("--seed", pc.seed, "random instance seed");
  plot->add_option("--grid", pc.grid, "sweep grid size");
  plot->add_option("--sweep-index", pc.sweep_index, "which input to sweep");

  try {
    app.parse(argc, argv);
    if (preprocess->parsed()) return cmd_preprocess(pre);
    if (train->parsed()) return cmd_train(tr);
    if (eval->parsed()) return cmd_eval(ev);
    if (plot->parsed()) return cmd_plot_curves(pc);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help exits 0; bad usage exits 2
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}
