#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tsnn::cli {

// Input/usage problems exit with code 2; anything else is an internal error
// and exits with 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Missing paths are retried under $TSNN_DATA_DIR before giving up.
std::string resolve_input_path(const std::string& path);

struct PreprocessArgs {
  std::string dataset;  // nsl-kdd | awid
  std::string variant;  // original | resampled
  std::string train_path;
  std::vector<std::string> test_paths;
  std::string awid_manifest_path;  // optional override
  std::string out_dir;
  int grf_fields = 0;      // 0 = dataset default
  double grf_gamma = 1.5;
  int expected_width = 0;  // 0 = dataset default
};
int cmd_preprocess(const PreprocessArgs& args);

struct TrainArgs {
  std::string config_path;
  std::string data_path;
  std::string val_path;      // optional
  double val_fraction = 0.0; // optional, stratified self-split
  std::string out_dir;
  long long seed_override = -1;
  int threads_override = 0;
  std::string kernels;  // optional backend override
};
int cmd_train(const TrainArgs& args);

struct EvalArgs {
  std::string checkpoint_path;
  std::string data_path;
  std::string out_dir;
  int threads = 1;
  std::string kernels;
};
int cmd_eval(const EvalArgs& args);

struct PlotCurvesArgs {
  std::string model;  // neuron variant name
  std::string out_dir;
  unsigned long long seed = 1;
  int grid = 301;
  int sweep_index = 0;
};
int cmd_plot_curves(const PlotCurvesArgs& args);

}  // namespace tsnn::cli
