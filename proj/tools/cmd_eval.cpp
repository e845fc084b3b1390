#include <cstdio>
#include <filesystem>

#include "commands.hpp"
#include "tsnn/data.hpp"
#include "tsnn/kernels.hpp"
#include "tsnn/metrics.hpp"
#include "tsnn/train.hpp"

namespace tsnn::cli {

int cmd_eval(const EvalArgs& args) {
  if (!args.kernels.empty() && !kernels::select(args.kernels))
    throw UsageError("unknown or unsupported kernel backend '" + args.kernels + "'");

  const LoadedCheckpoint ckpt =
      load_checkpoint(resolve_input_path(args.checkpoint_path));
  const Dataset ds = load_dataset(resolve_input_path(args.data_path));

  if (ckpt.net.input_width() != ds.width)
    throw UsageError("checkpoint expects width " +
                     std::to_string(ckpt.net.input_width()) +
                     " but the dataset has width " + std::to_string(ds.width));
  if (ckpt.net.output_width() != static_cast<int>(ds.class_names.size()))
    throw UsageError("checkpoint has " +
                     std::to_string(ckpt.net.output_width()) +
                     " outputs but the dataset has " +
                     std::to_string(ds.class_names.size()) + " classes");
  if (!ckpt.manifest_text.empty() && !ds.manifest_text.empty() &&
      fnv1a64(ckpt.manifest_text) != ds.manifest_digest)
    throw UsageError(
        "dataset encoding manifest differs from the checkpoint's; re-encode "
        "the data with the training manifest");

  const std::vector<int> preds =
      predict_batch(ckpt.net, ds.features, ds.rows(), args.threads);
  const ConfusionMatrix cm = confusion(preds, ds.labels, ds.class_names);
  const ClassReport rep = report(cm);

  std::filesystem::create_directories(args.out_dir);
  write_report_csv(rep, args.out_dir + "/report.csv");
  write_file(args.out_dir + "/report.txt", report_text_table(rep));
  write_confusion_csv(cm, args.out_dir + "/confusion_counts.csv", false);
  write_confusion_csv(cm, args.out_dir + "/confusion_percent.csv", true);

  std::fputs(report_text_table(rep).c_str(), stdout);
  std::printf("reports written to %s\n", args.out_dir.c_str());
  return 0;
}

}  // namespace tsnn::cli
