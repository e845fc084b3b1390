#include <cstdio>
#include <filesystem>

#include "commands.hpp"
#include "tsnn/data.hpp"

namespace tsnn::cli {
namespace {

struct DatasetDefaults {
  int grf_fields;
  int original_width;
  int resampled_width;
};

DatasetDefaults defaults_for(const std::string& dataset) {
  if (dataset == "nsl-kdd") return {6, 122, 312};
  if (dataset == "awid") return {5, 46, 206};
  throw UsageError("unknown dataset '" + dataset + "' (nsl-kdd | awid)");
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

}  // namespace

int cmd_preprocess(const PreprocessArgs& args) {
  if (args.variant != "original" && args.variant != "resampled")
    throw UsageError("unknown variant '" + args.variant +
                     "' (original | resampled)");
  const DatasetDefaults defs = defaults_for(args.dataset);
  const bool resampled = args.variant == "resampled";
  const int grf = resampled ? (args.grf_fields > 0 ? args.grf_fields : defs.grf_fields) : 0;
  // --width overrides the dataset's width contract; a negative value turns
  // the check off (custom manifests / receptive-field counts).
  int width = args.expected_width;
  if (width == 0) width = resampled ? defs.resampled_width : defs.original_width;
  if (resampled && args.grf_fields > 0 && args.expected_width == 0) width = -1;
  if (width < 0) width = 0;

  std::filesystem::create_directories(args.out_dir);

  auto load = [&](const std::string& path) {
    const std::string resolved = resolve_input_path(path);
    if (args.dataset == "nsl-kdd") return load_nslkdd(resolved);
    if (!args.awid_manifest_path.empty()) {
      const AwidManifest manifest =
          AwidManifest::load(resolve_input_path(args.awid_manifest_path));
      return load_awid(resolved, AwidVariant::kOriginal46, &manifest);
    }
    return load_awid(resolved, AwidVariant::kOriginal46, nullptr);
  };

  const RawTable train = load(args.train_path);
  const FeatureSpec spec =
      build_feature_spec(train, args.dataset, args.variant, grf, args.grf_gamma);

  auto encode_and_save = [&](const RawTable& table, const std::string& src) {
    const Dataset ds = encode_with_spec(table, spec, width);
    const std::string out =
        args.out_dir + "/" + stem_of(src) + "." + args.variant + ".tsnnd";
    save_dataset(ds, out);
    std::printf("%s: %d records, width %d, classes %zu -> %s\n", src.c_str(),
                ds.rows(), ds.width, ds.class_names.size(), out.c_str());
    return ds.rows();
  };

  encode_and_save(train, args.train_path);
  for (const std::string& t : args.test_paths) encode_and_save(load(t), t);

  const std::string manifest_path = args.out_dir + "/" + args.dataset + "." +
                                    args.variant + ".manifest";
  write_file(manifest_path, spec.serialize());
  std::printf("manifest: %s (digest %016llx)\n", manifest_path.c_str(),
              static_cast<unsigned long long>(spec.digest()));
  return 0;
}

}  // namespace tsnn::cli
