#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>

#include "commands.hpp"
#include "json.hpp"
#include "tsnn/config.hpp"
#include "tsnn/data.hpp"
#include "tsnn/kernels.hpp"
#include "tsnn/rng.hpp"
#include "tsnn/train.hpp"

namespace tsnn::cli {
namespace {

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

NeuronModelConfig model_from_config(const KeyValueConfig& cfg) {
  NeuronModelConfig m;
  m.variant = variant_from_name(cfg.get_string("variant", "nlif-exp"));
  m.a = cfg.get_double("a", 1.0);
  m.tau = cfg.get_double("tau", 1.0);
  m.b = cfg.get_double("b", 0.0);
  m.v0 = cfg.get_double("v0", 1.0);
  m.alpha = cfg.get_double("alpha", 1.0);
  m.validate();
  return m;
}

}  // namespace

int cmd_train(const TrainArgs& args) {
  const std::string config_text = read_file(resolve_input_path(args.config_path));
  const KeyValueConfig cfg = KeyValueConfig::parse(config_text);

  const NeuronModelConfig model = model_from_config(cfg);
  if (model.variant != Variant::kNlifExp)
    throw UsageError("training requires variant = nlif-exp (closed-form gradients)");

  TrainConfig tcfg;
  tcfg.learning_rate = cfg.get_double("learning_rate", 0.001);
  tcfg.batch_size = static_cast<int>(cfg.get_int("batch_size", 128));
  tcfg.epochs = static_cast<int>(cfg.get_int("epochs", 50));
  tcfg.adam_beta1 = cfg.get_double("adam_beta1", 0.9);
  tcfg.adam_beta2 = cfg.get_double("adam_beta2", 0.999);
  tcfg.adam_eps = cfg.get_double("adam_eps", 1e-8);
  tcfg.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  tcfg.threads = static_cast<int>(cfg.get_int("threads", 1));
  tcfg.patience = static_cast<int>(cfg.get_int("patience", 0));
  if (args.seed_override >= 0) tcfg.seed = static_cast<std::uint64_t>(args.seed_override);
  if (args.threads_override > 0) tcfg.threads = args.threads_override;

  LossConfig lcfg;
  lcfg.lambda = cfg.get_double("lambda", 0.001);
  lcfg.K = cfg.get_double("K", 100.0);
  lcfg.beta = cfg.get_double("beta", 1.0);
  lcfg.softmax_all_classes = cfg.get_int("softmax_all_classes", 0) != 0;

  if (!args.kernels.empty() && !kernels::select(args.kernels))
    throw UsageError("unknown or unsupported kernel backend '" + args.kernels + "'");

  Dataset train_ds = load_dataset(resolve_input_path(args.data_path));
  Dataset val_ds;
  bool have_val = false;
  if (!args.val_path.empty() && args.val_fraction > 0.0)
    throw UsageError("--val and --val-fraction are mutually exclusive");
  if (!args.val_path.empty()) {
    val_ds = load_dataset(resolve_input_path(args.val_path));
    if (val_ds.width != train_ds.width)
      throw UsageError("validation width differs from training width");
    have_val = true;
  } else if (args.val_fraction > 0.0) {
    auto [tr, va] = stratified_split(train_ds, args.val_fraction,
                                     derive_seed(tcfg.seed, 0xA1));
    train_ds = std::move(tr);
    val_ds = std::move(va);
    have_val = true;
  }

  std::vector<int> hidden = cfg.get_int_list("hidden");
  if (hidden.empty()) hidden = {100, 100};
  std::vector<int> widths{train_ds.width};
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(static_cast<int>(train_ds.class_names.size()));

  std::filesystem::create_directories(args.out_dir);
  const std::string started = iso_now();

  Network net = make_network(model, widths, tcfg.seed, lcfg.beta);
  std::printf("training %d", widths.front());
  for (std::size_t i = 1; i < widths.size(); ++i) std::printf("->%d", widths[i]);
  std::printf(" on %d records (val %d), seed %llu, kernels %s\n",
              train_ds.rows(), have_val ? val_ds.rows() : 0,
              static_cast<unsigned long long>(tcfg.seed),
              kernels::active().name);
  std::printf("hyperparameters: K=%g lambda=%g beta=%g lr=%g batch=%d epochs=%d\n",
              lcfg.K, lcfg.lambda, lcfg.beta, tcfg.learning_rate,
              tcfg.batch_size, tcfg.epochs);

  const int checkpoint_every = static_cast<int>(cfg.get_int("checkpoint_every", 0));
  const std::string ckpt_path = args.out_dir + "/checkpoint.tsnnc";
  auto callback = [&](const EpochStats& s, const Network& n) {
    if (std::isnan(s.val_acc))
      std::printf("epoch %3d  loss %10.4f  train_acc %.4f\n", s.epoch, s.loss,
                  s.train_acc);
    else
      std::printf("epoch %3d  loss %10.4f  train_acc %.4f  val_acc %.4f\n",
                  s.epoch, s.loss, s.train_acc, s.val_acc);
    std::fflush(stdout);
    if (checkpoint_every > 0 && (s.epoch + 1) % checkpoint_every == 0)
      save_checkpoint(n, train_ds.manifest_text,
                      args.out_dir + "/checkpoint_epoch" +
                          std::to_string(s.epoch + 1) + ".tsnnc");
    return true;
  };

  const History history = train(
      net, train_ds.features, train_ds.rows(), train_ds.labels, tcfg, lcfg,
      val_ds.features, have_val ? val_ds.rows() : 0, val_ds.labels, callback);

  save_checkpoint(net, train_ds.manifest_text, ckpt_path);
  const std::string history_path = args.out_dir + "/history.csv";
  write_history_csv(history, history_path);

  nlohmann::json manifest;
  manifest["schema_version"] = 1;
  manifest["config_digest"] = fnv1a64(config_text);
  manifest["dataset"] = args.data_path;
  manifest["dataset_digest"] = train_ds.manifest_digest;
  manifest["seed"] = tcfg.seed;
  manifest["threads"] = tcfg.threads;
  manifest["kernels"] = kernels::active().name;
  manifest["started_at"] = started;
  manifest["finished_at"] = iso_now();
  manifest["checkpoint"] = ckpt_path;
  manifest["history"] = history_path;
  if (!history.empty()) {
    manifest["final"]["loss"] = history.back().loss;
    manifest["final"]["train_acc"] = history.back().train_acc;
    if (!std::isnan(history.back().val_acc))
      manifest["final"]["val_acc"] = history.back().val_acc;
  }
  write_file(args.out_dir + "/run_manifest.json", manifest.dump(2) + "\n");

  std::printf("checkpoint: %s\nhistory: %s\n", ckpt_path.c_str(),
              history_path.c_str());
  return 0;
}

}  // namespace tsnn::cli
