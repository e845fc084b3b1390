// Acceptance suite: one pass/fail line per criterion. Criteria 6-8 need the
// real NSL-KDD / AWID files; when those are absent (looked up under
// --data-dir, $TSNN_DATA_DIR, then ./data) they are reported as SKIP with
// instructions rather than silently weakened.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "testutil.hpp"
#include "tsnn/data.hpp"
#include "tsnn/io_util.hpp"
#include "tsnn/kernels.hpp"
#include "tsnn/lambertw.hpp"
#include "tsnn/metrics.hpp"
#include "tsnn/train.hpp"

namespace fs = std::filesystem;
using namespace tsnn;
using tsnn::test::config_for;

namespace {

struct Outcome {
  std::string status;  // PASS | FAIL | SKIP
  std::string detail;
};

int g_fail_count = 0;

void announce(int criterion, const std::string& what, const Outcome& o) {
  std::printf("[%s] criterion %d: %s%s%s\n", o.status.c_str(), criterion,
              what.c_str(), o.detail.empty() ? "" : " - ", o.detail.c_str());
  std::fflush(stdout);
  if (o.status == "FAIL") ++g_fail_count;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string g_data_dir;

std::optional<std::string> find_data_file(
    const std::vector<std::string>& names) {
  std::vector<std::string> dirs;
  if (!g_data_dir.empty()) dirs.push_back(g_data_dir);
  if (const char* env = std::getenv("TSNN_DATA_DIR")) dirs.push_back(env);
  dirs.push_back("data");
  for (const auto& dir : dirs)
    for (const auto& name : names) {
      const fs::path p = fs::path(dir) / name;
      if (fs::exists(p)) return p.string();
    }
  return std::nullopt;
}

// --- criterion 1: closed forms vs ODE oracle -------------------------------

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string spiking_counts;
  for (Variant v : {Variant::kNlifStep, Variant::kNlifExp, Variant::kLifStep,
                    Variant::kLifExpBt1, Variant::kLifExpBtHalf}) {
    const auto cfg = config_for(v);
    Rng rng(0x5eed0000 + static_cast<int>(v));
    int spiking = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const auto inst = test::random_instance(rng, cfg);
      const auto chk = test::check_against_oracle(inst, cfg, 1e-6);
      if (!chk.agree) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "%s trial %d: closed %.9g vs oracle %.9g",
                      variant_name(v), trial, chk.t_closed, chk.t_oracle);
        return {"FAIL", buf};
      }
      spiking += has_spike(chk.t_closed);
    }
    char item[48];
    std::snprintf(item, sizeof item, "%s%s %d", spiking_counts.empty() ? "" : ", ",
                  variant_name(v), spiking);
    spiking_counts += item;
  }
  const double secs = seconds_since(t0);
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "5 x 1000 instances within 1e-6; spiking: %s (%.1f s)",
                spiking_counts.c_str(), secs);
  if (secs >= 60.0) return {"FAIL", std::string(buf) + ", exceeds 60 s"};
  return {"PASS", buf};
}

// --- criterion 2: full-network gradients vs finite differences -------------

double network_loss(const Network& net, const std::vector<double>& z, int rows,
                    const std::vector<int>& labels, const LossConfig& lcfg) {
  const auto out = forward(net, z, rows);
  const int classes = net.output_width();
  double acc = 0.0;
  for (int s = 0; s < rows; ++s)
    acc += data_loss(std::span<const double>(
                         out.data() + static_cast<std::size_t>(s) * classes,
                         static_cast<std::size_t>(classes)),
                     labels[s], lcfg);
  return acc / rows + reg_loss(net, lcfg);
}

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(0xacce55);
  LossConfig lcfg;
  const double h = 1e-6;
  int networks_checked = 0;
  long long coords_checked = 0;

  for (int trial = 0; trial < 160 && networks_checked < 100; ++trial) {
    const auto cfg = config_for(Variant::kNlifExp);
    const int depth = 1 + static_cast<int>(rng.next_below(3));
    std::vector<int> widths{2 + static_cast<int>(rng.next_below(7))};
    for (int d = 0; d < depth; ++d)
      widths.push_back(2 + static_cast<int>(rng.next_below(7)));
    Network net = make_network(cfg, widths, rng.next_u64());

    const int rows = 1 + static_cast<int>(rng.next_below(4));
    std::vector<double> z;
    std::vector<int> labels(rows);
    for (int s = 0; s < rows; ++s) {
      std::vector<double> feat(widths.front());
      for (double& f : feat) f = rng.uniform(0.0, 1.0);
      const auto enc = encode_input(feat, cfg);
      z.insert(z.end(), enc.begin(), enc.end());
      labels[s] = static_cast<int>(rng.next_below(widths.back()));
    }

    ForwardRecord rec;
    forward(net, z, rows, &rec);
    const Gradients grads = backward(rec, labels, net, lcfg);

    auto signature = [&](const Network& n) {
      ForwardRecord r;
      forward(n, z, rows, &r);
      std::vector<int> sig;
      for (const auto& lr : r.layers)
        sig.insert(sig.end(), lr.out_prefix.begin(), lr.out_prefix.end());
      return sig;
    };
    const auto base_sig = signature(net);

    int coords = 0;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      for (std::size_t k = 0; k < net.layers[l].w.size(); ++k) {
        Network probe = net;
        probe.layers[l].w[k] += 1e-4;
        bool on_boundary = signature(probe) != base_sig;
        if (!on_boundary) {
          probe.layers[l].w[k] = net.layers[l].w[k] - 1e-4;
          on_boundary = signature(probe) != base_sig;
        }
        if (on_boundary) continue;

        Network plus = net, minus = net;
        plus.layers[l].w[k] += h;
        minus.layers[l].w[k] -= h;
        const double fd = (network_loss(plus, z, rows, labels, lcfg) -
                           network_loss(minus, z, rows, labels, lcfg)) /
                          (2 * h);
        const double an = grads[l][k];
        const double rel =
            std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-5});
        if (rel >= 1e-4) {
          char buf[160];
          std::snprintf(buf, sizeof buf,
                        "net %d layer %zu weight %zu: analytic %.9g vs fd "
                        "%.9g (rel %.2g)",
                        trial, l, k, an, fd, rel);
          return {"FAIL", buf};
        }
        ++coords;
      }
    }
    if (coords > 0) {
      ++networks_checked;
      coords_checked += coords;
    }
  }

  const double secs = seconds_since(t0);
  char buf[160];
  if (networks_checked < 100) {
    std::snprintf(buf, sizeof buf, "only %d networks yielded checkable coords",
                  networks_checked);
    return {"FAIL", buf};
  }
  std::snprintf(buf, sizeof buf,
                "%d networks, %lld coordinates, rel err < 1e-4 (%.1f s)",
                networks_checked, coords_checked, secs);
  if (secs >= 120.0) return {"FAIL", std::string(buf) + ", exceeds 2 min"};
  return {"PASS", buf};
}

// --- criterion 3: randomized property suite ---------------------------------

Outcome criterion3() {
  const auto cfg = config_for(Variant::kNlifExp);

  // Homogeneity: forward(c z, w) = c forward(z, w) for c > 0.
  {
    Rng rng(0x701);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto inst = test::random_instance(rng, cfg);
      const double c = rng.uniform(0.1, 10.0);
      auto scaled = inst.values;
      for (double& zv : scaled) zv *= c;
      const auto a = forward_neuron(inst.values, inst.weights, cfg);
      const auto b = forward_neuron(scaled, inst.weights, cfg);
      if (has_spike(a.value) != has_spike(b.value))
        return {"FAIL", "homogeneity: spike decision changed under scaling"};
      if (has_spike(a.value) &&
          std::abs(b.value - c * a.value) > 1e-9 * std::abs(c * a.value))
        return {"FAIL", "homogeneity: scaled output mismatch"};
    }
  }

  // Permutation invariance across all variants.
  {
    Rng rng(0x702);
    for (int trial = 0; trial < 1000; ++trial) {
      const Variant v = static_cast<Variant>(trial % 5);
      const auto vcfg = config_for(v);
      const auto inst = test::random_instance(rng, vcfg);
      const auto perm =
          random_permutation(inst.values.size(), derive_seed(0x702, trial));
      std::vector<double> z2(inst.values.size()), w2(inst.values.size());
      for (std::size_t i = 0; i < perm.size(); ++i) {
        z2[i] = inst.values[perm[i]];
        w2[i] = inst.weights[perm[i]];
      }
      if (forward_neuron(inst.values, inst.weights, vcfg).value !=
          forward_neuron(z2, w2, vcfg).value)
        return {"FAIL", std::string("permutation invariance: ") + variant_name(v)};
    }
  }

  // Causality: output strictly after every causal input, at or before the
  // next excluded one.
  {
    Rng rng(0x703);
    int spiking = 0;
    for (int trial = 0; trial < 1000 || spiking < 300; ++trial) {
      if (trial > 20000) break;
      const Variant v = static_cast<Variant>(trial % 5);
      const auto vcfg = config_for(v);
      const auto inst = test::random_instance(rng, vcfg);
      const auto r = forward_neuron(inst.values, inst.weights, vcfg);
      if (!has_spike(r.value)) continue;
      ++spiking;
      std::vector<double> sorted = inst.values;
      std::sort(sorted.begin(), sorted.end());
      for (int i = 0; i < r.causal.prefix_count; ++i)
        if (!(r.value > sorted[i]))
          return {"FAIL", std::string("causality (strict): ") + variant_name(v)};
      if (r.causal.prefix_count < static_cast<int>(sorted.size()) &&
          !(r.value <= sorted[r.causal.prefix_count]))
        return {"FAIL", std::string("causality (next bound): ") + variant_name(v)};
    }
  }

  // Readout-loss scale invariance and argmin invariance.
  {
    Rng rng(0x704);
    LossConfig lcfg;
    lcfg.lambda = 0.0;
    lcfg.K = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const int width = 2 + static_cast<int>(rng.next_below(6));
      std::vector<double> zv(width);
      for (double& x : zv) x = rng.uniform(0.3, 12.0);
      const int label = static_cast<int>(rng.next_below(width));
      const double c = rng.uniform(0.05, 50.0);
      auto scaled = zv;
      for (double& x : scaled) x *= c;
      if (std::abs(data_loss(zv, label, lcfg) - data_loss(scaled, label, lcfg)) >
          1e-10)
        return {"FAIL", "readout loss not scale invariant"};
      if (predict(zv) != predict(scaled))
        return {"FAIL", "argmin prediction not scale invariant"};
    }
  }

  // Lambert W residual over the working range.
  {
    const double lo = -std::exp(-1.0);
    for (int i = 0; i <= 10000; ++i) {
      const double x = lo + (10.0 - lo) * i / 10000.0;
      const double w = lambert_w0(x);
      if (std::abs(w * std::exp(w) - x) > 1e-10 * std::max(1.0, std::abs(x)))
        return {"FAIL", "lambert residual exceeded 1e-10"};
    }
  }

  return {"PASS", "homogeneity, permutation, causality, loss invariances, "
                  "lambert residual (>= 1000 cases each)"};
}

// --- criterion 4: metric reproduction from the published counts -------------

struct PaperRow {
  const char* name;
  long long estimated, correct, total;
  double precision, recall, f1;
};

Outcome criterion4() {
  struct Table {
    const char* label;
    std::vector<PaperRow> rows;
  };
  // (estimated, correct, total) triples and the printed per-class metrics.
  // The impersonation F1 appears as 0.999916 in one table and 99.916% in the
  // other; the harmonic mean of the printed precision/recall admits only the
  // latter, which is asserted here.
  const std::vector<Table> tables = {
      {"NSL-KDD original",
       {{"normal", 9577, 9359, 9707, 0.977237, 0.964150, 0.970649},
        {"DoS", 7508, 7409, 7456, 0.986814, 0.993696, 0.990243},
        {"Probe", 2367, 2346, 2418, 0.991128, 0.970223, 0.980564},
        {"R2L", 2895, 2618, 2749, 0.904318, 0.952346, 0.927711},
        {"U2R", 183, 161, 200, 0.879781, 0.805000, 0.840731}}},
      {"NSL-KDD resampled",
       {{"normal", 7447, 7442, 7451, 0.999329, 0.998792, 0.999060},
        {"DoS", 2405, 2405, 2420, 1.000000, 0.993802, 0.996891},
        {"Probe", 2743, 2686, 2754, 0.979220, 0.975309, 0.977260},
        {"R2L", 207, 200, 200, 0.966184, 1.000000, 0.982801},
        {"U2R", 9728, 9642, 9705, 0.991160, 0.993509, 0.992333}}},
      {"AWID original",
       {{"normal", 5803, 5006, 8097, 0.862657, 0.618254, 0.720288},
        {"flooding", 21760, 19918, 20079, 0.915349, 0.991982, 0.952126},
        {"injection", 16680, 16668, 16682, 0.999281, 0.999161, 0.999221},
        {"impersonation", 531387, 528144, 530772, 0.993897, 0.995049,
         0.994473}}},
      {"AWID resampled",
       {{"normal", 8586, 8096, 8097, 0.942930, 0.999876, 0.970569},
        {"flooding", 20366, 20024, 20079, 0.983207, 0.997261, 0.990184},
        {"injection", 16685, 16675, 16682, 0.999401, 0.999580, 0.999491},
        {"impersonation", 529993, 529937, 530772, 0.999894, 0.998427,
         0.999160}}},
  };

  int rows_checked = 0;
  for (const Table& table : tables) {
    std::vector<std::int64_t> est, cor, tot;
    std::vector<std::string> names;
    for (const PaperRow& r : table.rows) {
      est.push_back(r.estimated);
      cor.push_back(r.correct);
      tot.push_back(r.total);
      names.push_back(r.name);
    }
    const ClassReport rep =
        report(confusion_from_marginals(est, cor, tot, names));
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const PaperRow& want = table.rows[i];
      const ClassMetrics& got = rep.per_class[i];
      auto off = [](double a, double b) { return std::abs(a - b) >= 5e-5; };
      if (off(got.precision, want.precision) || off(got.recall, want.recall) ||
          off(got.f1, want.f1)) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "%s/%s: got p=%.6f r=%.6f f1=%.6f, published p=%.6f "
                      "r=%.6f f1=%.6f",
                      table.label, want.name, got.precision, got.recall,
                      got.f1, want.precision, want.recall, want.f1);
        return {"FAIL", buf};
      }
      ++rows_checked;
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf,
                "%d published per-class rows reproduced to 4 decimals",
                rows_checked);
  return {"PASS", buf};
}

// --- criterion 5: XOR convergence -------------------------------------------

Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> features{0, 0, 0, 1, 1, 0, 1, 1};
  const std::vector<int> labels{0, 1, 1, 0};
  const auto cfg = config_for(Variant::kNlifExp);

  int converged = 0;
  std::string step_counts;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TrainConfig tcfg;
    tcfg.learning_rate = 0.05;  // the 0.03-0.08 band converges on all seeds
    tcfg.batch_size = 4;        // full batch: one Adam step per epoch
    tcfg.epochs = 5000;
    tcfg.seed = seed;
    LossConfig lcfg;
    Network net = make_network(cfg, {2, 4, 2}, seed);
    int steps = -1;
    train(net, features, 4, labels, tcfg, lcfg, {}, 0, {},
          [&](const EpochStats& s, const Network&) {
            if (s.train_acc == 1.0) {
              steps = s.epoch + 1;
              return false;
            }
            return true;
          });
    if (steps > 0) {
      ++converged;
      step_counts += (step_counts.empty() ? "" : ",") + std::to_string(steps);
    } else {
      step_counts += (step_counts.empty() ? "" : ",") + std::string("x");
    }
  }
  const double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/5 seeds reached 100%% (steps: %s, %.1f s)",
                converged, step_counts.c_str(), secs);
  if (converged < 4) return {"FAIL", buf};
  if (secs >= 60.0) return {"FAIL", std::string(buf) + ", exceeds 60 s"};
  return {"PASS", buf};
}

// --- criteria 6 and 8: NSL-KDD desk-scale training + determinism ------------

struct KddRunResult {
  double best_val = 0.0;
  int best_epoch = -1;
  std::string history_bytes;
  std::string checkpoint_bytes;
};

KddRunResult run_kdd_desk_scale(const Dataset& full) {
  const Dataset sub = subsample(full, 20000, 20240001);
  auto [train_ds, val_ds] = stratified_split(sub, 0.2, 20240002);

  const auto cfg = config_for(Variant::kNlifExp);
  TrainConfig tcfg;
  tcfg.learning_rate = 0.001;
  tcfg.batch_size = 128;
  tcfg.epochs = 50;
  tcfg.seed = 1;
  LossConfig lcfg;  // K = 100, lambda = 0.001, beta = 1

  Network net = make_network(
      cfg, {train_ds.width, 100, 100, static_cast<int>(full.class_names.size())},
      tcfg.seed, lcfg.beta);

  KddRunResult res;
  const History history = train(
      net, train_ds.features, train_ds.rows(), train_ds.labels, tcfg, lcfg,
      val_ds.features, val_ds.rows(), val_ds.labels,
      [&](const EpochStats& s, const Network&) {
        if (s.val_acc > res.best_val) {
          res.best_val = s.val_acc;
          res.best_epoch = s.epoch;
        }
        std::printf("  epoch %2d loss %9.4f train %.4f val %.4f\n", s.epoch,
                    s.loss, s.train_acc, s.val_acc);
        std::fflush(stdout);
        // The criterion is met at 0.90; keep a small margin then stop early
        // to hold the runtime down.
        return s.val_acc < 0.915;
      });

  write_history_csv(history, "acceptance_kdd_history.csv");
  save_checkpoint(net, train_ds.manifest_text, "acceptance_kdd_ckpt.tsnnc");
  res.history_bytes = read_file("acceptance_kdd_history.csv");
  res.checkpoint_bytes = read_file("acceptance_kdd_ckpt.tsnnc");
  return res;
}

bool g_run_full = false;

Outcome criterion6(std::optional<KddRunResult>& first_run) {
  const auto train_file = find_data_file({"KDDTrain+.txt", "KDDTrain+.csv"});
  if (!train_file)
    return {"SKIP",
            "KDDTrain+.txt not found (set TSNN_DATA_DIR or pass --data-dir; "
            "this sandbox has no dataset mirror)"};
  const auto t0 = std::chrono::steady_clock::now();

  const RawTable raw = load_nslkdd(*train_file);
  if (raw.rows != 125973) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "KDDTrain+ has %zu records, expected 125973",
                  raw.rows);
    return {"FAIL", buf};
  }
  // Published record counts for the test splits, when those files are around.
  const struct { const char* name; std::size_t rows; } splits[] = {
      {"KDDTest+.txt", 22544}, {"KDDTest-21.txt", 11850}};
  for (const auto& split : splits) {
    const auto f = find_data_file({split.name});
    if (!f) continue;
    const std::size_t got = load_nslkdd(*f).rows;
    if (got != split.rows) {
      char buf[140];
      std::snprintf(buf, sizeof buf, "%s has %zu records, expected %zu",
                    split.name, got, split.rows);
      return {"FAIL", buf};
    }
  }

  const FeatureSpec spec = build_feature_spec(raw, "nsl-kdd", "original", 0);
  const Dataset full = encode_original_kdd(raw, spec);

  first_run = run_kdd_desk_scale(full);
  const double secs = seconds_since(t0);
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "20k subsample, width %d: best val acc %.4f (epoch %d, %.0f s)",
                full.width, first_run->best_val, first_run->best_epoch, secs);
  if (first_run->best_val < 0.90) return {"FAIL", buf};

  if (g_run_full) {
    // Optional long-running check: the full training split with a held-out
    // 20%, targeting the published-scale >= 0.95.
    auto [tr, va] = stratified_split(full, 0.2, 20240003);
    const auto cfg = config_for(Variant::kNlifExp);
    TrainConfig tcfg;
    tcfg.learning_rate = 0.001;
    tcfg.batch_size = 128;
    tcfg.epochs = 50;
    tcfg.seed = 1;
    LossConfig lcfg;
    Network net = make_network(cfg, {full.width, 100, 100, 5}, tcfg.seed,
                               lcfg.beta);
    double best = 0.0;
    train(net, tr.features, tr.rows(), tr.labels, tcfg, lcfg, va.features,
          va.rows(), va.labels, [&](const EpochStats& s, const Network&) {
            best = std::max(best, s.val_acc);
            std::printf("  [full] epoch %2d loss %9.4f train %.4f val %.4f\n",
                        s.epoch, s.loss, s.train_acc, s.val_acc);
            std::fflush(stdout);
            return s.val_acc < 0.955;
          });
    char buf2[240];
    std::snprintf(buf2, sizeof buf2, "%s; full-data val acc %.4f (target 0.95)",
                  buf, best);
    if (best < 0.95) return {"FAIL", buf2};
    return {"PASS", buf2};
  }
  return {"PASS", buf};
}

Outcome criterion8(const std::optional<KddRunResult>& first_run) {
  if (!first_run)
    return {"SKIP",
            "depends on criterion 6's dataset; synthetic-data determinism is "
            "covered by test_cli and test_training"};
  const auto train_file = find_data_file({"KDDTrain+.txt", "KDDTrain+.csv"});
  const RawTable raw = load_nslkdd(*train_file);
  const FeatureSpec spec = build_feature_spec(raw, "nsl-kdd", "original", 0);
  const Dataset full = encode_original_kdd(raw, spec);
  const KddRunResult second = run_kdd_desk_scale(full);
  if (second.history_bytes != first_run->history_bytes)
    return {"FAIL", "history files differ between identical runs"};
  if (second.checkpoint_bytes != first_run->checkpoint_bytes)
    return {"FAIL", "checkpoints differ between identical runs"};
  return {"PASS", "byte-identical history and checkpoint across two runs"};
}

// --- criterion 7: AWID loading + self-split training -------------------------

Outcome criterion7() {
  const auto file = find_data_file(
      {"AWID-CLS-R-Tst.csv", "AWID-CLS-R-Tst", "AWID-CLS-R-Tst.txt"});
  if (!file)
    return {"SKIP",
            "AWID-CLS-R-Tst not found (set TSNN_DATA_DIR or pass --data-dir; "
            "this sandbox has no dataset mirror)"};
  const auto t0 = std::chrono::steady_clock::now();

  const RawTable raw = load_awid(*file, AwidVariant::kOriginal46, nullptr);
  if (raw.rows != 575643) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "AWID-CLS-R-Tst has %zu records, expected "
                                   "575643", raw.rows);
    return {"FAIL", buf};
  }
  const long long want_counts[4] = {8097, 20079, 16682, 530772};
  long long got_counts[4] = {0, 0, 0, 0};
  for (int lab : raw.labels) ++got_counts[lab];
  for (int c = 0; c < 4; ++c)
    if (got_counts[c] != want_counts[c]) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "class '%s' has %lld records, published total %lld",
                    raw.class_names[c].c_str(), got_counts[c], want_counts[c]);
      return {"FAIL", buf};
    }

  const FeatureSpec spec = build_feature_spec(raw, "awid", "original", 0);
  const Dataset full = encode_with_spec(raw, spec, 46);
  auto [train_ds, val_ds] = stratified_split(full, 0.2, 7);

  const auto cfg = config_for(Variant::kNlifExp);
  TrainConfig tcfg;
  tcfg.learning_rate = 0.001;
  tcfg.batch_size = 128;
  tcfg.epochs = 20;
  tcfg.seed = 1;
  LossConfig lcfg;
  Network net = make_network(cfg, {46, 100, 100, 4}, tcfg.seed, lcfg.beta);

  double best_val = 0.0;
  train(net, train_ds.features, train_ds.rows(), train_ds.labels, tcfg, lcfg,
        val_ds.features, val_ds.rows(), val_ds.labels,
        [&](const EpochStats& s, const Network&) {
          best_val = std::max(best_val, s.val_acc);
          std::printf("  epoch %2d loss %9.4f train %.4f val %.4f\n", s.epoch,
                      s.loss, s.train_acc, s.val_acc);
          std::fflush(stdout);
          return s.val_acc < 0.96;
        });

  const double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "575643 records, class totals match; 80/20 self-split val acc "
                "%.4f (%.0f s)",
                best_val, secs);
  if (best_val >= 0.95) return {"PASS", buf};
  return {"FAIL", buf};
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--data-dir") == 0 && i + 1 < argc)
      g_data_dir = argv[++i];
    else if (std::strcmp(argv[i], "--full") == 0)
      g_run_full = true;  // adds the long-running full-data NSL-KDD check
  }

  std::printf("acceptance: kernels backend in use: %s\n",
              kernels::active().name);

  announce(1, "closed-form spike times match the ODE oracle", criterion1());
  announce(2, "analytic network gradients match finite differences",
           criterion2());
  announce(3, "randomized property suite", criterion3());
  announce(4, "published per-class metrics reproduced from counts",
           criterion4());
  announce(5, "XOR convergence within 5000 Adam steps", criterion5());

  std::optional<KddRunResult> kdd_run;
  announce(6, "NSL-KDD desk-scale training reaches 0.90 held-out accuracy",
           criterion6(kdd_run));
  announce(7, "AWID load counts and self-split training", criterion7());
  announce(8, "determinism: identical seeds give identical artifacts",
           criterion8(kdd_run));

  if (g_fail_count > 0) {
    std::printf("acceptance: %d criterion(s) FAILED\n", g_fail_count);
    return 1;
  }
  std::printf("acceptance: no failures\n");
  return 0;
}
