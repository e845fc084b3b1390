#include "tsnn/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "tsnn/kernels.hpp"
#include "tsnn/parallel.hpp"
#include "tsnn/rng.hpp"

namespace tsnn {

void TrainConfig::validate() const {
  if (!(learning_rate > 0)) throw std::invalid_argument("train: learning_rate <= 0");
  if (batch_size < 1) throw std::invalid_argument("train: batch_size < 1");
  if (epochs < 1) throw std::invalid_argument("train: epochs < 1");
  if (!(adam_beta1 > 0 && adam_beta1 < 1) || !(adam_beta2 > 0 && adam_beta2 < 1))
    throw std::invalid_argument("train: adam betas must lie in (0, 1)");
  if (!(adam_eps > 0)) throw std::invalid_argument("train: adam_eps <= 0");
  if (threads < 1) throw std::invalid_argument("train: threads < 1");
}

OptimizerState make_optimizer_state(const Network& net) {
  OptimizerState st;
  for (const Layer& l : net.layers) {
    st.m.emplace_back(l.w.size(), 0.0);
    st.v.emplace_back(l.w.size(), 0.0);
  }
  return st;
}

Gradients backward(const ForwardRecord& record, std::span<const int> labels,
                   const Network& net, const LossConfig& lcfg, int threads) {
  if (record.revision != net.revision)
    throw std::runtime_error(
        "backward: stale forward record (network mutated since forward)");
  if (net.cfg.variant != Variant::kNlifExp)
    throw std::invalid_argument("backward: only nlif-exp is trainable");
  if (labels.size() != static_cast<std::size_t>(record.batch))
    throw std::invalid_argument("backward: label count mismatch");
  if (record.layers.size() != net.layers.size())
    throw std::invalid_argument("backward: record/network depth mismatch");
  lcfg.validate();

  const int batch = record.batch;
  const int depth = static_cast<int>(net.layers.size());
  const double inv_batch = 1.0 / batch;

  // Transposed weights per layer, shared by all workers.
  std::vector<std::vector<double>> w_t(depth);
  for (int l = 0; l < depth; ++l) {
    const Layer& layer = net.layers[l];
    w_t[l].resize(layer.w.size());
    for (int j = 0; j < layer.fan_out; ++j)
      for (int i = 0; i < layer.fan_in; ++i)
        w_t[l][static_cast<std::size_t>(i) * layer.fan_out + j] = layer.at(j, i);
  }

  const int workers = std::max(1, std::min(threads, batch));
  // Per-worker transposed gradient accumulators, reduced in worker order so
  // the result only depends on the worker count, never on scheduling.
  std::vector<std::vector<std::vector<double>>> dwt(workers);
  for (int t = 0; t < workers; ++t) {
    dwt[t].resize(depth);
    for (int l = 0; l < depth; ++l) dwt[t][l].assign(net.layers[l].w.size(), 0.0);
  }

  const auto& backend = kernels::active();

  parallel_for(batch, workers, [&](int worker, int begin, int end) {
    std::vector<double> g, g_next, g_over_d, dz_sorted;
    for (int s = begin; s < end; ++s) {
      // Readout gradient, averaged over the batch.
      const LayerRecord& top = record.layers[depth - 1];
      const int width = net.layers[depth - 1].fan_out;
      std::span<const double> z_row(
          top.out_value.data() + static_cast<std::size_t>(s) * width,
          static_cast<std::size_t>(width));
      g = data_loss_grad(z_row, labels[s], lcfg);
      for (double& gi : g) gi *= inv_batch;

      for (int l = depth - 1; l >= 0; --l) {
        const LayerRecord& lr = record.layers[l];
        const Layer& layer = net.layers[l];
        const int fan_out = layer.fan_out;
        const int nf = static_cast<int>(lr.perm[s].size());
        const std::size_t row = static_cast<std::size_t>(s) * fan_out;

        g_over_d.assign(fan_out, 0.0);
        for (int j = 0; j < fan_out; ++j)
          if (lr.out_prefix[row + j] > 0)
            g_over_d[j] = g[j] / lr.out_denom[row + j];

        g_next.assign(layer.fan_in, 0.0);
        if (nf > 0) {
          dz_sorted.assign(nf, 0.0);
          backend.backward_rational(lr.z_sorted[s].data(), lr.perm[s].data(),
                                    nf, w_t[l].data(), fan_out,
                                    g_over_d.data(), lr.out_value.data() + row,
                                    lr.out_prefix.data() + row,
                                    dz_sorted.data(), dwt[worker][l].data());
          for (int i = 0; i < nf; ++i) g_next[lr.perm[s][i]] = dz_sorted[i];
        }
        std::swap(g, g_next);
      }
    }
  });

  // Reduce workers and transpose back to the [out][in] layout.
  Gradients grads(depth);
  for (int l = 0; l < depth; ++l) {
    const Layer& layer = net.layers[l];
    for (int t = 1; t < workers; ++t)
      for (std::size_t k = 0; k < dwt[0][l].size(); ++k)
        dwt[0][l][k] += dwt[t][l][k];
    grads[l].resize(layer.w.size());
    for (int j = 0; j < layer.fan_out; ++j)
      for (int i = 0; i < layer.fan_in; ++i)
        grads[l][static_cast<std::size_t>(j) * layer.fan_in + i] =
            dwt[0][l][static_cast<std::size_t>(i) * layer.fan_out + j];
  }
  add_reg_grad(net, lcfg, grads);
  return grads;
}

void adam_step(Network& net, const Gradients& grads, OptimizerState& state,
               const TrainConfig& tcfg) {
  tcfg.validate();
  if (grads.size() != net.layers.size() || state.m.size() != net.layers.size())
    throw std::invalid_argument("adam_step: shape mismatch");
  for (std::size_t l = 0; l < grads.size(); ++l) {
    if (grads[l].size() != net.layers[l].w.size())
      throw std::invalid_argument("adam_step: shape mismatch");
    for (double gi : grads[l])
      if (!std::isfinite(gi))
        throw std::runtime_error("adam_step: non-finite gradient in layer " +
                                 std::to_string(l));
  }

  state.step += 1;
  const double inv_bc1 =
      1.0 / (1.0 - std::pow(tcfg.adam_beta1, static_cast<double>(state.step)));
  const double inv_bc2 =
      1.0 / (1.0 - std::pow(tcfg.adam_beta2, static_cast<double>(state.step)));
  const auto& backend = kernels::active();
  for (std::size_t l = 0; l < grads.size(); ++l) {
    backend.adam_update(net.layers[l].w.data(), grads[l].data(),
                        state.m[l].data(), state.v[l].data(), grads[l].size(),
                        tcfg.learning_rate, tcfg.adam_beta1, tcfg.adam_beta2,
                        tcfg.adam_eps, inv_bc1, inv_bc2);
  }
  net.revision += 1;
}

namespace {

std::vector<double> encode_rows(const Network& net,
                                std::span<const double> features,
                                std::span<const int> rows_idx, int width) {
  std::vector<double> out(rows_idx.size() * static_cast<std::size_t>(width));
  for (std::size_t r = 0; r < rows_idx.size(); ++r) {
    std::span<const double> feat(
        features.data() + static_cast<std::size_t>(rows_idx[r]) * width,
        static_cast<std::size_t>(width));
    std::vector<double> z = encode_input(feat, net.cfg);
    std::copy(z.begin(), z.end(),
              out.begin() + r * static_cast<std::size_t>(width));
  }
  return out;
}

}  // namespace

std::vector<int> predict_batch(const Network& net,
                               std::span<const double> features, int rows,
                               int threads, int batch_size) {
  const int width = net.input_width();
  if (features.size() != static_cast<std::size_t>(rows) * width)
    throw std::invalid_argument("predict_batch: feature width mismatch");
  std::vector<int> preds(rows);
  std::vector<int> idx(batch_size);
  for (int start = 0; start < rows; start += batch_size) {
    const int n = std::min(batch_size, rows - start);
    idx.resize(n);
    for (int r = 0; r < n; ++r) idx[r] = start + r;
    std::vector<double> z = encode_rows(net, features, idx, width);
    std::vector<double> out = forward(net, z, n, nullptr, threads);
    const int c = net.output_width();
    for (int r = 0; r < n; ++r)
      preds[start + r] = predict(std::span<const double>(
          out.data() + static_cast<std::size_t>(r) * c, c));
  }
  return preds;
}

double evaluate_accuracy(const Network& net, std::span<const double> features,
                         int rows, std::span<const int> labels, int threads) {
  if (rows == 0) return 0.0;
  std::vector<int> preds = predict_batch(net, features, rows, threads);
  std::int64_t correct = 0;
  for (int r = 0; r < rows; ++r) correct += preds[r] == labels[r];
  return static_cast<double>(correct) / rows;
}

History train(Network& net, std::span<const double> features, int rows,
              std::span<const int> labels, const TrainConfig& tcfg,
              const LossConfig& lcfg, std::span<const double> val_features,
              int val_rows, std::span<const int> val_labels,
              const EpochCallback& callback) {
  tcfg.validate();
  lcfg.validate();
  net.validate();
  if (rows < 1) throw std::invalid_argument("train: empty dataset");
  const int width = net.input_width();
  const int classes = net.output_width();
  if (features.size() != static_cast<std::size_t>(rows) * width)
    throw std::invalid_argument("train: feature width mismatch");
  if (labels.size() != static_cast<std::size_t>(rows))
    throw std::invalid_argument("train: label count mismatch");
  for (int lab : labels)
    if (lab < 0 || lab >= classes)
      throw std::invalid_argument("train: label out of range");

  OptimizerState state = make_optimizer_state(net);
  History history;
  double best_val = -1.0;
  int stale_epochs = 0;

  for (int epoch = 0; epoch < tcfg.epochs; ++epoch) {
    std::vector<int> order =
        random_permutation(rows, derive_seed(tcfg.seed, epoch));

    double loss_sum = 0.0;
    int batches = 0;
    std::int64_t correct = 0;

    for (int start = 0; start < rows; start += tcfg.batch_size) {
      const int n = std::min(tcfg.batch_size, rows - start);
      std::span<const int> idx(order.data() + start, n);
      std::vector<double> z = encode_rows(net, features, idx, width);
      std::vector<int> batch_labels(n);
      for (int r = 0; r < n; ++r) batch_labels[r] = labels[idx[r]];

      ForwardRecord record;
      std::vector<double> out = forward(net, z, n, &record, tcfg.threads);

      double data_sum = 0.0;
      for (int r = 0; r < n; ++r) {
        std::span<const double> z_row(
            out.data() + static_cast<std::size_t>(r) * classes, classes);
        data_sum += data_loss(z_row, batch_labels[r], lcfg);
        correct += predict(z_row) == batch_labels[r];
      }
      loss_sum += data_sum / n + reg_loss(net, lcfg);
      ++batches;

      Gradients grads = backward(record, batch_labels, net, lcfg, tcfg.threads);
      adam_step(net, grads, state, tcfg);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.loss = loss_sum / batches;
    stats.train_acc = static_cast<double>(correct) / rows;
    if (val_rows > 0)
      stats.val_acc =
          evaluate_accuracy(net, val_features, val_rows, val_labels,
                            tcfg.threads);
    history.push_back(stats);

    if (callback && !callback(stats, net)) break;

    if (tcfg.patience > 0 && val_rows > 0) {
      if (stats.val_acc > best_val + 1e-12) {
        best_val = stats.val_acc;
        stale_epochs = 0;
      } else if (++stale_epochs >= tcfg.patience) {
        break;
      }
    }
  }
  return history;
}

void write_history_csv(const History& history, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "epoch,loss,train_acc,val_acc\n";
  char buf[160];
  for (const EpochStats& e : history) {
    if (std::isnan(e.val_acc)) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,\n", e.epoch, e.loss,
                    e.train_acc);
    } else {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", e.epoch, e.loss,
                    e.train_acc, e.val_acc);
    }
    out << buf;
  }
}

}  // namespace tsnn
