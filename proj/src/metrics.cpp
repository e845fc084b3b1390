#include "tsnn/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace tsnn {

std::int64_t ConfusionMatrix::row_total(int truth) const {
  std::int64_t s = 0;
  for (int p = 0; p < k(); ++p) s += at(truth, p);
  return s;
}

std::int64_t ConfusionMatrix::col_total(int pred) const {
  std::int64_t s = 0;
  for (int t = 0; t < k(); ++t) s += at(t, pred);
  return s;
}

std::int64_t ConfusionMatrix::grand_total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::int64_t ConfusionMatrix::diagonal_total() const {
  std::int64_t s = 0;
  for (int i = 0; i < k(); ++i) s += at(i, i);
  return s;
}

ConfusionMatrix confusion(std::span<const int> preds,
                          std::span<const int> labels,
                          std::vector<std::string> class_names) {
  if (preds.size() != labels.size())
    throw std::invalid_argument("confusion: prediction/label count mismatch");
  ConfusionMatrix cm;
  cm.class_names = std::move(class_names);
  const int k = cm.k();
  if (k < 1) throw std::invalid_argument("confusion: no classes");
  cm.counts.assign(static_cast<std::size_t>(k) * k, 0);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= k || preds[i] < 0 || preds[i] >= k)
      throw std::invalid_argument("confusion: class index out of range");
    ++cm.at(labels[i], preds[i]);
  }
  return cm;
}

ConfusionMatrix confusion_from_marginals(std::span<const std::int64_t> estimated,
                                         std::span<const std::int64_t> correct,
                                         std::span<const std::int64_t> total,
                                         std::vector<std::string> class_names) {
  const int k = static_cast<int>(class_names.size());
  if (estimated.size() != static_cast<std::size_t>(k) ||
      correct.size() != static_cast<std::size_t>(k) ||
      total.size() != static_cast<std::size_t>(k))
    throw std::invalid_argument("confusion_from_marginals: length mismatch");

  std::vector<std::int64_t> row_rest(k), col_rest(k);
  std::int64_t rows_sum = 0, cols_sum = 0;
  for (int i = 0; i < k; ++i) {
    if (correct[i] > total[i] || correct[i] > estimated[i] || correct[i] < 0)
      throw std::invalid_argument("confusion_from_marginals: inconsistent counts");
    row_rest[i] = total[i] - correct[i];      // misclassified members of class i
    col_rest[i] = estimated[i] - correct[i];  // wrong predictions of class i
    rows_sum += row_rest[i];
    cols_sum += col_rest[i];
  }
  if (rows_sum != cols_sum)
    throw std::invalid_argument(
        "confusion_from_marginals: estimated and total sums differ");

  ConfusionMatrix cm;
  cm.class_names = std::move(class_names);
  cm.counts.assign(static_cast<std::size_t>(k) * k, 0);
  for (int i = 0; i < k; ++i) cm.at(i, i) = correct[i];

  // Transportation problem with a forbidden diagonal, solved by a small
  // Edmonds-Karp max-flow: source -> rows (row_rest), rows -> cols (r != c),
  // cols -> sink (col_rest). Greedy fills can strand feasible instances.
  const int source = 2 * k, sink = 2 * k + 1, nodes = 2 * k + 2;
  std::vector<std::vector<std::int64_t>> cap(
      nodes, std::vector<std::int64_t>(nodes, 0));
  for (int i = 0; i < k; ++i) {
    cap[source][i] = row_rest[i];
    cap[k + i][sink] = col_rest[i];
    for (int j = 0; j < k; ++j)
      if (i != j) cap[i][k + j] = rows_sum;  // effectively unbounded
  }
  std::int64_t flow = 0;
  while (true) {
    std::vector<int> parent(nodes, -1);
    std::vector<int> queue{source};
    parent[source] = source;
    for (std::size_t qi = 0; qi < queue.size() && parent[sink] < 0; ++qi) {
      const int u = queue[qi];
      for (int v = 0; v < nodes; ++v)
        if (parent[v] < 0 && cap[u][v] > 0) {
          parent[v] = u;
          queue.push_back(v);
        }
    }
    if (parent[sink] < 0) break;
    std::int64_t push = rows_sum;
    for (int v = sink; v != source; v = parent[v])
      push = std::min(push, cap[parent[v]][v]);
    for (int v = sink; v != source; v = parent[v]) {
      cap[parent[v]][v] -= push;
      cap[v][parent[v]] += push;
    }
    flow += push;
  }
  if (flow != rows_sum)
    throw std::invalid_argument(
        "confusion_from_marginals: marginals admit no confusion matrix");
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j) cm.at(i, j) = cap[k + j][i];  // residual = shipped flow
  return cm;
}

ClassReport report(const ConfusionMatrix& cm) {
  const int k = cm.k();
  if (k < 1) throw std::invalid_argument("report: empty matrix");
  ClassReport rep;
  rep.total = cm.grand_total();
  if (rep.total == 0) throw std::invalid_argument("report: zero grand total");

  for (int i = 0; i < k; ++i) {
    ClassMetrics m;
    m.name = cm.class_names[i];
    const std::int64_t tp = cm.at(i, i);
    const std::int64_t fn = cm.row_total(i) - tp;
    const std::int64_t fp = cm.col_total(i) - tp;
    const std::int64_t tn = rep.total - tp - fn - fp;
    m.support = cm.row_total(i);
    m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    m.recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    m.accuracy = static_cast<double>(tp + tn) / rep.total;
    rep.per_class.push_back(m);
  }

  rep.accuracy = static_cast<double>(cm.diagonal_total()) / rep.total;
  for (const ClassMetrics& m : rep.per_class) {
    const double wgt = static_cast<double>(m.support) / rep.total;
    rep.weighted_f1 += wgt * m.f1;
    rep.weighted_precision += wgt * m.precision;
    rep.weighted_recall += wgt * m.recall;
  }
  return rep;
}

std::string report_text_table(const ClassReport& rep) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-16s %10s %10s %10s %10s %10s\n", "Class",
                "Accuracy", "F1", "Precision", "Recall", "Total");
  out += buf;
  for (const ClassMetrics& m : rep.per_class) {
    std::snprintf(buf, sizeof buf, "%-16s %10.6f %10.6f %10.6f %10.6f %10lld\n",
                  m.name.c_str(), m.accuracy, m.f1, m.precision, m.recall,
                  static_cast<long long>(m.support));
    out += buf;
  }
  std::snprintf(buf, sizeof buf,
                "\nAccuracy = %.4f, F1 = %.4f, Precision = %.4f, Recall = %.4f "
                "(%lld records)\n",
                rep.accuracy, rep.weighted_f1, rep.weighted_precision,
                rep.weighted_recall, static_cast<long long>(rep.total));
  out += buf;
  return out;
}

void write_report_csv(const ClassReport& rep, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "class,accuracy,f1,precision,recall,support\n";
  char buf[256];
  for (const ClassMetrics& m : rep.per_class) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.6f,%lld\n",
                  m.name.c_str(), m.accuracy, m.f1, m.precision, m.recall,
                  static_cast<long long>(m.support));
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "overall,%.6f,%.6f,%.6f,%.6f,%lld\n",
                rep.accuracy, rep.weighted_f1, rep.weighted_precision,
                rep.weighted_recall, static_cast<long long>(rep.total));
  out << buf;
}

void write_confusion_csv(const ConfusionMatrix& cm, const std::string& path,
                         bool row_percent) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "true\\pred";
  for (const std::string& n : cm.class_names) out << "," << n;
  out << "\n";
  char buf[64];
  for (int t = 0; t < cm.k(); ++t) {
    out << cm.class_names[t];
    const std::int64_t row = cm.row_total(t);
    for (int p = 0; p < cm.k(); ++p) {
      if (row_percent) {
        const double pct = row > 0 ? 100.0 * cm.at(t, p) / row : 0.0;
        std::snprintf(buf, sizeof buf, ",%.4f", pct);
        out << buf;
      } else {
        out << "," << cm.at(t, p);
      }
    }
    out << "\n";
  }
}

}  // namespace tsnn
