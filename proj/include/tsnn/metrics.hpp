#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tsnn {

struct ConfusionMatrix {
  std::vector<std::string> class_names;
  std::vector<std::int64_t> counts;  // row-major, rows = true, cols = predicted

  int k() const { return static_cast<int>(class_names.size()); }
  std::int64_t& at(int truth, int pred) {
    return counts[static_cast<std::size_t>(truth) * k() + pred];
  }
  std::int64_t at(int truth, int pred) const {
    return counts[static_cast<std::size_t>(truth) * k() + pred];
  }
  std::int64_t row_total(int truth) const;   // class support
  std::int64_t col_total(int pred) const;    // times predicted
  std::int64_t grand_total() const;
  std::int64_t diagonal_total() const;
};

ConfusionMatrix confusion(std::span<const int> preds,
                          std::span<const int> labels,
                          std::vector<std::string> class_names);

// Rebuilds a confusion matrix from per-class (estimated, correct, total)
// marginals: correct counts on the diagonal, the residual mass distributed by
// a northwest-corner completion. Every metric in ClassReport depends only on
// the diagonal and the marginals, so any consistent completion gives the same
// report. Requires sum(estimated) == sum(total).
ConfusionMatrix confusion_from_marginals(std::span<const std::int64_t> estimated,
                                         std::span<const std::int64_t> correct,
                                         std::span<const std::int64_t> total,
                                         std::vector<std::string> class_names);

struct ClassMetrics {
  std::string name;
  double accuracy = 0.0;  // one-vs-rest: (TP + TN) / grand_total
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::int64_t support = 0;
};

struct ClassReport {
  std::vector<ClassMetrics> per_class;
  double accuracy = 0.0;  // overall
  double weighted_f1 = 0.0;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  std::int64_t total = 0;
};

// Precision = TP/(TP+FP), recall = TP/(TP+FN), F1 their harmonic mean;
// undefined ratios are 0 by convention. Aggregates are support-weighted;
// weighted recall equals overall accuracy by construction.
ClassReport report(const ConfusionMatrix& cm);

std::string report_text_table(const ClassReport& rep);
void write_report_csv(const ClassReport& rep, const std::string& path);
void write_confusion_csv(const ConfusionMatrix& cm, const std::string& path,
                         bool row_percent = false);

}  // namespace tsnn
