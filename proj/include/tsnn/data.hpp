#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsnn/io_util.hpp"

namespace tsnn {

enum class ColumnKind { kContinuous, kCategorical, kBinary };

const char* column_kind_name(ColumnKind k);
ColumnKind column_kind_from_name(const std::string& name);

// Parsed input table, column-major. Continuous/binary cells live in
// `numeric` (NaN = missing '?'); categorical cells are codes into the
// column-local `vocab` (-1 = missing).
struct RawColumn {
  std::string name;
  ColumnKind kind = ColumnKind::kContinuous;
  std::vector<double> numeric;
  std::vector<int> code;
  std::vector<std::string> vocab;
};

struct RawTable {
  std::vector<RawColumn> columns;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  std::size_t rows = 0;
};

// Per-column transform learned from a training split.
struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kContinuous;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;              // imputation for missing numerics
  std::vector<std::string> vocab;   // sorted categories; may include "?"
};

// The encoding manifest: everything needed to apply the identical transform
// to unseen records. Serializes to a human-readable text block.
struct FeatureSpec {
  std::string dataset;
  std::string variant;
  int grf_fields = 0;      // receptive fields per continuous column; 0 = off
  double grf_gamma = 1.5;  // sigma = 1 / (gamma * (m - 1))
  std::vector<ColumnSpec> columns;
  std::vector<std::string> class_names;

  int output_width() const;
  std::string serialize() const;
  static FeatureSpec parse(const std::string& text);
  std::uint64_t digest() const { return fnv1a64(serialize()); }
};

// Learn min/max/median and categorical vocabularies from a training table.
// A "?" category is reserved only for columns whose training split actually
// contains missing values.
FeatureSpec build_feature_spec(const RawTable& train, std::string dataset,
                               std::string variant, int grf_fields,
                               double grf_gamma = 1.5);

struct Dataset {
  std::vector<double> features;  // rows x width, all in [0, 1]
  std::vector<int> labels;
  std::vector<std::string> class_names;
  int width = 0;
  std::string manifest_text;
  std::uint64_t manifest_digest = 0;

  int rows() const {
    return width == 0 ? 0 : static_cast<int>(features.size()) / width;
  }
};

// Applies a learned manifest: min-max scaling for continuous/binary columns
// (Gaussian receptive fields over continuous ones when grf_fields > 0),
// one-hot for categorical columns with unseen categories mapping to an
// all-zero block. Never mutates the manifest. A non-zero expected_width that
// does not match the manifest's output width is a hard error (vocabulary
// drift).
Dataset encode_with_spec(const RawTable& table, const FeatureSpec& spec,
                         int expected_width = 0);

// Encoded-dataset container (byte layout in docs/formats.md).
void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

// Seeded stratified split; second element holds ~test_fraction of each class.
std::pair<Dataset, Dataset> stratified_split(const Dataset& ds,
                                             double test_fraction,
                                             std::uint64_t seed);

// Seeded subsample of n rows (n >= rows returns a shuffled copy).
Dataset subsample(const Dataset& ds, int n, std::uint64_t seed);

// ---- NSL-KDD ----------------------------------------------------------

// Comma-separated NSL-KDD records: 41 attributes, an attack name, and an
// optional difficulty column. Attack names map onto the five categories
// (normal, DoS, Probe, R2L, U2R) via the bundled map; unknown names and
// malformed rows are rejected with their line number.
RawTable load_nslkdd(const std::string& path);

// One-hot protocol_type/service/flag + min-max scaling; hard error unless
// the expanded width is exactly 122.
Dataset encode_original_kdd(const RawTable& records, const FeatureSpec& spec);

// Gaussian-receptive-field expansion of the continuous columns (categorical
// one-hot blocks pass through); hard error unless the width matches
// expected_width (312 for NSL-KDD, 206 for AWID).
Dataset encode_resampled(const RawTable& records, const FeatureSpec& spec,
                         int expected_width);

// ---- AWID --------------------------------------------------------------

// Editable feature-selection manifest: one "index name kind" line per
// retained attribute of the raw AWID layout.
struct AwidManifest {
  struct Entry {
    int index = 0;
    std::string name;
    ColumnKind kind = ColumnKind::kContinuous;
  };
  std::vector<Entry> entries;

  static AwidManifest parse(const std::string& text);
  static AwidManifest load(const std::string& path);
  std::string serialize() const;
};

// The default 46-attribute selection shipped with the repo.
const AwidManifest& default_awid46_manifest();

enum class AwidVariant { kOriginal46, kRaw155 };

// Comma-separated AWID records, class label in the last column, 4-way labels
// (normal, flooding, injection, impersonation). '?' cells become missing
// values. kOriginal46 retains the manifest's attributes (the bundled default
// when none is given); kRaw155 keeps every attribute as continuous-or-
// categorical by sniffing the first rows.
RawTable load_awid(const std::string& path, AwidVariant variant,
                   const AwidManifest* manifest = nullptr);

}  // namespace tsnn
