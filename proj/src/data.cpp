#include "tsnn/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "tsnn/rng.hpp"

namespace tsnn {

const char* column_kind_name(ColumnKind k) {
  switch (k) {
    case ColumnKind::kContinuous: return "continuous";
    case ColumnKind::kCategorical: return "categorical";
    case ColumnKind::kBinary: return "binary";
  }
  return "?";
}

ColumnKind column_kind_from_name(const std::string& name) {
  if (name == "continuous") return ColumnKind::kContinuous;
  if (name == "categorical") return ColumnKind::kCategorical;
  if (name == "binary") return ColumnKind::kBinary;
  throw std::invalid_argument("unknown column kind: " + name);
}

int FeatureSpec::output_width() const {
  int width = 0;
  for (const ColumnSpec& c : columns) {
    switch (c.kind) {
      case ColumnKind::kContinuous:
        width += grf_fields > 0 ? grf_fields : 1;
        break;
      case ColumnKind::kBinary: width += 1; break;
      case ColumnKind::kCategorical:
        width += static_cast<int>(c.vocab.size());
        break;
    }
  }
  return width;
}

namespace {

std::string join(const std::vector<std::string>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string FeatureSpec::serialize() const {
  std::string out = "tsnn-manifest 1\n";
  out += "dataset " + dataset + "\n";
  out += "variant " + variant + "\n";
  out += "grf_fields " + std::to_string(grf_fields) + "\n";
  out += "grf_gamma " + fmt_double(grf_gamma) + "\n";
  out += "classes " + join(class_names, ',') + "\n";
  for (const ColumnSpec& c : columns) {
    out += "column " + c.name + " " + column_kind_name(c.kind);
    if (c.kind == ColumnKind::kCategorical) {
      out += " vocab " + join(c.vocab, ',');
    } else {
      out += " min " + fmt_double(c.min) + " max " + fmt_double(c.max) +
             " median " + fmt_double(c.median);
    }
    out += "\n";
  }
  return out;
}

FeatureSpec FeatureSpec::parse(const std::string& text) {
  FeatureSpec spec;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "tsnn-manifest 1")
    throw std::invalid_argument("manifest: bad header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "dataset") ls >> spec.dataset;
    else if (tag == "variant") ls >> spec.variant;
    else if (tag == "grf_fields") ls >> spec.grf_fields;
    else if (tag == "grf_gamma") ls >> spec.grf_gamma;
    else if (tag == "classes") {
      std::string rest;
      ls >> rest;
      spec.class_names = split(rest, ',');
    } else if (tag == "column") {
      ColumnSpec c;
      std::string kind;
      ls >> c.name >> kind;
      c.kind = column_kind_from_name(kind);
      std::string key;
      while (ls >> key) {
        if (key == "vocab") {
          std::string rest;
          ls >> rest;
          c.vocab = split(rest, ',');
        } else if (key == "min") ls >> c.min;
        else if (key == "max") ls >> c.max;
        else if (key == "median") ls >> c.median;
        else throw std::invalid_argument("manifest: unknown field " + key);
      }
      spec.columns.push_back(std::move(c));
    } else {
      throw std::invalid_argument("manifest: unknown line tag " + tag);
    }
  }
  if (spec.columns.empty()) throw std::invalid_argument("manifest: no columns");
  return spec;
}

FeatureSpec build_feature_spec(const RawTable& train, std::string dataset,
                               std::string variant, int grf_fields,
                               double grf_gamma) {
  if (train.rows == 0) throw std::invalid_argument("build_feature_spec: empty table");
  if (grf_fields == 1 || grf_fields < 0)
    throw std::invalid_argument("build_feature_spec: grf_fields must be 0 or >= 2");
  FeatureSpec spec;
  spec.dataset = std::move(dataset);
  spec.variant = std::move(variant);
  spec.grf_fields = grf_fields;
  spec.grf_gamma = grf_gamma;
  spec.class_names = train.class_names;

  for (const RawColumn& col : train.columns) {
    ColumnSpec c;
    c.name = col.name;
    c.kind = col.kind;
    if (col.kind == ColumnKind::kCategorical) {
      bool missing = false;
      std::vector<std::string> vocab;
      for (std::size_t r = 0; r < train.rows; ++r) {
        if (col.code[r] < 0) missing = true;
      }
      vocab = col.vocab;
      std::sort(vocab.begin(), vocab.end());
      vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
      if (missing &&
          !std::binary_search(vocab.begin(), vocab.end(), std::string("?"))) {
        vocab.push_back("?");
        std::sort(vocab.begin(), vocab.end());
      }
      c.vocab = std::move(vocab);
      if (c.vocab.empty())
        throw std::invalid_argument("build_feature_spec: empty vocabulary for " +
                                    c.name);
    } else {
      std::vector<double> present;
      present.reserve(train.rows);
      for (double v : col.numeric)
        if (!std::isnan(v)) present.push_back(v);
      if (present.empty()) {
        c.min = c.max = c.median = 0.0;
      } else {
        c.min = *std::min_element(present.begin(), present.end());
        c.max = *std::max_element(present.begin(), present.end());
        const std::size_t mid = present.size() / 2;
        std::nth_element(present.begin(), present.begin() + mid, present.end());
        c.median = present[mid];
      }
    }
    spec.columns.push_back(std::move(c));
  }
  return spec;
}

Dataset encode_with_spec(const RawTable& table, const FeatureSpec& spec,
                         int expected_width) {
  if (table.columns.size() != spec.columns.size())
    throw std::invalid_argument("encode: table/manifest column count mismatch");
  const int width = spec.output_width();
  if (expected_width > 0 && width != expected_width)
    throw std::invalid_argument(
        "encode: manifest produces width " + std::to_string(width) +
        ", expected " + std::to_string(expected_width) +
        " (vocabulary or manifest drift)");

  // Per categorical column: local vocab code -> spec one-hot slot (-1 =
  // unseen at train time, encodes as an all-zero block).
  std::vector<std::vector<int>> translate(table.columns.size());
  for (std::size_t ci = 0; ci < table.columns.size(); ++ci) {
    const RawColumn& col = table.columns[ci];
    const ColumnSpec& cs = spec.columns[ci];
    if (col.name != cs.name || col.kind != cs.kind)
      throw std::invalid_argument("encode: column '" + cs.name +
                                  "' does not match the manifest");
    if (col.kind != ColumnKind::kCategorical) continue;
    std::unordered_map<std::string, int> slot;
    for (std::size_t v = 0; v < cs.vocab.size(); ++v)
      slot[cs.vocab[v]] = static_cast<int>(v);
    translate[ci].resize(col.vocab.size());
    for (std::size_t v = 0; v < col.vocab.size(); ++v) {
      const auto it = slot.find(col.vocab[v]);
      translate[ci][v] = it == slot.end() ? -1 : it->second;
    }
  }

  const int m = spec.grf_fields;
  const double sigma = m > 1 ? 1.0 / (spec.grf_gamma * (m - 1)) : 0.0;

  Dataset ds;
  ds.width = width;
  ds.class_names = spec.class_names;
  ds.labels = table.labels;
  ds.features.assign(table.rows * static_cast<std::size_t>(width), 0.0);
  ds.manifest_text = spec.serialize();
  ds.manifest_digest = fnv1a64(ds.manifest_text);

  for (std::size_t r = 0; r < table.rows; ++r) {
    double* out = ds.features.data() + r * static_cast<std::size_t>(width);
    int pos = 0;
    for (std::size_t ci = 0; ci < table.columns.size(); ++ci) {
      const RawColumn& col = table.columns[ci];
      const ColumnSpec& cs = spec.columns[ci];
      if (cs.kind == ColumnKind::kCategorical) {
        const int block = static_cast<int>(cs.vocab.size());
        int code = col.code[r];
        if (code >= 0) code = translate[ci][code];
        if (code < 0 && col.code[r] < 0) {
          // missing cell: dedicated category when the train split had one
          const auto it =
              std::find(cs.vocab.begin(), cs.vocab.end(), std::string("?"));
          if (it != cs.vocab.end())
            code = static_cast<int>(it - cs.vocab.begin());
        }
        if (code >= 0) out[pos + code] = 1.0;
        pos += block;
      } else {
        double v = col.numeric[r];
        if (std::isnan(v)) v = cs.median;
        double x = cs.max > cs.min ? (v - cs.min) / (cs.max - cs.min) : 0.0;
        x = std::clamp(x, 0.0, 1.0);
        if (cs.kind == ColumnKind::kContinuous && m > 1) {
          for (int f = 0; f < m; ++f) {
            const double mu = static_cast<double>(f) / (m - 1);
            const double d = (x - mu) / sigma;
            out[pos + f] = std::exp(-0.5 * d * d);
          }
          pos += m;
        } else {
          out[pos++] = x;
        }
      }
    }
  }
  return ds;
}

Dataset encode_original_kdd(const RawTable& records, const FeatureSpec& spec) {
  if (spec.grf_fields != 0)
    throw std::invalid_argument(
        "encode_original_kdd: manifest has receptive fields enabled");
  return encode_with_spec(records, spec, 122);
}

Dataset encode_resampled(const RawTable& records, const FeatureSpec& spec,
                         int expected_width) {
  if (spec.grf_fields < 2)
    throw std::invalid_argument("encode_resampled: grf_fields must be >= 2");
  return encode_with_spec(records, spec, expected_width);
}

namespace {
constexpr char kDatasetMagic[8] = {'T', 'S', 'N', 'N', 'D', 'S', 'E', 'T'};
constexpr std::uint32_t kDatasetVersion = 1;
}  // namespace

void save_dataset(const Dataset& ds, const std::string& path) {
  ByteWriter wr;
  wr.put_bytes(kDatasetMagic, sizeof kDatasetMagic);
  wr.put<std::uint32_t>(kDatasetVersion);
  wr.put<std::uint64_t>(ds.manifest_digest);
  wr.put_string(ds.manifest_text);
  wr.put<std::uint64_t>(static_cast<std::uint64_t>(ds.rows()));
  wr.put<std::uint32_t>(static_cast<std::uint32_t>(ds.width));
  wr.put<std::uint32_t>(static_cast<std::uint32_t>(ds.class_names.size()));
  for (const std::string& n : ds.class_names) wr.put_string(n);
  wr.put_bytes(ds.labels.data(), ds.labels.size() * sizeof(int));
  wr.put_bytes(ds.features.data(), ds.features.size() * sizeof(double));
  wr.put<std::uint64_t>(fnv1a64(wr.buf));
  write_file(path, wr.buf);
}

Dataset load_dataset(const std::string& path) {
  const std::string buf = read_file(path);
  if (buf.size() < sizeof kDatasetMagic + 12)
    throw std::runtime_error("dataset file too small: " + path);
  if (std::memcmp(buf.data(), kDatasetMagic, sizeof kDatasetMagic) != 0)
    throw std::runtime_error("not a dataset container: " + path);
  ByteReader tail(buf);
  tail.pos = buf.size() - 8;
  if (tail.get<std::uint64_t>() != fnv1a64(buf.substr(0, buf.size() - 8)))
    throw std::runtime_error("dataset digest mismatch (corrupted): " + path);

  ByteReader rd(buf);
  rd.pos = sizeof kDatasetMagic;
  if (rd.get<std::uint32_t>() != kDatasetVersion)
    throw std::runtime_error("unsupported dataset version: " + path);
  Dataset ds;
  ds.manifest_digest = rd.get<std::uint64_t>();
  ds.manifest_text = rd.get_string();
  const auto rows = rd.get<std::uint64_t>();
  ds.width = static_cast<int>(rd.get<std::uint32_t>());
  const auto n_classes = rd.get<std::uint32_t>();
  ds.class_names.resize(n_classes);
  for (auto& n : ds.class_names) n = rd.get_string();
  ds.labels.resize(rows);
  rd.get_bytes(ds.labels.data(), ds.labels.size() * sizeof(int));
  ds.features.resize(rows * static_cast<std::size_t>(ds.width));
  rd.get_bytes(ds.features.data(), ds.features.size() * sizeof(double));
  return ds;
}

namespace {

Dataset take_rows(const Dataset& ds, const std::vector<int>& rows) {
  Dataset out;
  out.width = ds.width;
  out.class_names = ds.class_names;
  out.manifest_text = ds.manifest_text;
  out.manifest_digest = ds.manifest_digest;
  out.labels.reserve(rows.size());
  out.features.reserve(rows.size() * static_cast<std::size_t>(ds.width));
  for (int r : rows) {
    out.labels.push_back(ds.labels[r]);
    const double* src = ds.features.data() + static_cast<std::size_t>(r) * ds.width;
    out.features.insert(out.features.end(), src, src + ds.width);
  }
  return out;
}

}  // namespace

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds,
                                             double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("stratified_split: fraction must be in (0, 1)");
  const int k = static_cast<int>(ds.class_names.size());
  std::vector<std::vector<int>> by_class(k);
  for (int r = 0; r < ds.rows(); ++r) by_class[ds.labels[r]].push_back(r);

  std::vector<int> train_rows, test_rows;
  for (int c = 0; c < k; ++c) {
    auto& rows = by_class[c];
    Rng rng(derive_seed(seed, 1000 + c));
    rng.shuffle(rows);
    const auto n_test = static_cast<std::size_t>(test_fraction * rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      (i < n_test ? test_rows : train_rows).push_back(rows[i]);
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {take_rows(ds, train_rows), take_rows(ds, test_rows)};
}

Dataset subsample(const Dataset& ds, int n, std::uint64_t seed) {
  std::vector<int> order = random_permutation(ds.rows(), seed);
  if (n < ds.rows()) order.resize(n);
  std::sort(order.begin(), order.end());
  return take_rows(ds, order);
}

}  // namespace tsnn
