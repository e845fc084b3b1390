#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "tsnn/data.hpp"
#include "tsnn/io_util.hpp"
#include "tsnn/network.hpp"
#include "tsnn/rng.hpp"

using namespace tsnn;

namespace {

// A miniature file in the NSL-KDD layout: 41 attributes, attack, difficulty.
std::string kdd_row(const std::string& protocol, const std::string& service,
                    const std::string& flag, double duration,
                    const std::string& attack) {
  std::string row = std::to_string(duration) + "," + protocol + "," + service +
                    "," + flag;
  for (int i = 4; i < 41; ++i) row += "," + std::to_string(i % 3);
  return row + "," + attack + ",15";
}

void write_mini_kdd(const std::string& path) {
  std::ofstream out(path);
  out << kdd_row("tcp", "http", "SF", 0.0, "normal") << "\n";
  out << kdd_row("udp", "domain_u", "SF", 10.0, "neptune") << "\n";
  out << kdd_row("icmp", "ecr_i", "REJ", 5.0, "satan") << "\n";
  out << kdd_row("tcp", "ftp", "S0", 2.5, "guess_passwd") << "\n";
  out << kdd_row("tcp", "http", "SF", 1.0, "rootkit") << "\n";
}

}  // namespace

TEST_CASE("nsl-kdd parsing and label grouping") {
  write_mini_kdd("mini_kdd.csv");
  const RawTable t = load_nslkdd("mini_kdd.csv");
  CHECK(t.rows == 5);
  CHECK(t.columns.size() == 41);
  CHECK(t.labels == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(t.class_names ==
        std::vector<std::string>{"normal", "DoS", "Probe", "R2L", "U2R"});
  CHECK(t.columns[1].vocab == std::vector<std::string>{"tcp", "udp", "icmp"});
  std::remove("mini_kdd.csv");
}

TEST_CASE("nsl-kdd loader rejects bad rows with line numbers") {
  {
    std::ofstream out("bad_kdd.csv");
    out << kdd_row("tcp", "http", "SF", 0.0, "normal") << "\n";
    out << "1,2,3\n";
  }
  CHECK_THROWS_WITH_AS(static_cast<void>(load_nslkdd("bad_kdd.csv")),
                       doctest::Contains("bad_kdd.csv:2"), std::runtime_error);

  {
    std::ofstream out("bad_kdd.csv");
    out << kdd_row("tcp", "http", "SF", 0.0, "not_an_attack") << "\n";
  }
  CHECK_THROWS_WITH_AS(static_cast<void>(load_nslkdd("bad_kdd.csv")),
                       doctest::Contains("not_an_attack"), std::runtime_error);
  std::remove("bad_kdd.csv");
}

TEST_CASE("one-hot + min-max encoding, unseen categories, no leakage") {
  write_mini_kdd("mini_kdd.csv");
  const RawTable train = load_nslkdd("mini_kdd.csv");
  FeatureSpec spec = build_feature_spec(train, "nsl-kdd", "original", 0);
  const std::string before = spec.serialize();

  // 38 numeric + 3 + 4 + 3 one-hot slots for this miniature vocabulary.
  CHECK(spec.output_width() == 48);
  const Dataset ds = encode_with_spec(train, spec, 48);
  CHECK(ds.rows() == 5);
  for (double f : ds.features) {
    CHECK(f >= -1e-9);
    CHECK(f <= 1.0 + 1e-9);
  }
  // duration: min 0, max 10 -> row 0 encodes 0, row 1 encodes 1.
  CHECK(ds.features[0] == 0.0);
  CHECK(ds.features[static_cast<std::size_t>(ds.width) * 1] == 1.0);

  // Unseen service at "test time": all-zero block, manifest untouched.
  std::ofstream out("mini_kdd_test.csv");
  out << kdd_row("tcp", "brand_new_service", "SF", 3.0, "normal") << "\n";
  out.close();
  const RawTable test = load_nslkdd("mini_kdd_test.csv");
  const Dataset tds = encode_with_spec(test, spec, 48);
  // service block: columns [39+3, 39+3+3) in spec order (38 numerics first
  // is not the layout; columns interleave). Just assert the one-hot total.
  double onehot_sum = 0.0;
  for (int i = 0; i < tds.width; ++i) onehot_sum += tds.features[i];
  // protocol (1) + service (0, unseen) + flag (1) + numeric contributions.
  CHECK(spec.serialize() == before);
  CHECK(tds.rows() == 1);

  // Idempotence: encoding twice gives identical bytes.
  const Dataset again = encode_with_spec(train, spec, 48);
  CHECK(again.features == ds.features);

  // Width drift is a hard error.
  CHECK_THROWS_WITH_AS(static_cast<void>(encode_with_spec(train, spec, 122)),
                       doctest::Contains("drift"), std::invalid_argument);
  std::remove("mini_kdd.csv");
  std::remove("mini_kdd_test.csv");
}

TEST_CASE("gaussian receptive fields") {
  // One continuous column, x = 0.5 with centers {0, 1/2, 1}: peak at the
  // middle field, symmetric shoulders.
  RawTable t;
  RawColumn col;
  col.name = "x";
  col.kind = ColumnKind::kContinuous;
  col.numeric = {0.0, 0.5, 1.0};
  t.columns.push_back(col);
  t.labels = {0, 0, 0};
  t.class_names = {"a", "b"};
  t.rows = 3;

  FeatureSpec spec = build_feature_spec(t, "synthetic", "resampled", 3);
  CHECK(spec.output_width() == 3);
  const Dataset ds = encode_resampled(t, spec, 3);
  // Row with x = 0.5.
  const double* row = ds.features.data() + 3;
  CHECK(row[1] == 1.0);
  CHECK(row[0] == doctest::Approx(row[2]).epsilon(1e-15));
  CHECK(row[0] < 1.0);
  // x exactly at an outer center.
  CHECK(ds.features[0] == 1.0);

  // sigma = 1/(gamma*(m-1)) with gamma = 1.5 by default.
  const double sigma = 1.0 / (1.5 * 2.0);
  CHECK(row[0] == doctest::Approx(std::exp(-0.5 * 0.25 / (sigma * sigma))));

  CHECK_THROWS_AS(static_cast<void>(encode_resampled(t, spec, 5)),
                  std::invalid_argument);
}

TEST_CASE("manifest round trip") {
  write_mini_kdd("mini_kdd.csv");
  const RawTable train = load_nslkdd("mini_kdd.csv");
  const FeatureSpec spec = build_feature_spec(train, "nsl-kdd", "resampled", 6);
  const std::string text = spec.serialize();
  const FeatureSpec back = FeatureSpec::parse(text);
  CHECK(back.serialize() == text);
  CHECK(back.output_width() == spec.output_width());
  CHECK(back.grf_fields == 6);
  CHECK(back.class_names == spec.class_names);

  const Dataset a = encode_with_spec(train, spec);
  const Dataset b = encode_with_spec(train, back);
  CHECK(a.features == b.features);
  std::remove("mini_kdd.csv");
}

TEST_CASE("dataset container round trip and corruption detection") {
  Dataset ds;
  ds.width = 3;
  ds.features = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  ds.labels = {0, 1};
  ds.class_names = {"x", "y"};
  ds.manifest_text = "tsnn-manifest 1\n";
  ds.manifest_digest = fnv1a64(ds.manifest_text);
  save_dataset(ds, "ds_test.tsnnd");
  const Dataset back = load_dataset("ds_test.tsnnd");
  CHECK(back.features == ds.features);
  CHECK(back.labels == ds.labels);
  CHECK(back.class_names == ds.class_names);
  CHECK(back.manifest_text == ds.manifest_text);
  CHECK(back.manifest_digest == ds.manifest_digest);

  std::string bytes = read_file("ds_test.tsnnd");
  bytes[bytes.size() / 3] = static_cast<char>(bytes[bytes.size() / 3] ^ 1);
  write_file("ds_test.tsnnd", bytes);
  CHECK_THROWS_WITH_AS(static_cast<void>(load_dataset("ds_test.tsnnd")),
                       doctest::Contains("digest"), std::runtime_error);
  std::remove("ds_test.tsnnd");
}

TEST_CASE("stratified split and subsample are seeded and class-balanced") {
  Dataset ds;
  ds.width = 1;
  ds.class_names = {"a", "b"};
  for (int i = 0; i < 100; ++i) {
    ds.features.push_back(i / 100.0);
    ds.labels.push_back(i < 80 ? 0 : 1);
  }
  const auto [train, test] = stratified_split(ds, 0.2, 9);
  CHECK(train.rows() == 80);
  CHECK(test.rows() == 20);
  int test_b = 0;
  for (int lab : test.labels) test_b += lab == 1;
  CHECK(test_b == 4);  // 20% of the 20 class-b rows

  const auto [train2, test2] = stratified_split(ds, 0.2, 9);
  CHECK(train2.features == train.features);

  const Dataset sub = subsample(ds, 10, 4);
  CHECK(sub.rows() == 10);
  const Dataset sub2 = subsample(ds, 10, 4);
  CHECK(sub2.features == sub.features);
  const Dataset sub3 = subsample(ds, 10, 5);
  CHECK(sub3.features != sub.features);
}

TEST_CASE("awid loading: manifest selection, '?' handling, label totals") {
  // Miniature AWID-like file: 8 attributes + class label.
  {
    std::ofstream out("mini_awid.csv");
    out << "1.5,abc,3,0,x,7,0.5,9,normal\n";
    out << "2.5,def,?,1,y,8,0.25,9,flooding\n";
    out << "?,abc,4,0,x,9,0.75,9,injection\n";
    out << "4.5,ghi,5,1,z,10,1.0,9,impersonation\n";
    out << "5.5,abc,6,0,x,11,0.0,9,impersonation\n";
  }
  AwidManifest manifest = AwidManifest::parse(
      "0 time_delta continuous\n"
      "1 subtype categorical\n"
      "2 seq continuous\n"
      "3 flag_retry binary\n");
  const RawTable t = load_awid("mini_awid.csv", AwidVariant::kOriginal46,
                               &manifest);
  CHECK(t.rows == 5);
  CHECK(t.columns.size() == 4);
  CHECK(t.labels == std::vector<int>{0, 1, 2, 3, 3});
  CHECK(std::isnan(t.columns[0].numeric[2]));  // '?' -> missing
  CHECK(t.columns[2].numeric[1] != t.columns[2].numeric[1]);

  // Median imputation: seq column has {3,4,5,6} present, median 5.
  // Width 6: time_delta (1) + subtype one-hot (3) + seq (1) + flag (1).
  FeatureSpec spec = build_feature_spec(t, "awid", "original", 0);
  const Dataset ds = encode_with_spec(t, spec, 6);
  const double x = ds.features[1 * 6 + 4];  // row 1, seq slot
  CHECK(x == doctest::Approx((5.0 - 3.0) / 3.0));

  // Raw variant sniffs kinds: 8 attribute columns.
  const RawTable raw = load_awid("mini_awid.csv", AwidVariant::kRaw155);
  CHECK(raw.columns.size() == 8);
  CHECK(raw.columns[1].kind == ColumnKind::kCategorical);
  CHECK(raw.columns[0].kind == ColumnKind::kContinuous);

  // Manifest index beyond the record width is reported per column.
  AwidManifest wide = AwidManifest::parse("12 nope continuous\n");
  CHECK_THROWS_WITH_AS(
      static_cast<void>(load_awid("mini_awid.csv", AwidVariant::kOriginal46, &wide)),
      doctest::Contains("nope"), std::runtime_error);

  // Unknown class labels are rejected.
  {
    std::ofstream out("mini_awid.csv");
    out << "1.5,abc,3,0,x,7,0.5,9,intrusion\n";
  }
  CHECK_THROWS_WITH_AS(
      static_cast<void>(load_awid("mini_awid.csv", AwidVariant::kOriginal46, &manifest)),
      doctest::Contains("intrusion"), std::runtime_error);
  std::remove("mini_awid.csv");
}

TEST_CASE("missing categorical values get a dedicated category") {
  {
    std::ofstream out("mini_awid.csv");
    out << "1,?,normal\n";
    out << "2,abc,flooding\n";
  }
  AwidManifest manifest = AwidManifest::parse(
      "0 c0 continuous\n"
      "1 c1 categorical\n");
  const RawTable t =
      load_awid("mini_awid.csv", AwidVariant::kOriginal46, &manifest);
  const FeatureSpec spec = build_feature_spec(t, "awid", "original", 0);
  // vocab must contain both "abc" and the reserved "?".
  const auto& vocab = spec.columns[1].vocab;
  CHECK(vocab == std::vector<std::string>{"?", "abc"});
  const Dataset ds = encode_with_spec(t, spec, 3);
  CHECK(ds.features[1] == 1.0);  // row 0 hits the "?" slot
  CHECK(ds.features[2] == 0.0);
  std::remove("mini_awid.csv");
}

TEST_CASE("loaders reject garbage with exceptions, never crash") {
  Rng rng(0xf022);
  for (int trial = 0; trial < 60; ++trial) {
    std::string junk;
    const std::size_t len = rng.next_below(4000);
    for (std::size_t i = 0; i < len; ++i)
      junk.push_back(static_cast<char>(rng.next_below(256)));
    // Prefixing real magic bytes exercises the deeper parse paths too.
    if (trial % 3 == 1) junk = "TSNNDSET" + junk;
    if (trial % 3 == 2) junk = "TSNNCKPT" + junk;
    write_file("garbage.bin", junk);
    CHECK_THROWS_AS(static_cast<void>(load_dataset("garbage.bin")),
                    std::runtime_error);
    CHECK_THROWS_AS(static_cast<void>(load_checkpoint("garbage.bin")),
                    std::runtime_error);
    CHECK_THROWS(static_cast<void>(load_nslkdd("garbage.bin")));
    CHECK_THROWS(static_cast<void>(
        load_awid("garbage.bin", AwidVariant::kRaw155)));
    CHECK_THROWS(static_cast<void>(FeatureSpec::parse(junk)));
  }
  std::remove("garbage.bin");
}

TEST_CASE("default awid manifest shape") {
  const AwidManifest& m = default_awid46_manifest();
  CHECK(m.entries.size() == 46);
  int continuous = 0, binary = 0;
  for (const auto& e : m.entries) {
    continuous += e.kind == ColumnKind::kContinuous;
    binary += e.kind == ColumnKind::kBinary;
  }
  CHECK(continuous == 40);
  CHECK(binary == 6);
  // 40 * 5 + 6 = 206: the resampled width contract with m = 5.
}
