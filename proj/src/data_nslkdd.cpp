#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "csv_util.hpp"
#include "tsnn/data.hpp"

namespace tsnn {
namespace {

constexpr int kAttributeCount = 41;

const char* const kColumnNames[kAttributeCount] = {
    "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes",
    "land", "wrong_fragment", "urgent", "hot", "num_failed_logins",
    "logged_in", "num_compromised", "root_shell", "su_attempted", "num_root",
    "num_file_creations", "num_shells", "num_access_files",
    "num_outbound_cmds", "is_host_login", "is_guest_login", "count",
    "srv_count", "serror_rate", "srv_serror_rate", "rerror_rate",
    "srv_rerror_rate", "same_srv_rate", "diff_srv_rate", "srv_diff_host_rate",
    "dst_host_count", "dst_host_srv_count", "dst_host_same_srv_rate",
    "dst_host_diff_srv_rate", "dst_host_same_src_port_rate",
    "dst_host_srv_diff_host_rate", "dst_host_serror_rate",
    "dst_host_srv_serror_rate", "dst_host_rerror_rate",
    "dst_host_srv_rerror_rate"};

bool is_categorical(int col) { return col == 1 || col == 2 || col == 3; }

// Attack name -> category. Covers the 22 KDDTrain+ attacks plus the extra
// test-only attacks of KDDTest+/KDDTest-21.
const std::unordered_map<std::string, int>& attack_category_map() {
  static const std::unordered_map<std::string, int> kMap = {
      {"normal", 0},
      // DoS
      {"back", 1}, {"land", 1}, {"neptune", 1}, {"pod", 1}, {"smurf", 1},
      {"teardrop", 1}, {"apache2", 1}, {"udpstorm", 1}, {"processtable", 1},
      {"worm", 1}, {"mailbomb", 1},
      // Probe
      {"ipsweep", 2}, {"nmap", 2}, {"portsweep", 2}, {"satan", 2},
      {"mscan", 2}, {"saint", 2},
      // R2L
      {"ftp_write", 3}, {"guess_passwd", 3}, {"imap", 3}, {"multihop", 3},
      {"phf", 3}, {"spy", 3}, {"warezclient", 3}, {"warezmaster", 3},
      {"xlock", 3}, {"xsnoop", 3}, {"snmpguess", 3}, {"snmpgetattack", 3},
      {"httptunnel", 3}, {"sendmail", 3}, {"named", 3},
      // U2R
      {"buffer_overflow", 4}, {"loadmodule", 4}, {"perl", 4}, {"rootkit", 4},
      {"sqlattack", 4}, {"xterm", 4}, {"ps", 4},
  };
  return kMap;
}

[[noreturn]] void row_error(const std::string& path, std::size_t lineno,
                            const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + what);
}

}  // namespace

RawTable load_nslkdd(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  RawTable table;
  table.class_names = {"normal", "DoS", "Probe", "R2L", "U2R"};
  table.columns.resize(kAttributeCount);
  std::vector<std::unordered_map<std::string, int>> interner(kAttributeCount);
  for (int c = 0; c < kAttributeCount; ++c) {
    table.columns[c].name = kColumnNames[c];
    table.columns[c].kind =
        is_categorical(c) ? ColumnKind::kCategorical : ColumnKind::kContinuous;
  }

  std::string line;
  std::vector<std::string_view> fields;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view row = strip_cr(line);
    if (row.empty()) continue;
    split_fields(row, fields);
    // 41 attributes + attack name [+ difficulty].
    if (fields.size() != kAttributeCount + 1 &&
        fields.size() != kAttributeCount + 2)
      row_error(path, lineno,
                "expected 42 or 43 comma-separated fields, got " +
                    std::to_string(fields.size()));

    for (int c = 0; c < kAttributeCount; ++c) {
      RawColumn& col = table.columns[c];
      if (is_categorical(c)) {
        const std::string value(fields[c]);
        auto [it, inserted] =
            interner[c].emplace(value, static_cast<int>(col.vocab.size()));
        if (inserted) col.vocab.push_back(value);
        col.code.push_back(it->second);
      } else {
        double v;
        if (!parse_double(fields[c], v))
          row_error(path, lineno,
                    std::string("malformed numeric field '") +
                        std::string(fields[c]) + "' in column " +
                        kColumnNames[c]);
        col.numeric.push_back(v);
      }
    }

    const std::string attack(fields[kAttributeCount]);
    const auto& map = attack_category_map();
    const auto it = map.find(attack);
    if (it == map.end())
      row_error(path, lineno, "unknown attack name '" + attack + "'");
    table.labels.push_back(it->second);
    ++table.rows;
  }
  if (table.rows == 0) throw std::runtime_error(path + ": no records");
  return table;
}

}  // namespace tsnn
