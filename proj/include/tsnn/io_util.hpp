#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>

namespace tsnn {

static_assert(std::endian::native == std::endian::little,
              "binary file formats assume a little-endian host");

inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t seed = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  return fnv1a64(s.data(), s.size());
}

// Append/consume little-endian scalars on a byte buffer.
struct ByteWriter {
  std::string buf;
  template <typename T>
  void put(T v) {
    char tmp[sizeof(T)];
    std::memcpy(tmp, &v, sizeof(T));
    buf.append(tmp, sizeof(T));
  }
  void put_bytes(const void* p, std::size_t n) {
    buf.append(static_cast<const char*>(p), n);
  }
  void put_string(const std::string& s) {
    put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    buf.append(s);
  }
};

struct ByteReader {
  const std::string& buf;
  std::size_t pos = 0;
  explicit ByteReader(const std::string& b) : buf(b) {}
  template <typename T>
  T get() {
    if (pos + sizeof(T) > buf.size())
      throw std::runtime_error("truncated file");
    T v;
    std::memcpy(&v, buf.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
  }
  void get_bytes(void* p, std::size_t n) {
    if (pos + n > buf.size()) throw std::runtime_error("truncated file");
    std::memcpy(p, buf.data() + pos, n);
    pos += n;
  }
  std::string get_string() {
    const auto n = get<std::uint32_t>();
    if (pos + n > buf.size()) throw std::runtime_error("truncated file");
    std::string s(buf, pos, n);
    pos += n;
    return s;
  }
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace tsnn
