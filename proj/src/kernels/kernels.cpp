#include "tsnn/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace tsnn::kernels {

#if defined(__x86_64__) || defined(_M_X64)
extern const Backend kAvx2Backend;
namespace {
bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
}  // namespace
#endif
#if defined(__aarch64__)
extern const Backend kNeonBackend;
#endif

namespace {

const Backend* find(const std::string& name) {
  if (name == "scalar") return &scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
  if (name == "avx2" && avx2_supported()) return &kAvx2Backend;
#endif
#if defined(__aarch64__)
  if (name == "neon") return &kNeonBackend;
#endif
  if (name == "auto" || name.empty()) {
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_supported()) return &kAvx2Backend;
#endif
#if defined(__aarch64__)
    return &kNeonBackend;
#endif
    return &scalar_backend();
  }
  return nullptr;
}

const Backend* initial_backend() {
  const char* env = std::getenv("TSNN_KERNELS");
  if (const Backend* b = find(env ? env : "auto")) return b;
  // Unknown or unsupported request in the environment: fall back quietly.
  return find("auto");
}

std::atomic<const Backend*> g_active{nullptr};

}  // namespace

const Backend& active() {
  const Backend* b = g_active.load(std::memory_order_acquire);
  if (!b) {
    b = initial_backend();
    g_active.store(b, std::memory_order_release);
  }
  return *b;
}

bool select(const std::string& name) {
  const Backend* b = find(name);
  if (!b) return false;
  g_active.store(b, std::memory_order_release);
  return true;
}

std::vector<std::string> available() {
  std::vector<std::string> names{"scalar"};
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2_supported()) names.push_back("avx2");
#endif
#if defined(__aarch64__)
  names.push_back("neon");
#endif
  return names;
}

}  // namespace tsnn::kernels
