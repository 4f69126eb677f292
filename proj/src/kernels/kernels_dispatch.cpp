#include <atomic>
#include <cstdlib>

#include "gridnav/kernels.hpp"

namespace gridnav::kernels {

namespace {

const Ops* lookup(std::string_view name) {
  if (name == "scalar") return &scalar();
#if defined(GRIDNAV_KERNELS_X86)
  if (name == "avx2" && avx2_supported()) return &avx2();
#endif
#if defined(GRIDNAV_KERNELS_NEON)
  if (name == "neon") return &neon();
#endif
  return nullptr;
}

const Ops* best_available() {
#if defined(GRIDNAV_KERNELS_X86)
  if (avx2_supported()) return &avx2();
#endif
#if defined(GRIDNAV_KERNELS_NEON)
  return &neon();
#endif
  return &scalar();
}

const Ops* resolve_default() {
  if (const char* env = std::getenv("GRIDNAV_KERNELS")) {
    const std::string_view name(env);
    if (name != "auto") {
      if (const Ops* ops = lookup(name)) return ops;
    }
  }
  return best_available();
}

std::atomic<const Ops*>& selection() {
  static std::atomic<const Ops*> current{resolve_default()};
  return current;
}

}  // namespace

const Ops& active() { return *selection().load(std::memory_order_relaxed); }

bool select(std::string_view name) {
  const Ops* ops = name == "auto" ? best_available() : lookup(name);
  if (ops == nullptr) return false;
  selection().store(ops, std::memory_order_relaxed);
  return true;
}

std::vector<const Ops*> available() {
  std::vector<const Ops*> out{&scalar()};
#if defined(GRIDNAV_KERNELS_X86)
  if (avx2_supported()) out.push_back(&avx2());
#endif
#if defined(GRIDNAV_KERNELS_NEON)
  out.push_back(&neon());
#endif
  return out;
}

}  // namespace gridnav::kernels
