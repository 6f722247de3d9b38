#include <string>

#include "vixb/error.hpp"
#include "vixb/kernels.hpp"

namespace vixb::kernels {

#ifdef VIXB_HAVE_AVX2_KERNELS
const KernelSet& avx2_impl();

const KernelSet* avx2() {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_impl() : nullptr;
}
#else
const KernelSet* avx2() { return nullptr; }
#endif

const KernelSet& select(std::string_view name) {
  if (name == "auto") {
    if (const auto* k = avx2()) return *k;
    return scalar();
  }
  if (name == "scalar") return scalar();
  if (name == "avx2") {
    if (const auto* k = avx2()) return *k;
    throw InvalidInput("avx2 kernels are not available on this machine");
  }
  throw InvalidInput("unknown kernel set '" + std::string(name) + "'");
}

std::vector<std::string_view> available() {
  std::vector<std::string_view> names{"scalar"};
  if (avx2()) names.emplace_back("avx2");
  return names;
}

}  // namespace vixb::kernels
