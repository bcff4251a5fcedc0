#include <cstdlib>
#include <string_view>

#include "irlteach/kernels.hpp"

namespace irlteach::kernels {

const KernelTable& active() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* force = std::getenv("IRLTEACH_SIMD");
    if (force != nullptr && std::string_view(force) == "scalar") return scalar_table();
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return chosen;
}

}  // namespace irlteach::kernels
