#include "iemo/simd/kernels.hpp"
#include "kernels_impl.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace iemo::simd {
namespace {

bool host_has_avx2() {
#if defined(IEMO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  const char* env = std::getenv("IEMO_SIMD");
  const std::string_view choice = env ? env : "auto";
  if (choice == "scalar") return &scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable* avx2_kernels() {
#if defined(IEMO_HAVE_AVX2)
  if (host_has_avx2()) return &detail::avx2_table();
#endif
  return nullptr;
}

const KernelTable& kernels() { return *active().load(std::memory_order_acquire); }

bool select(Isa isa) {
  const KernelTable* table = isa == Isa::scalar ? &scalar_kernels() : avx2_kernels();
  if (!table) return false;
  active().store(table, std::memory_order_release);
  return true;
}

}  // namespace iemo::simd
