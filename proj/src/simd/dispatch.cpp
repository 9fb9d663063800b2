#include <cstdlib>
#include <cstring>

#include "gridplan/simd/kernels.hpp"

namespace gridplan::simd {
namespace {

const KernelTable* pick_initial() {
  const char* env = std::getenv("GRIDPLAN_SIMD");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_table();
    if (std::strcmp(env, "avx2") == 0 && avx2_table() != nullptr) return avx2_table();
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

const KernelTable*& active_slot() {
  static const KernelTable* slot = pick_initial();
  return slot;
}

}  // namespace

const KernelTable& active() { return *active_slot(); }

bool select(const char* isa) {
  if (std::strcmp(isa, "scalar") == 0) {
    active_slot() = &scalar_table();
    return true;
  }
  if (std::strcmp(isa, "avx2") == 0) {
    if (const KernelTable* t = avx2_table()) {
      active_slot() = t;
      return true;
    }
    return false;
  }
  return false;
}

}  // namespace gridplan::simd
