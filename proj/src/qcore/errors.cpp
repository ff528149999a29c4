#include "qcap/errors.hpp"

#include <atomic>
#include <cstdlib>

namespace qcap {
namespace {

std::size_t initial_cap() {
  if (const char* env = std::getenv("QCAP_DIM_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultDimensionCap;
}

std::atomic<std::size_t>& cap_storage() {
  static std::atomic<std::size_t> cap{initial_cap()};
  return cap;
}

}  // namespace

std::size_t dimension_cap() { return cap_storage().load(std::memory_order_relaxed); }

void set_dimension_cap(std::size_t cap) {
  if (cap == 0) throw std::invalid_argument("dimension cap must be positive");
  cap_storage().store(cap, std::memory_order_relaxed);
}

void check_dimension(std::size_t dim, std::string_view what) {
  const std::size_t cap = dimension_cap();
  if (dim > cap) {
    throw DimensionError(std::string(what) + " dimension " + std::to_string(dim) +
                         " exceeds cap " + std::to_string(cap));
  }
}

}  // namespace qcap
