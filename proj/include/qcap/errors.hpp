#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qcap {

/// Raised when a state or channel would exceed the configured total dimension.
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default cap on any single total dimension (input, output or environment).
inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 13;

/// Current cap. Initialized from the QCAP_DIM_CAP environment variable when set.
std::size_t dimension_cap();
void set_dimension_cap(std::size_t cap);

/// Throws DimensionError if `dim` exceeds the cap.
void check_dimension(std::size_t dim, std::string_view what);

}  // namespace qcap
