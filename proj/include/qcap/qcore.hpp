#pragma once

// Dense linear algebra over labeled multipartite systems.
//
// Matrices are stored row-major. Every operator here is a value type; all
// operations are pure functions of their arguments.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qcap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-9;
inline constexpr double kLog2E = 1.4426950408889634074;

/// Ordered subsystem dimensions with optional unique labels.
class SystemLayout {
 public:
  SystemLayout() = default;
  explicit SystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels = {});

  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return dims_.size(); }
  std::size_t dim(std::size_t i) const { return dims_.at(i); }
  std::size_t total() const { return total_; }

  std::optional<std::size_t> index_of(std::string_view label) const;

  /// Subsystems of `this` followed by those of `other`. Labels survive only if both sides carry them.
  SystemLayout concat(const SystemLayout& other) const;
  /// Subsystems at the given indices, in the given order.
  SystemLayout select(std::span<const std::size_t> indices) const;

  bool operator==(const SystemLayout& other) const { return dims_ == other.dims_; }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::string> labels_;
  std::size_t total_ = 1;
};

/// Positive unit-trace operator on a SystemLayout.
class DensityOperator {
 public:
  /// Validates Hermiticity, unit trace and positivity; throws std::invalid_argument.
  DensityOperator(SystemLayout layout, ComplexMatrix matrix);

  /// Skips validation. For results of operations that preserve validity by construction;
  /// the matrix is symmetrized to remove rounding asymmetry.
  static DensityOperator assume_valid(SystemLayout layout, ComplexMatrix matrix);

  static DensityOperator maximally_mixed(SystemLayout layout);
  /// |i0 i1 ...><i0 i1 ...| with one basis index per subsystem.
  static DensityOperator basis_state(SystemLayout layout, std::span<const std::size_t> indices);

  const SystemLayout& layout() const { return layout_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return layout_.total(); }

 private:
  DensityOperator(SystemLayout layout, ComplexMatrix matrix, bool validate);

  SystemLayout layout_;
  ComplexMatrix matrix_;
};

/// Unit vector on a SystemLayout.
class PureState {
 public:
  PureState(SystemLayout layout, ComplexVector amplitudes);

  const SystemLayout& layout() const { return layout_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  DensityOperator density() const;

 private:
  SystemLayout layout_;
  ComplexVector amplitudes_;
};

struct EigenDecomposition {
  RealVector values;      // nondecreasing
  ComplexMatrix vectors;  // columns are eigenvectors
  double residual = 0;    // max-norm of V diag(values) V^dagger - M
};

bool is_hermitian(const ComplexMatrix& m, double tolerance = kHermitianTolerance);

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
DensityOperator tensor(std::span<const DensityOperator> factors);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out every subsystem not listed in `keep`; kept subsystems stay in original order.
DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep);
DensityOperator partial_trace(const DensityOperator& rho, std::initializer_list<std::size_t> keep);

/// Result subsystem i is input subsystem perm[i].
DensityOperator permute_systems(const DensityOperator& rho, std::span<const std::size_t> perm);
std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm);

/// Throws std::invalid_argument for non-Hermitian input.
RealVector hermitian_eigenvalues(const ComplexMatrix& m);
EigenDecomposition hermitian_eigen(const ComplexMatrix& m);

/// Entropy in bits of a spectrum; entries are clipped to [0, 1] first.
double entropy_of_spectrum(const RealVector& eigenvalues);
double von_neumann_entropy(const DensityOperator& rho);
/// Throws std::invalid_argument unless entries >= -1e-12 and the sum is 1 within 1e-9.
double shannon_entropy(std::span<const double> p);

/// Purification on layout [rho's subsystems..., reference of dimension rho.dim()].
PureState purify(const DensityOperator& rho);

/// (1/sqrt d) sum_i |ii> on layout [d, d].
PureState max_entangled(std::size_t d);

}  // namespace qcap
