#include "qcap/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qcap {
namespace {

std::size_t checked_product(std::span<const std::size_t> dims) {
  std::size_t total = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw std::invalid_argument("subsystem dimension must be >= 1");
    if (total > std::numeric_limits<std::size_t>::max() / d) {
      throw std::overflow_error("total dimension overflows");
    }
    total *= d;
  }
  return total;
}

// Row-major strides: stride[i] = product of dims[i+1..].
std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
  return s;
}

// Flat offsets of every multi-index over the subsystems `which`, in row-major order of `which`.
std::vector<std::size_t> offsets_over(const std::vector<std::size_t>& dims,
                                      const std::vector<std::size_t>& strides,
                                      const std::vector<std::size_t>& which) {
  std::vector<std::size_t> out{0};
  for (std::size_t sys : which) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * dims[sys]);
    for (std::size_t base : out) {
      for (std::size_t v = 0; v < dims[sys]; ++v) next.push_back(base + v * strides[sys]);
    }
    out = std::move(next);
  }
  return out;
}

ComplexMatrix hermitize(const ComplexMatrix& m) {
  ComplexMatrix h = (m + m.adjoint()) * 0.5;
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// SystemLayout

SystemLayout::SystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
  total_ = checked_product(dims_);
  if (!labels_.empty()) {
    if (labels_.size() != dims_.size()) throw std::invalid_argument("label count must match subsystem count");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw std::invalid_argument("subsystem labels must be unique");
  }
}

std::optional<std::size_t> SystemLayout::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

SystemLayout SystemLayout::concat(const SystemLayout& other) const {
  std::vector<std::size_t> dims = dims_;
  dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
  std::vector<std::string> labels;
  if (!labels_.empty() && !other.labels_.empty()) {
    labels = labels_;
    labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
    if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) labels.clear();
  }
  return SystemLayout(std::move(dims), std::move(labels));
}

SystemLayout SystemLayout::select(std::span<const std::size_t> indices) const {
  std::vector<std::size_t> dims;
  std::vector<std::string> labels;
  for (std::size_t i : indices) {
    if (i >= dims_.size()) throw std::out_of_range("subsystem index out of range");
    dims.push_back(dims_[i]);
    if (!labels_.empty()) labels.push_back(labels_[i]);
  }
  return SystemLayout(std::move(dims), std::move(labels));
}

// ---------------------------------------------------------------------------
// DensityOperator

DensityOperator::DensityOperator(SystemLayout layout, ComplexMatrix matrix)
    : DensityOperator(std::move(layout), std::move(matrix), true) {}

DensityOperator::DensityOperator(SystemLayout layout, ComplexMatrix matrix, bool validate)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(layout_.total());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw std::invalid_argument("density matrix shape does not match layout dimension " +
                                std::to_string(layout_.total()));
  }
  if (!validate) {
    matrix_ = hermitize(matrix_);
    return;
  }
  if (!is_hermitian(matrix_)) throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(matrix_.trace() - Complex(1.0)) > kTraceTolerance) {
    throw std::invalid_argument("density matrix trace differs from 1");
  }
  matrix_ = hermitize(matrix_);
  if (hermitian_eigenvalues(matrix_).minCoeff() < -kPsdTolerance) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

DensityOperator DensityOperator::assume_valid(SystemLayout layout, ComplexMatrix matrix) {
  return DensityOperator(std::move(layout), std::move(matrix), false);
}

DensityOperator DensityOperator::maximally_mixed(SystemLayout layout) {
  const auto n = static_cast<Eigen::Index>(layout.total());
  ComplexMatrix m = ComplexMatrix::Identity(n, n) / static_cast<double>(n);
  return assume_valid(std::move(layout), std::move(m));
}

DensityOperator DensityOperator::basis_state(SystemLayout layout, std::span<const std::size_t> indices) {
  if (indices.size() != layout.size()) throw std::invalid_argument("one basis index per subsystem required");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= layout.dim(i)) throw std::out_of_range("basis index out of range");
    flat = flat * layout.dim(i) + indices[i];
  }
  const auto n = static_cast<Eigen::Index>(layout.total());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(static_cast<Eigen::Index>(flat), static_cast<Eigen::Index>(flat)) = 1.0;
  return assume_valid(std::move(layout), std::move(m));
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(SystemLayout layout, ComplexVector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total()) {
    throw std::invalid_argument("amplitude count does not match layout dimension");
  }
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > 1e-10) throw std::invalid_argument("pure state is not normalized");
}

DensityOperator PureState::density() const {
  ComplexMatrix m = amplitudes_ * amplitudes_.adjoint();
  return DensityOperator::assume_valid(layout_, std::move(m));
}

// ---------------------------------------------------------------------------
// Operations

bool is_hermitian(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator::assume_valid(a.layout().concat(b.layout()), kron(a.matrix(), b.matrix()));
}

DensityOperator tensor(std::span<const DensityOperator> factors) {
  if (factors.empty()) throw std::invalid_argument("tensor of zero factors");
  DensityOperator acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = tensor(acc, factors[i]);
  return acc;
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep) {
  const SystemLayout& layout = rho.layout();
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw std::invalid_argument("duplicate subsystem index in partial trace");
  }
  for (std::size_t k : kept) {
    if (k >= layout.size()) throw std::out_of_range("partial trace index out of range");
  }
  std::vector<std::size_t> traced;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (!std::binary_search(kept.begin(), kept.end(), i)) traced.push_back(i);
  }

  const auto strides = strides_of(layout.dims());
  const auto keep_off = offsets_over(layout.dims(), strides, kept);
  const auto trace_off = offsets_over(layout.dims(), strides, traced);

  const auto n = static_cast<Eigen::Index>(keep_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  const ComplexMatrix& m = rho.matrix();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      Complex sum = 0;
      for (std::size_t t : trace_off) {
        sum += m(static_cast<Eigen::Index>(keep_off[a] + t), static_cast<Eigen::Index>(keep_off[b] + t));
      }
      out(a, b) = sum;
    }
  }
  return DensityOperator::assume_valid(layout.select(kept), std::move(out));
}

DensityOperator partial_trace(const DensityOperator& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm) {
  std::vector<std::size_t> inv(perm.size(), perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] >= perm.size() || inv[perm[i]] != perm.size()) {
      throw std::invalid_argument("malformed permutation");
    }
    inv[perm[i]] = i;
  }
  return inv;
}

DensityOperator permute_systems(const DensityOperator& rho, std::span<const std::size_t> perm) {
  const SystemLayout& layout = rho.layout();
  if (perm.size() != layout.size()) throw std::invalid_argument("malformed permutation");
  inverse_permutation(perm);  // validates

  const auto strides = strides_of(layout.dims());
  // New basis index (row-major over permuted subsystems) -> old flat index.
  const auto map = offsets_over(layout.dims(), strides, std::vector<std::size_t>(perm.begin(), perm.end()));

  const auto n = static_cast<Eigen::Index>(map.size());
  ComplexMatrix out(n, n);
  const ComplexMatrix& m = rho.matrix();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      out(a, b) = m(static_cast<Eigen::Index>(map[a]), static_cast<Eigen::Index>(map[b]));
    }
  }
  return DensityOperator::assume_valid(layout.select(perm), std::move(out));
}

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  if (!is_hermitian(m)) throw std::invalid_argument("matrix is not Hermitian");
  const Eigen::MatrixXcd h = hermitize(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

EigenDecomposition hermitian_eigen(const ComplexMatrix& m) {
  if (!is_hermitian(m)) throw std::invalid_argument("matrix is not Hermitian");
  const Eigen::MatrixXcd h = hermitize(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  EigenDecomposition out;
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  const Eigen::MatrixXcd rebuilt =
      solver.eigenvectors() * out.values.cast<Complex>().asDiagonal() * solver.eigenvectors().adjoint();
  out.residual = (rebuilt - Eigen::MatrixXcd(m)).cwiseAbs().maxCoeff();
  return out;
}

double entropy_of_spectrum(const RealVector& eigenvalues) {
  double h = 0;
  for (double x : eigenvalues) {
    const double lambda = std::clamp(x, 0.0, 1.0);
    if (lambda > 0) h -= lambda * std::log2(lambda);
  }
  return h;
}

double von_neumann_entropy(const DensityOperator& rho) { return entropy_of_spectrum(hermitian_eigenvalues(rho.matrix())); }

double shannon_entropy(std::span<const double> p) {
  double sum = 0;
  for (double x : p) {
    if (!(x >= -1e-12)) throw std::invalid_argument("probability below zero");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("probabilities do not sum to 1");
  double h = 0;
  for (double x : p) {
    const double q = std::clamp(x, 0.0, 1.0);
    if (q > 0) h -= q * std::log2(q);
  }
  return h;
}

PureState purify(const DensityOperator& rho) {
  const auto eig = hermitian_eigen(rho.matrix());
  const auto n = static_cast<Eigen::Index>(rho.dim());
  ComplexVector psi = ComplexVector::Zero(n * n);
  // Largest eigenvalue pairs with reference |0>, so a pure input yields rho (x) |0>.
  for (Eigen::Index r = 0; r < n; ++r) {
    const Eigen::Index col = n - 1 - r;
    const double lambda = std::max(eig.values(col), 0.0);
    if (lambda == 0) continue;
    const double amp = std::sqrt(lambda);
    for (Eigen::Index i = 0; i < n; ++i) psi(i * n + r) += amp * eig.vectors(i, col);
  }
  psi /= psi.norm();
  std::vector<std::size_t> dims = rho.layout().dims();
  dims.push_back(rho.dim());
  return PureState(SystemLayout(std::move(dims)), std::move(psi));
}

PureState max_entangled(std::size_t d) {
  if (d < 2) throw std::invalid_argument("maximally entangled state needs d >= 2");
  const auto n = static_cast<Eigen::Index>(d);
  ComplexVector psi = ComplexVector::Zero(n * n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index i = 0; i < n; ++i) psi(i * n + i) = amp;
  return PureState(SystemLayout({d, d}), std::move(psi));
}

}  // namespace qcap
