#include "qcap/random.hpp"

#include <cmath>

namespace qcap {
namespace {

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

}  // namespace

Rng substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

ComplexMatrix random_unitary(std::size_t d, Rng& rng) {
  const Eigen::MatrixXcd g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0) q.col(j) *= diag / mag;
  }
  return q;
}

ComplexVector random_unit_vector(std::size_t d, Rng& rng) {
  ComplexMatrix g = ginibre(d, 1, rng);
  ComplexVector v = g.col(0);
  return v / v.norm();
}

DensityOperator random_density(const SystemLayout& layout, Rng& rng, std::size_t rank) {
  const std::size_t d = layout.total();
  const ComplexMatrix g = ginibre(d, rank == 0 ? d : rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator::assume_valid(layout, std::move(rho));
}

PureState random_pure(const SystemLayout& layout, Rng& rng) {
  return PureState(layout, random_unit_vector(layout.total(), rng));
}

}  // namespace qcap
