#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qcap/qcore.hpp"
#include "qcap/random.hpp"

namespace qcap::test {

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  return (a - b).cwiseAbs().maxCoeff();
}

inline ComplexMatrix random_hermitian(std::size_t d, Rng& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(g(rng), g(rng));
  return (m + m.adjoint()) / 2.0;
}

// Brute-force contraction over explicit multi-indices; shares nothing with partial_trace.
inline ComplexMatrix loop_partial_trace(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                                        const std::vector<std::size_t>& keep) {
  const std::size_t n = dims.size();
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  std::size_t kept = 1;
  for (auto k : keep) kept *= dims[k];
  auto digits = [&](std::size_t idx) {
    std::vector<std::size_t> out(n);
    for (std::size_t s = n; s-- > 0;) {
      out[s] = idx % dims[s];
      idx /= dims[s];
    }
    return out;
  };
  auto kept_index = [&](const std::vector<std::size_t>& dg) {
    std::size_t idx = 0;
    for (auto k : keep) idx = idx * dims[k] + dg[k];
    return idx;
  };
  ComplexMatrix out = ComplexMatrix::Zero(kept, kept);
  for (std::size_t r = 0; r < total; ++r) {
    const auto dr = digits(r);
    for (std::size_t c = 0; c < total; ++c) {
      const auto dc = digits(c);
      bool traced_equal = true;
      for (std::size_t s = 0; s < n && traced_equal; ++s) {
        if (std::find(keep.begin(), keep.end(), s) == keep.end() && dr[s] != dc[s]) traced_equal = false;
      }
      if (traced_equal) out(kept_index(dr), kept_index(dc)) += rho(r, c);
    }
  }
  return out;
}

inline ComplexMatrix kraus_sum(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(kraus.front().rows(), kraus.front().rows());
  for (const auto& k : kraus) {
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j)
        for (Eigen::Index a = 0; a < rho.rows(); ++a)
          for (Eigen::Index b = 0; b < rho.cols(); ++b) out(i, j) += k(i, a) * rho(a, b) * std::conj(k(j, b));
  }
  return out;
}

inline DensityOperator diag_state(std::vector<double> p) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = p[i];
  return DensityOperator(SystemLayout({p.size()}), m);
}

inline DensityOperator ket(std::vector<std::size_t> dims, std::vector<std::size_t> idx) {
  return DensityOperator::basis_state(SystemLayout(std::move(dims)), idx);
}

inline std::vector<double> sorted(const RealVector& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qcap::test
