#include "qcap/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qcap/errors.hpp"

namespace qcap {
namespace {

void check_layouts(const SystemLayout& in, const SystemLayout& out, const SystemLayout& env,
                   const std::vector<ComplexMatrix>& kraus) {
  check_dimension(in.total(), "channel input");
  check_dimension(out.total(), "channel output");
  check_dimension(env.total(), "channel environment");
  if (kraus.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
  if (env.total() != kraus.size()) {
    throw std::invalid_argument("environment layout dimension " + std::to_string(env.total()) +
                                " does not match Kraus count " + std::to_string(kraus.size()));
  }
  for (const auto& k : kraus) {
    if (static_cast<std::size_t>(k.rows()) != out.total() || static_cast<std::size_t>(k.cols()) != in.total()) {
      throw std::invalid_argument("Kraus operator shape inconsistent with channel layouts");
    }
  }
}

std::size_t checked_power(std::size_t base, int exponent) {
  std::size_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    if (out > dimension_cap() / base) {
      throw DimensionError("dimension " + std::to_string(base) + "^" + std::to_string(exponent) + " exceeds cap " +
                           std::to_string(dimension_cap()));
    }
    out *= base;
  }
  return out;
}

}  // namespace

QuantumChannel::QuantumChannel(SystemLayout in, SystemLayout out, SystemLayout env, std::vector<ComplexMatrix> kraus)
    : QuantumChannel(std::move(in), std::move(out), std::move(env), std::move(kraus), true) {}

QuantumChannel::QuantumChannel(SystemLayout in, SystemLayout out, SystemLayout env, std::vector<ComplexMatrix> kraus,
                               bool validate)
    : in_(std::move(in)), out_(std::move(out)), env_(std::move(env)), kraus_(std::move(kraus)) {
  check_layouts(in_, out_, env_, kraus_);
  if (validate && completeness_error() > kCompletenessTolerance) {
    throw std::invalid_argument("Kraus family is not trace preserving");
  }
}

QuantumChannel QuantumChannel::assume_valid(SystemLayout in, SystemLayout out, SystemLayout env,
                                            std::vector<ComplexMatrix> kraus) {
  return QuantumChannel(std::move(in), std::move(out), std::move(env), std::move(kraus), false);
}

double QuantumChannel::completeness_error() const {
  const auto n = static_cast<Eigen::Index>(in_dim());
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& k : kraus_) sum.noalias() += k.adjoint() * k;
  return (sum - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

DensityOperator apply(const QuantumChannel& ch, const DensityOperator& rho) {
  if (rho.dim() != ch.in_dim()) {
    throw std::invalid_argument("state dimension " + std::to_string(rho.dim()) + " does not match channel input " +
                                std::to_string(ch.in_dim()));
  }
  const auto n = static_cast<Eigen::Index>(ch.out_dim());
  const auto& kraus = ch.kraus();
  if (kraus.size() <= 4) {
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    ComplexMatrix tmp;
    for (const auto& k : kraus) {
      tmp.noalias() = k * rho.matrix();
      out.noalias() += tmp * k.adjoint();
    }
    return DensityOperator::assume_valid(ch.out_layout(), std::move(out));
  }

  // rho = L L^dagger over its positive spectrum; then N(rho) = sum_k (K_k L)(K_k L)^dagger, with the
  // K_k L blocks stacked side by side so the sum is a few large products instead of many small ones.
  const EigenDecomposition eig = hermitian_eigen(rho.matrix());
  const double cutoff = 1e-15 * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > cutoff) support.push_back(i);
  }
  const auto in = static_cast<Eigen::Index>(ch.in_dim());
  const auto rank = static_cast<Eigen::Index>(support.size());
  ComplexMatrix l(in, rank);
  for (Eigen::Index c = 0; c < rank; ++c) {
    const auto i = support[static_cast<std::size_t>(c)];
    l.col(c) = eig.vectors.col(i) * std::sqrt(eig.values(i));
  }

  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  if (rank == 0) return DensityOperator::assume_valid(ch.out_layout(), std::move(out));
  constexpr Eigen::Index kMaxColumns = 4096;
  const Eigen::Index per_chunk = std::max<Eigen::Index>(1, kMaxColumns / rank);
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor> stacked;
  for (std::size_t first = 0; first < kraus.size(); first += static_cast<std::size_t>(per_chunk)) {
    const std::size_t last = std::min(kraus.size(), first + static_cast<std::size_t>(per_chunk));
    stacked.resize(n, static_cast<Eigen::Index>(last - first) * rank);
    for (std::size_t k = first; k < last; ++k) {
      stacked.middleCols(static_cast<Eigen::Index>(k - first) * rank, rank).noalias() = kraus[k] * l;
    }
    out.noalias() += stacked * stacked.adjoint();
  }
  return DensityOperator::assume_valid(ch.out_layout(), std::move(out));
}

QuantumChannel complementary(const QuantumChannel& ch) {
  const auto env = static_cast<Eigen::Index>(ch.env_dim());
  const auto in = static_cast<Eigen::Index>(ch.in_dim());
  const auto& kraus = ch.kraus();
  std::vector<ComplexMatrix> comp;
  comp.reserve(ch.out_dim());
  for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(ch.out_dim()); ++b) {
    ComplexMatrix l(env, in);
    for (Eigen::Index i = 0; i < env; ++i) l.row(i) = kraus[static_cast<std::size_t>(i)].row(b);
    comp.push_back(std::move(l));
  }
  return QuantumChannel::assume_valid(ch.in_layout(), ch.env_layout(), ch.out_layout(), std::move(comp));
}

QuantumChannel tensor_channels(const QuantumChannel& a, const QuantumChannel& b) {
  check_dimension(a.in_dim() * b.in_dim(), "tensor channel input");
  check_dimension(a.out_dim() * b.out_dim(), "tensor channel output");
  check_dimension(a.env_dim() * b.env_dim(), "tensor channel environment");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(a.env_dim() * b.env_dim());
  for (const auto& ka : a.kraus()) {
    for (const auto& kb : b.kraus()) kraus.push_back(kron(ka, kb));
  }
  return QuantumChannel::assume_valid(a.in_layout().concat(b.in_layout()), a.out_layout().concat(b.out_layout()),
                                      a.env_layout().concat(b.env_layout()), std::move(kraus));
}

QuantumChannel tensor_channels(std::span<const QuantumChannel> factors) {
  if (factors.empty()) throw std::invalid_argument("tensor of zero channels");
  QuantumChannel acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = tensor_channels(acc, factors[i]);
  return acc;
}

QuantumChannel identity_channel(std::size_t d) {
  if (d < 1) throw std::invalid_argument("identity channel needs d >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  return QuantumChannel::assume_valid(SystemLayout({d}), SystemLayout({d}), SystemLayout({1}),
                                      {ComplexMatrix::Identity(n, n)});
}

QuantumChannel erasure_channel(const Rational& p, std::size_t d) {
  if (p < 0 || p > 1) throw std::invalid_argument("erasure probability must lie in [0, 1]");
  if (d < 1) throw std::invalid_argument("erasure channel needs d >= 1");
  check_dimension(d + 1, "erasure output");
  const double prob = to_double(p);
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(d + 1);
  ComplexMatrix keep = ComplexMatrix::Zero(n + 1, n);
  keep.topRows(n).setIdentity();
  kraus.push_back(std::sqrt(1.0 - prob) * keep);
  for (Eigen::Index i = 0; i < n; ++i) {
    ComplexMatrix k = ComplexMatrix::Zero(n + 1, n);
    k(n, i) = std::sqrt(prob);
    kraus.push_back(std::move(k));
  }
  return QuantumChannel::assume_valid(SystemLayout({d}), SystemLayout({d + 1}), SystemLayout({d + 1}),
                                      std::move(kraus));
}

QuantumChannel full_erasure(std::size_t d) { return erasure_channel(Rational(1), d); }

QuantumChannel padded_erasure(int n, const Rational& p, std::size_t d) {
  if (n < 1) throw std::invalid_argument("padded erasure needs n >= 1");
  if (d < 2) throw std::invalid_argument("padded erasure needs d >= 2");
  checked_power(d, 2 * n);
  const std::size_t pad = checked_power(d, 2 * n - 1);
  return tensor_channels(erasure_channel(p, d), full_erasure(pad));
}

std::vector<ComplexMatrix> generalized_paulis(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix shift = ComplexMatrix::Zero(n, n);
  ComplexMatrix clock = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    shift((i + 1) % n, i) = 1.0;
    clock(i, i) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(d));
  }
  std::vector<ComplexMatrix> out;
  ComplexMatrix xa = ComplexMatrix::Identity(n, n);
  for (std::size_t a = 0; a < d; ++a) {
    ComplexMatrix zb = ComplexMatrix::Identity(n, n);
    for (std::size_t b = 0; b < d; ++b) {
      out.push_back(xa * zb);
      zb = zb * clock;
    }
    xa = xa * shift;
  }
  return out;
}

std::vector<UnitaryPair> rocket_unitaries(std::size_t d, RocketEnsemble kind) {
  const auto n = static_cast<Eigen::Index>(d);
  if (kind == RocketEnsemble::identity) {
    return {UnitaryPair{ComplexMatrix::Identity(n, n), ComplexMatrix::Identity(n, n)}};
  }
  const auto paulis = generalized_paulis(d);
  std::vector<UnitaryPair> out;
  out.reserve(paulis.size() * paulis.size());
  for (const auto& u : paulis) {
    for (const auto& v : paulis) out.push_back(UnitaryPair{u, v});
  }
  return out;
}

QuantumChannel rocket_channel(std::size_t d, std::span<const UnitaryPair> ensemble) {
  if (d < 2) throw std::invalid_argument("rocket channel needs d >= 2");
  if (ensemble.empty()) throw std::invalid_argument("rocket ensemble must be nonempty");
  const auto n = static_cast<Eigen::Index>(d);
  const std::size_t labels = ensemble.size();
  check_dimension(labels * d, "rocket output");

  ComplexMatrix phase = ComplexMatrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      phase(i * n + j, i * n + j) =
          std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((i * j) % n) / static_cast<double>(d));
    }
  }

  const double weight = 1.0 / std::sqrt(static_cast<double>(labels));
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(labels * d);
  for (std::size_t r = 0; r < labels; ++r) {
    const auto& [u, v] = ensemble[r];
    const auto unitary_error = [n](const ComplexMatrix& m) {
      return (m.rows() != n || m.cols() != n) ? 1.0
                                              : (m.adjoint() * m - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    };
    if (unitary_error(u) > 1e-9 || unitary_error(v) > 1e-9) {
      throw std::invalid_argument("rocket ensemble member is not a unitary pair on dimension " + std::to_string(d));
    }
    const ComplexMatrix w = phase * kron(u, v);
    for (Eigen::Index m = 0; m < n; ++m) {
      ComplexMatrix k = ComplexMatrix::Zero(static_cast<Eigen::Index>(labels) * n, n * n);
      // (I (x) <m|) W : row i of the result is row (i, m) of W.
      for (Eigen::Index i = 0; i < n; ++i) k.row(static_cast<Eigen::Index>(r) * n + i) = weight * w.row(i * n + m);
      kraus.push_back(std::move(k));
    }
  }
  return QuantumChannel(SystemLayout({d, d}), SystemLayout({labels, d}), SystemLayout({labels, d}),
                        std::move(kraus));
}

QuantumChannel rocket_channel(std::size_t d, RocketEnsemble kind) {
  const auto ensemble = rocket_unitaries(d, kind);
  return rocket_channel(d, ensemble);
}

QuantumChannel switch_channel(std::span<const QuantumChannel> components) {
  if (components.size() < 2) throw std::invalid_argument("switch channel needs at least two components");
  const std::size_t in = components.front().in_dim();
  std::size_t max_out = 0;
  std::size_t kraus_count = 0;
  for (const auto& c : components) {
    if (c.in_dim() != in) throw std::invalid_argument("switch components have mismatched input dimensions");
    max_out = std::max(max_out, c.out_dim());
    kraus_count += c.env_dim();
  }
  const std::size_t flags = components.size();
  check_dimension(flags * in, "switch input");
  check_dimension(flags * max_out, "switch output");
  check_dimension(kraus_count, "switch environment");

  const auto n_in = static_cast<Eigen::Index>(in);
  const auto n_out = static_cast<Eigen::Index>(max_out);
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(kraus_count);
  for (std::size_t i = 0; i < flags; ++i) {
    const auto flag = static_cast<Eigen::Index>(i);
    for (const auto& k : components[i].kraus()) {
      ComplexMatrix big = ComplexMatrix::Zero(static_cast<Eigen::Index>(flags) * n_out, static_cast<Eigen::Index>(flags) * n_in);
      big.block(flag * n_out, flag * n_in, k.rows(), k.cols()) = k;
      kraus.push_back(std::move(big));
    }
  }
  std::vector<std::size_t> in_dims{flags};
  const auto& first = components.front().in_layout().dims();
  in_dims.insert(in_dims.end(), first.begin(), first.end());
  return QuantumChannel::assume_valid(SystemLayout(std::move(in_dims)), SystemLayout({flags, max_out}),
                                      SystemLayout({kraus_count}), std::move(kraus));
}

QuantumChannel main_channel_component(int n, const Rational& p, std::size_t d, int flag, RocketEnsemble kind) {
  if (n < 1) throw std::invalid_argument("main channel needs n >= 1");
  if (d < 2) throw std::invalid_argument("main channel needs d >= 2");
  checked_power(d, 2 * n);
  if (flag == 1) return padded_erasure(n, p, d);
  if (flag != 0) throw std::invalid_argument("main channel flag must be 0 or 1");
  const QuantumChannel rocket = rocket_channel(d, kind);
  std::vector<QuantumChannel> copies(static_cast<std::size_t>(n), rocket);
  return tensor_channels(copies);
}

QuantumChannel main_channel(int n, const Rational& p, std::size_t d, RocketEnsemble kind) {
  const std::vector<QuantumChannel> components{main_channel_component(n, p, d, 0, kind),
                                               main_channel_component(n, p, d, 1, kind)};
  return switch_channel(components);
}

}  // namespace qcap
