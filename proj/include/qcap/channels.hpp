#pragma once

// CPTP maps in Kraus form, their canonical complements, and the constructors used by
// the superadditivity construction: erasure, padded erasure, rocket, switch.

#include <cstddef>
#include <span>
#include <vector>

#include "qcap/qcore.hpp"
#include "qcap/rational.hpp"

namespace qcap {

inline constexpr double kCompletenessTolerance = 1e-9;

/// Kraus family {K_i}, each out_dim x in_dim, with sum K_i^dagger K_i = I.
/// The environment has one basis vector per Kraus operator; env_layout structures that index.
class QuantumChannel {
 public:
  /// Validates shapes, the dimension cap and trace preservation (throws std::invalid_argument
  /// with "not trace preserving", or DimensionError).
  QuantumChannel(SystemLayout in, SystemLayout out, SystemLayout env, std::vector<ComplexMatrix> kraus);

  /// Skips the completeness check. For compositions of channels that are already valid.
  static QuantumChannel assume_valid(SystemLayout in, SystemLayout out, SystemLayout env,
                                     std::vector<ComplexMatrix> kraus);

  const SystemLayout& in_layout() const { return in_; }
  const SystemLayout& out_layout() const { return out_; }
  const SystemLayout& env_layout() const { return env_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  std::size_t in_dim() const { return in_.total(); }
  std::size_t out_dim() const { return out_.total(); }
  std::size_t env_dim() const { return kraus_.size(); }

  /// max-norm of sum K^dagger K - I.
  double completeness_error() const;

 private:
  QuantumChannel(SystemLayout in, SystemLayout out, SystemLayout env, std::vector<ComplexMatrix> kraus,
                 bool validate);

  SystemLayout in_, out_, env_;
  std::vector<ComplexMatrix> kraus_;
};

/// sum_i K_i rho K_i^dagger on the channel's output layout.
DensityOperator apply(const QuantumChannel& ch, const DensityOperator& rho);

/// Channel to the environment of the isometry V|psi> = sum_i K_i|psi> (x) |i>_E.
/// Output layout is the original env_layout; its environment is the original output.
QuantumChannel complementary(const QuantumChannel& ch);

/// Kraus set {A_a (x) B_b}, index a * |B| + b; layouts concatenate.
QuantumChannel tensor_channels(const QuantumChannel& a, const QuantumChannel& b);
QuantumChannel tensor_channels(std::span<const QuantumChannel> factors);

QuantumChannel identity_channel(std::size_t d);

/// (1 - p) rho (+) p |e><e| with the flag |e> as output basis vector d.
/// Kraus: sqrt(1-p) embed(I_d), then sqrt(p)|e><i| for i = 0..d-1.
QuantumChannel erasure_channel(const Rational& p, std::size_t d);
QuantumChannel full_erasure(std::size_t d);

/// erasure(p, d) (x) erasure(1, d^(2n-1)); input layout [d, d^(2n-1)].
QuantumChannel padded_erasure(int n, const Rational& p, std::size_t d);

struct UnitaryPair {
  ComplexMatrix first;   // acts on A1
  ComplexMatrix second;  // acts on A2
};

enum class RocketEnsemble {
  identity,          // {(I, I)}
  generalized_pauli  // all (X^a Z^b, X^c Z^e), d^4 pairs
};

/// The d^2 generalized Pauli operators X^a Z^b, ordered by (a, b).
std::vector<ComplexMatrix> generalized_paulis(std::size_t d);
std::vector<UnitaryPair> rocket_unitaries(std::size_t d, RocketEnsemble kind);

/// Input [d, d], output [|R|, d] with the label r as a classical register.
/// rho -> sum_r |r><r|/|R| (x) Tr_A2[W_r rho W_r^dagger], W_r = P (U_r (x) V_r),
/// P = sum_ij w^(ij) |i><i| (x) |j><j|, w = exp(2 pi i / d).
/// Kraus K_(r,m) = |r> (x) (I (x) <m|) W_r / sqrt|R|, env layout [|R|, d].
QuantumChannel rocket_channel(std::size_t d, std::span<const UnitaryPair> ensemble);
QuantumChannel rocket_channel(std::size_t d, RocketEnsemble kind = RocketEnsemble::generalized_pauli);

/// Flag register measured in the standard basis selects a component. Input layout
/// [#components, component-0 input subsystems...]; output [#components, max output dim];
/// Kraus {|i><i| (x) embed_i(K^(i)_j)}. Components must share the input dimension.
QuantumChannel switch_channel(std::span<const QuantumChannel> components);

/// Component `flag` of the main construction: 0 -> rocket(d)^(x)n, 1 -> padded_erasure(n, p, d).
QuantumChannel main_channel_component(int n, const Rational& p, std::size_t d, int flag,
                                      RocketEnsemble kind = RocketEnsemble::generalized_pauli);

/// switch_channel([rocket(d)^(x)n, padded_erasure(n, p, d)]).
QuantumChannel main_channel(int n, const Rational& p, std::size_t d,
                            RocketEnsemble kind = RocketEnsemble::generalized_pauli);

}  // namespace qcap
