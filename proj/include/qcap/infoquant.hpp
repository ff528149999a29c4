#pragma once

// Single-letter information quantities of channels, in bits.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcap/channels.hpp"
#include "qcap/qcore.hpp"
#include "qcap/rational.hpp"

namespace qcap {

/// A value together with the entropies it was assembled from.
struct InfoResult {
  double value = 0;
  std::vector<std::pair<std::string, double>> components;
  double min_eigenvalue = 0;  // smallest output eigenvalue seen, before clipping
  double trace_error = 0;     // largest |Tr - 1| over evaluated outputs

  double component(const std::string& name) const;
};

/// Finite classical-quantum ensemble {p_x, rho_x} on one common layout.
class CqEnsemble {
 public:
  /// Throws std::invalid_argument unless p_x >= 0, sum p_x = 1 within 1e-9 and layouts agree.
  explicit CqEnsemble(std::vector<std::pair<double, DensityOperator>> items);

  const std::vector<std::pair<double, DensityOperator>>& items() const { return items_; }
  const SystemLayout& layout() const { return items_.front().second.layout(); }
  DensityOperator average() const;

 private:
  std::vector<std::pair<double, DensityOperator>> items_;
};

/// H(B) - H(E) for ch applied to rho.
InfoResult coherent_information(const QuantumChannel& ch, const DensityOperator& rho);
/// I(X;B) = H(sum p N(rho_x)) - sum p H(N(rho_x)).
InfoResult holevo_bob(const QuantumChannel& ch, const CqEnsemble& ens);
/// I(X;E), the Holevo quantity of the complementary channel.
InfoResult holevo_eve(const QuantumChannel& ch, const CqEnsemble& ens);
/// I(X;B) - I(X;E).
InfoResult private_value(const QuantumChannel& ch, const CqEnsemble& ens);

/// Settings for the heuristic lower-bound searches.
struct OptimizerConfig {
  std::size_t ensemble_size = 0;  // 0: input dimension
  std::size_t restarts = 32;
  std::size_t iterations = 3000;  // objective evaluations per local ascent
  std::uint64_t seed = 0;
  double initial_step = 0.6;
  double tolerance = 1e-11;  // simplex spread at which a local ascent stops
  std::size_t polish_rounds = 2;  // re-seeded local ascents from the incumbent
  std::size_t threads = 1;
};

/// Input dimension above which the ensemble searches refuse to run.
inline constexpr std::size_t kOracleInputCap = 8;
/// State dimension above which the POVM search refuses to run.
inline constexpr std::size_t kPovmStateCap = 4;

struct EnsembleSearchResult {
  double value = 0;
  CqEnsemble ensemble;
  std::size_t evaluations = 0;
};

/// Best private_value found over pure-state ensembles. A lower bound on P^(1).
EnsembleSearchResult brute_force_p1(const QuantumChannel& ch, const OptimizerConfig& cfg = {});
/// Best holevo_bob found over pure-state ensembles. A lower bound on C^(1).
EnsembleSearchResult brute_force_c1(const QuantumChannel& ch, const OptimizerConfig& cfg = {});

/// Projects every ensemble member onto flag value `flag` of subsystem 0 and renormalizes.
/// Members with no weight on that flag are dropped and probabilities are renormalized.
CqEnsemble pin_flag(const CqEnsemble& ens, std::size_t flag);

struct PovmSearchResult {
  double value = 0;                    // mutual information I(X;Y) in bits
  std::vector<ComplexMatrix> elements;  // rank-one POVM elements
};

/// Best I(X;Y) found over rank-one POVMs with up to d^2 elements. A lower bound on I_acc.
PovmSearchResult accessible_info_search(const CqEnsemble& ens, const OptimizerConfig& cfg = {});
/// I(X;Y) for a given POVM.
double measured_mutual_information(const CqEnsemble& ens, const std::vector<ComplexMatrix>& povm);

// ---------------------------------------------------------------------------
// Witness state for j uses of main_channel(n, p, d).

struct WitnessState {
  DensityOperator state;               // channel-input reduction, flags included
  std::vector<std::string> registers;  // one name per subsystem of state.layout()
};

/// Register layout of the witness input without materializing it: per use
/// [flag, 2n data registers of dimension d]. Use 1 carries the rockets, uses 2..j the
/// erasure data register followed by 2n-1 pad registers.
std::vector<std::string> witness_register_names(int n, int j);

/// Input state across j uses: use 1 flag |0> (rockets), uses 2..j flag |1> (erasures).
/// For k = 1..min(n, j-1): rocket k's A1 is half of a maximally entangled pair whose partner
/// is kept as reference (so I/d here), and its A2 is maximally entangled with the erasure data
/// register of use k+1. All other registers hold |0>.
WitnessState witness_state(int n, std::size_t d, int j);

/// Coherent information of the witness through main_channel(n, p, d)^(x)j using flag-pinned
/// evaluation, split into independent register groups. Components include "rate" = value / j
/// and the number of entangled rocket/erasure pairs.
InfoResult witness_coherent_info(int n, const Rational& p, std::size_t d, int j,
                                 RocketEnsemble kind = RocketEnsemble::generalized_pauli);

/// Same quantity evaluated as one flag-pinned block: rocket^(x)n (x) padded_erasure^(x)(j-1)
/// applied to the flag-free witness input. Dimension-capped; meant for cross-checks.
InfoResult witness_coherent_info_pinned_block(int n, const Rational& p, std::size_t d, int j,
                                              RocketEnsemble kind = RocketEnsemble::generalized_pauli);

/// Same quantity through the full switch channel main_channel^(x)j on witness_state.
InfoResult witness_coherent_info_full(int n, const Rational& p, std::size_t d, int j,
                                      RocketEnsemble kind = RocketEnsemble::generalized_pauli);

// ---------------------------------------------------------------------------
// Subentropy and measurement entropy.

/// Subentropy in bits: -sum_i (prod_{j != i} l_i / (l_i - l_j)) l_i log l_i over the spectrum.
/// Coincident eigenvalues are separated by eps = 1e-7 steps and evaluated in 100-digit
/// arithmetic; the eps -> 0 limit is Richardson-extrapolated from eps and eps/2.
double subentropy(const DensityOperator& rho);
double subentropy_of_spectrum(const RealVector& eigenvalues);

struct MonteCarloEstimate {
  double mean = 0;
  double std_error = 0;
  std::size_t samples = 0;
};

/// Mean Shannon entropy (bits) of the outcome distribution when rho is measured in a
/// Haar-random orthonormal basis. Deterministic in (samples, seed); chunked substreams make
/// the result independent of `threads`.
MonteCarloEstimate haar_measured_entropy(const DensityOperator& rho, std::size_t samples, std::uint64_t seed,
                                         std::size_t threads = 1);

/// Analytic Haar average: <H(U(A))>_U = Q(rho) + (H_d - 1) log2 e.
double haar_measured_entropy_exact(const DensityOperator& rho);

/// Exact H_n = sum_{i=1}^n 1/i.
Rational harmonic(long n);

/// gamma_d = ln d - sum_{t=2}^d 1/t.
double gamma_d(long d);

}  // namespace qcap
