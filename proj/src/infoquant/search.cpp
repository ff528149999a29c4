#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "nelder_mead.hpp"
#include "qcap/errors.hpp"
#include "qcap/infoquant.hpp"
#include "qcap/random.hpp"

namespace qcap {
namespace {

// Pure-state ensemble packed as m states of 2D reals (re, im) followed by m softmax logits.
struct EnsembleParams {
  std::size_t dim;
  std::size_t members;

  std::size_t size() const { return members * (2 * dim + 1); }

  ComplexVector state(std::span<const double> x, std::size_t i) const {
    ComplexVector v(static_cast<Eigen::Index>(dim));
    const std::size_t base = i * 2 * dim;
    for (std::size_t k = 0; k < dim; ++k) v(static_cast<Eigen::Index>(k)) = Complex(x[base + 2 * k], x[base + 2 * k + 1]);
    const double norm = v.norm();
    if (norm < 1e-300) {
      v.setZero();
      v(0) = 1.0;
      return v;
    }
    return v / norm;
  }

  std::vector<double> probabilities(std::span<const double> x) const {
    const std::size_t base = members * 2 * dim;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < members; ++i) top = std::max(top, x[base + i]);
    std::vector<double> p(members);
    double sum = 0;
    for (std::size_t i = 0; i < members; ++i) {
      p[i] = std::exp(x[base + i] - top);
      sum += p[i];
    }
    for (double& q : p) q /= sum;
    return p;
  }
};

enum class Objective { private_info, holevo };

// Evaluates pure-state ensembles through a channel. For input psi, V = [K_0 psi, ..., K_{r-1} psi]
// gives Bob's output V V^dagger and Eve's output (V^dagger V)^T.
class EnsembleObjective {
 public:
  EnsembleObjective(const QuantumChannel& ch, Objective objective, EnsembleParams params)
      : objective_(objective), params_(params), out_(static_cast<Eigen::Index>(ch.out_dim())) {
    const auto in = static_cast<Eigen::Index>(ch.in_dim());
    stacked_.resize(out_ * static_cast<Eigen::Index>(ch.env_dim()), in);
    for (std::size_t i = 0; i < ch.env_dim(); ++i) stacked_.middleRows(static_cast<Eigen::Index>(i) * out_, out_) = ch.kraus()[i];
    env_ = static_cast<Eigen::Index>(ch.env_dim());
  }

  double operator()(std::span<const double> x) const {
    const auto p = params_.probabilities(x);
    ComplexMatrix bob_avg = ComplexMatrix::Zero(out_, out_);
    ComplexMatrix eve_avg = ComplexMatrix::Zero(env_, env_);
    double bob_cond = 0;
    for (std::size_t i = 0; i < params_.members; ++i) {
      const ComplexVector psi = params_.state(x, i);
      const ComplexVector stacked = stacked_ * psi;
      const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>> v(
          stacked.data(), out_, env_);
      const ComplexMatrix b = v * v.adjoint();
      bob_avg += p[i] * b;
      if (objective_ == Objective::private_info) {
        eve_avg += p[i] * (v.adjoint() * v).transpose();
      } else {
        bob_cond += p[i] * entropy_of_spectrum(hermitian_eigenvalues(b));
      }
    }
    // Pure inputs: H(B_x) = H(E_x), so I(X;B) - I(X;E) = H(avg B) - H(avg E).
    if (objective_ == Objective::private_info) {
      return entropy_of_spectrum(hermitian_eigenvalues(bob_avg)) - entropy_of_spectrum(hermitian_eigenvalues(eve_avg));
    }
    return entropy_of_spectrum(hermitian_eigenvalues(bob_avg)) - bob_cond;
  }

 private:
  Objective objective_;
  EnsembleParams params_;
  Eigen::Index out_;
  Eigen::Index env_ = 0;
  ComplexMatrix stacked_;
};

struct LocalBest {
  std::vector<double> x;
  double value = -std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
};

// Random restarts of Nelder-Mead ascent on `objective`, each followed by polishing ascents
// from the incumbent. Restart r draws only from substream (seed, r); restarts are split over
// threads but reduced in index order, so the outcome does not depend on the thread count.
template <class Objective, class Init>
LocalBest multistart_ascent(const Objective& objective, std::size_t n_params, const OptimizerConfig& cfg,
                            const Init& init) {
  if (cfg.restarts == 0 || cfg.iterations == 0) throw std::invalid_argument("optimizer needs restarts and iterations");
  std::vector<LocalBest> per_restart(cfg.restarts);

  auto run = [&](std::size_t r) {
    Rng rng = substream(cfg.seed, r);
    std::vector<double> x0 = init(rng, n_params);
    auto negated = [&](std::span<const double> x) { return -objective(x); };
    auto res = detail::nelder_mead_minimize(negated, std::move(x0), cfg.initial_step, cfg.iterations, cfg.tolerance);
    std::size_t evals = res.evaluations;
    double step = cfg.initial_step * 0.25;
    for (std::size_t k = 0; k < cfg.polish_rounds; ++k) {
      auto again = detail::nelder_mead_minimize(negated, res.x, step, cfg.iterations, cfg.tolerance);
      evals += again.evaluations;
      if (again.fx <= res.fx) res = std::move(again);
      step *= 0.25;
    }
    per_restart[r] = LocalBest{std::move(res.x), -res.fx, evals};
  };

  const std::size_t threads = std::clamp<std::size_t>(cfg.threads, 1, cfg.restarts);
  if (threads == 1) {
    for (std::size_t r = 0; r < cfg.restarts; ++r) run(r);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t r = t; r < cfg.restarts; r += threads) run(r);
      });
    }
    for (auto& th : pool) th.join();
  }

  LocalBest best;
  std::size_t total = 0;
  for (auto& candidate : per_restart) {
    total += candidate.evaluations;
    if (candidate.value > best.value) best = candidate;
  }
  best.evaluations = total;
  return best;
}

std::vector<double> gaussian_init(Rng& rng, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = normal(rng);
  return x;
}

EnsembleSearchResult ensemble_search(const QuantumChannel& ch, const OptimizerConfig& cfg, Objective objective) {
  if (ch.in_dim() > kOracleInputCap) {
    throw DimensionError("ensemble search input dimension " + std::to_string(ch.in_dim()) + " exceeds oracle cap " +
                         std::to_string(kOracleInputCap));
  }
  const EnsembleParams params{ch.in_dim(), cfg.ensemble_size == 0 ? ch.in_dim() : cfg.ensemble_size};
  const EnsembleObjective f(ch, objective, params);
  const LocalBest best = multistart_ascent(f, params.size(), cfg, gaussian_init);

  const auto p = params.probabilities(best.x);
  std::vector<std::pair<double, DensityOperator>> items;
  for (std::size_t i = 0; i < params.members; ++i) {
    items.emplace_back(p[i], PureState(ch.in_layout(), params.state(best.x, i)).density());
  }
  CqEnsemble ensemble(std::move(items));
  const double value =
      objective == Objective::private_info ? private_value(ch, ensemble).value : holevo_bob(ch, ensemble).value;
  return EnsembleSearchResult{value, std::move(ensemble), best.evaluations};
}

}  // namespace

EnsembleSearchResult brute_force_p1(const QuantumChannel& ch, const OptimizerConfig& cfg) {
  return ensemble_search(ch, cfg, Objective::private_info);
}

EnsembleSearchResult brute_force_c1(const QuantumChannel& ch, const OptimizerConfig& cfg) {
  return ensemble_search(ch, cfg, Objective::holevo);
}

CqEnsemble pin_flag(const CqEnsemble& ens, std::size_t flag) {
  const SystemLayout& layout = ens.layout();
  if (layout.size() < 1 || flag >= layout.dim(0)) throw std::out_of_range("flag value out of range");
  const auto block = static_cast<Eigen::Index>(layout.total() / layout.dim(0));
  const auto offset = static_cast<Eigen::Index>(flag) * block;

  std::vector<std::pair<double, DensityOperator>> items;
  double kept = 0;
  for (const auto& [p, rho] : ens.items()) {
    const auto n = static_cast<Eigen::Index>(rho.dim());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m.block(offset, offset, block, block) = rho.matrix().block(offset, offset, block, block);
    const double weight = m.trace().real();
    if (weight <= 1e-14 || p <= 0) continue;
    items.emplace_back(p, DensityOperator::assume_valid(layout, m / weight));
    kept += p;
  }
  if (items.empty()) throw std::invalid_argument("no ensemble member has weight on the requested flag");
  for (auto& item : items) item.first /= kept;
  return CqEnsemble(std::move(items));
}

double measured_mutual_information(const CqEnsemble& ens, const std::vector<ComplexMatrix>& povm) {
  const auto& items = ens.items();
  std::vector<double> py(povm.size(), 0.0);
  double conditional = 0;
  for (const auto& [px, rho] : items) {
    std::vector<double> pyx(povm.size());
    double total = 0;
    for (std::size_t y = 0; y < povm.size(); ++y) {
      pyx[y] = std::max(0.0, (povm[y] * rho.matrix()).trace().real());
      total += pyx[y];
    }
    for (double& q : pyx) q /= total;
    for (std::size_t y = 0; y < povm.size(); ++y) py[y] += px * pyx[y];
    conditional += px * shannon_entropy(pyx);
  }
  double sum = 0;
  for (double q : py) sum += q;
  for (double& q : py) q /= sum;
  return shannon_entropy(py) - conditional;
}

namespace {

// Rank-one POVM from vectors v_k: E_k = S^-1/2 v_k v_k^dagger S^-1/2, S = sum v v^dagger.
std::optional<std::vector<ComplexVector>> povm_vectors(std::span<const double> x, std::size_t dim, std::size_t count) {
  const auto d = static_cast<Eigen::Index>(dim);
  std::vector<ComplexVector> v(count, ComplexVector(d));
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < count; ++k) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const std::size_t base = (k * dim + static_cast<std::size_t>(i)) * 2;
      v[k](i) = Complex(x[base], x[base + 1]);
    }
    s.noalias() += v[k] * v[k].adjoint();
  }
  const auto eig = hermitian_eigen(s);
  if (eig.values.minCoeff() < 1e-10 * std::max(1.0, eig.values.maxCoeff())) return std::nullopt;
  const ComplexMatrix inv_sqrt =
      eig.vectors * eig.values.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  for (auto& w : v) w = inv_sqrt * w;
  return v;
}

}  // namespace

PovmSearchResult accessible_info_search(const CqEnsemble& ens, const OptimizerConfig& cfg) {
  const std::size_t dim = ens.layout().total();
  if (dim > kPovmStateCap) {
    throw DimensionError("POVM search state dimension " + std::to_string(dim) + " exceeds cap " +
                         std::to_string(kPovmStateCap));
  }
  const std::size_t count = cfg.ensemble_size == 0 ? dim * dim : std::min(cfg.ensemble_size, dim * dim);
  if (count < 1) throw std::invalid_argument("POVM needs at least one element");

  std::vector<ComplexMatrix> states;
  std::vector<double> probs;
  for (const auto& [p, rho] : ens.items()) {
    probs.push_back(p);
    states.push_back(rho.matrix());
  }

  auto objective = [&](std::span<const double> x) -> double {
    const auto vecs = povm_vectors(x, dim, count);
    if (!vecs) return -1.0;
    std::vector<double> py(count, 0.0);
    double conditional = 0;
    std::vector<double> pyx(count);
    for (std::size_t s = 0; s < states.size(); ++s) {
      for (std::size_t y = 0; y < count; ++y) {
        pyx[y] = std::max(0.0, (*vecs)[y].dot(states[s] * (*vecs)[y]).real());
        py[y] += probs[s] * pyx[y];
      }
      double h = 0;
      for (double q : pyx) {
        if (q > 0) h -= q * std::log2(q);
      }
      conditional += probs[s] * h;
    }
    double h = 0;
    for (double q : py) {
      if (q > 0) h -= q * std::log2(q);
    }
    return h - conditional;
  };

  const LocalBest best = multistart_ascent(objective, 2 * dim * count, cfg, gaussian_init);
  PovmSearchResult out;
  if (const auto vecs = povm_vectors(best.x, dim, count)) {
    for (const auto& w : *vecs) out.elements.push_back(w * w.adjoint());
    out.value = measured_mutual_information(ens, out.elements);
  } else {
    out.elements.push_back(ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
    out.value = 0;
  }
  return out;
}

}  // namespace qcap
