#include <algorithm>
#include <cmath>
#include <thread>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qcap/infoquant.hpp"
#include "qcap/random.hpp"

namespace qcap {
namespace {

using Wide = boost::multiprecision::cpp_bin_float_100;

constexpr double kCoincidence = 1e-10;
constexpr double kSeparation = 1e-7;

// -sum_i l_i^d ln l_i / prod_{j != i} (l_i - l_j), nats. Nodes must be pairwise distinct.
Wide subentropy_nats_distinct(const std::vector<Wide>& nodes) {
  const std::size_t d = nodes.size();
  Wide sum = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (nodes[i] <= 0) continue;  // x^d ln x -> 0
    Wide denom = 1;
    for (std::size_t k = 0; k < d; ++k) {
      if (k != i) denom *= nodes[i] - nodes[k];
    }
    sum += boost::multiprecision::pow(nodes[i], static_cast<int>(d)) * boost::multiprecision::log(nodes[i]) / denom;
  }
  return -sum;
}

// Sorted spectrum with every run of coincident values spread to c, c + eps, c + 2 eps, ...
std::vector<Wide> separated(const std::vector<double>& sorted, const Wide& eps, bool& had_cluster) {
  std::vector<Wide> nodes;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t k = i + 1;
    while (k < sorted.size() && sorted[k] - sorted[k - 1] < kCoincidence) ++k;
    Wide centre = 0;
    for (std::size_t m = i; m < k; ++m) centre += sorted[m];
    centre /= static_cast<int>(k - i);
    if (k - i > 1) had_cluster = true;
    for (std::size_t m = i; m < k; ++m) nodes.push_back(centre + eps * static_cast<int>(m - i));
    i = k;
  }
  return nodes;
}

}  // namespace

double subentropy_of_spectrum(const RealVector& eigenvalues) {
  std::vector<double> sorted(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
  for (double& x : sorted) x = std::clamp(x, 0.0, 1.0);
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() <= 1) return 0.0;

  bool had_cluster = false;
  const Wide eps(kSeparation);
  const Wide coarse = subentropy_nats_distinct(separated(sorted, eps, had_cluster));
  Wide nats = coarse;
  if (had_cluster) {
    bool unused = false;
    const Wide fine = subentropy_nats_distinct(separated(sorted, eps / 2, unused));
    nats = 2 * fine - coarse;  // first-order Richardson in eps
  }
  return std::max(0.0, nats.convert_to<double>() * kLog2E);
}

double subentropy(const DensityOperator& rho) { return subentropy_of_spectrum(hermitian_eigenvalues(rho.matrix())); }

double haar_measured_entropy_exact(const DensityOperator& rho) {
  const double harmonic_minus_one = to_double(harmonic(static_cast<long>(rho.dim()))) - 1.0;
  return subentropy(rho) + harmonic_minus_one * kLog2E;
}

MonteCarloEstimate haar_measured_entropy(const DensityOperator& rho, std::size_t samples, std::uint64_t seed,
                                         std::size_t threads) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  const std::size_t d = rho.dim();

  // Welford accumulators per chunk, merged in chunk order.
  struct Partial {
    double count = 0;
    double mean = 0;
    double m2 = 0;
  };
  std::vector<Partial> partial(chunks);

  auto run_chunk = [&](std::size_t c) {
    Rng rng = substream(seed, c);
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(samples, begin + kChunk);
    std::vector<double> probs(d);
    Partial acc;
    for (std::size_t s = begin; s < end; ++s) {
      const ComplexMatrix u = random_unitary(d, rng);
      double total = 0;
      for (std::size_t i = 0; i < d; ++i) {
        const auto col = u.col(static_cast<Eigen::Index>(i));
        probs[i] = std::max(0.0, col.dot(rho.matrix() * col).real());
        total += probs[i];
      }
      double h = 0;
      for (double q : probs) {
        const double x = q / total;
        if (x > 0) h -= x * std::log2(x);
      }
      acc.count += 1;
      const double delta = h - acc.mean;
      acc.mean += delta / acc.count;
      acc.m2 += delta * (h - acc.mean);
    }
    partial[c] = acc;
  };

  const std::size_t workers = std::clamp<std::size_t>(threads, 1, chunks);
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t c = t; c < chunks; c += workers) run_chunk(c);
      });
    }
    for (auto& th : pool) th.join();
  }

  Partial total;
  for (const auto& p : partial) {
    const double count = total.count + p.count;
    const double delta = p.mean - total.mean;
    total.mean += delta * p.count / count;
    total.m2 += p.m2 + delta * delta * total.count * p.count / count;
    total.count = count;
  }
  const auto n = static_cast<double>(samples);
  const double var = samples > 1 ? total.m2 / (n - 1) : 0.0;
  return MonteCarloEstimate{total.mean, std::sqrt(var / n), samples};
}

}  // namespace qcap
