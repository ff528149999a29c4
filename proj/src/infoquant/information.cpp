#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qcap/infoquant.hpp"

namespace qcap {
namespace {

struct Tracker {
  double min_eigenvalue = 0;
  double trace_error = 0;

  double entropy(const DensityOperator& rho) {
    const RealVector ev = hermitian_eigenvalues(rho.matrix());
    min_eigenvalue = std::min(min_eigenvalue, ev.minCoeff());
    trace_error = std::max(trace_error, std::abs(ev.sum() - 1.0));
    return entropy_of_spectrum(ev);
  }

  void fill(InfoResult& r) const {
    r.min_eigenvalue = min_eigenvalue;
    r.trace_error = trace_error;
  }
};

void check_input(const QuantumChannel& ch, std::size_t dim) {
  if (dim != ch.in_dim()) {
    throw std::invalid_argument("input dimension " + std::to_string(dim) + " does not match channel input " +
                                std::to_string(ch.in_dim()));
  }
}

}  // namespace

double InfoResult::component(const std::string& name) const {
  for (const auto& [key, v] : components) {
    if (key == name) return v;
  }
  throw std::out_of_range("no component named " + name);
}

CqEnsemble::CqEnsemble(std::vector<std::pair<double, DensityOperator>> items) : items_(std::move(items)) {
  if (items_.empty()) throw std::invalid_argument("ensemble must be nonempty");
  double sum = 0;
  for (const auto& [p, rho] : items_) {
    if (!(p >= -1e-12)) throw std::invalid_argument("ensemble probability below zero");
    if (!(rho.layout() == items_.front().second.layout())) {
      throw std::invalid_argument("ensemble states must share one layout");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("ensemble probabilities do not sum to 1");
}

DensityOperator CqEnsemble::average() const {
  ComplexMatrix avg = ComplexMatrix::Zero(items_.front().second.matrix().rows(), items_.front().second.matrix().cols());
  for (const auto& [p, rho] : items_) avg += std::max(p, 0.0) * rho.matrix();
  return DensityOperator::assume_valid(layout(), std::move(avg));
}

InfoResult coherent_information(const QuantumChannel& ch, const DensityOperator& rho) {
  check_input(ch, rho.dim());
  Tracker t;
  const double hb = t.entropy(apply(ch, rho));
  const double he = t.entropy(apply(complementary(ch), rho));
  InfoResult r;
  r.value = hb - he;
  r.components = {{"H(B)", hb}, {"H(E)", he}};
  t.fill(r);
  return r;
}

namespace {

InfoResult holevo_impl(const QuantumChannel& ch, const CqEnsemble& ens, const char* name) {
  check_input(ch, ens.layout().total());
  Tracker t;
  double conditional = 0;
  for (const auto& [p, rho] : ens.items()) {
    if (p > 0) conditional += p * t.entropy(apply(ch, rho));
  }
  const double joint = t.entropy(apply(ch, ens.average()));
  InfoResult r;
  r.value = joint - conditional;
  r.components = {{std::string("H(avg ") + name + ")", joint}, {std::string("avg H(") + name + ")", conditional}};
  t.fill(r);
  return r;
}

}  // namespace

InfoResult holevo_bob(const QuantumChannel& ch, const CqEnsemble& ens) {
  InfoResult r = holevo_impl(ch, ens, "B");
  r.components.emplace_back("I(X;B)", r.value);
  return r;
}

InfoResult holevo_eve(const QuantumChannel& ch, const CqEnsemble& ens) {
  InfoResult r = holevo_impl(complementary(ch), ens, "E");
  r.components.emplace_back("I(X;E)", r.value);
  return r;
}

InfoResult private_value(const QuantumChannel& ch, const CqEnsemble& ens) {
  const InfoResult bob = holevo_bob(ch, ens);
  const InfoResult eve = holevo_eve(ch, ens);
  InfoResult r;
  r.value = bob.value - eve.value;
  r.components = {{"I(X;B)", bob.value}, {"I(X;E)", eve.value}};
  r.min_eigenvalue = std::min(bob.min_eigenvalue, eve.min_eigenvalue);
  r.trace_error = std::max(bob.trace_error, eve.trace_error);
  return r;
}

Rational harmonic(long n) {
  if (n < 1) throw std::invalid_argument("harmonic number needs n >= 1");
  Rational sum = 0;
  for (long i = 1; i <= n; ++i) sum += Rational(1, i);
  return sum;
}

double gamma_d(long d) {
  if (d < 1) throw std::invalid_argument("gamma_d needs d >= 1");
  double tail = 0;
  for (long t = d; t >= 2; --t) tail += 1.0 / static_cast<double>(t);
  return std::log(static_cast<double>(d)) - tail;
}

}  // namespace qcap
