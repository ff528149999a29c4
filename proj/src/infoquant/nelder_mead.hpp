#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qcap::detail {

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0;
  std::size_t evaluations = 0;
};

/// Minimizes f from x0 with an axis-aligned initial simplex of edge `step`.
/// Uses the dimension-adaptive coefficients of Gao & Han (2012). Stops after `max_evals`
/// evaluations or once the spread of simplex values falls below `tolerance`.
NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> x0, double step, std::size_t max_evals,
                                      double tolerance);

}  // namespace qcap::detail
