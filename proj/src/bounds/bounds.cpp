#include "qcap/bounds.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "qcap/infoquant.hpp"
#include "qcap/qcore.hpp"

namespace qcap {

void BoundParams::validate() const {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (p < 0 || p > Rational(1, 2)) throw std::invalid_argument("p must lie in [0, 1/2]");
  if (log2d <= 0) throw std::invalid_argument("log2 d must be positive");
}

ErasureCapacities erasure_capacity_formulas(const Rational& p, const Rational& log2d) {
  if (p < 0 || p > 1) throw std::invalid_argument("erasure probability must lie in [0, 1]");
  const Rational q = std::max(Rational(0), Rational((1 - 2 * p) * log2d));
  return {q, q, Rational((1 - p) * log2d)};
}

double locking_upper(const Rational& p, long d) {
  if (p < 0 || p > Rational(1, 2)) throw std::invalid_argument("locking bound needs 0 <= p <= 1/2");
  if (d < 1) throw std::invalid_argument("locking bound needs d >= 1");
  const double prob = to_double(p);
  return (1.0 - prob) * std::log2(static_cast<double>(d)) - prob * gamma_d(d) * kLog2E;
}

Rational classical_add_upper(const Rational& c1_of_N, int n, const Rational& p, const Rational& log2d) {
  return c1_of_N + n * (1 - p) * log2d;
}

std::string to_string(UpperBranch b) {
  switch (b) {
    case UpperBranch::rocket_only:
      return "rocket";
    case UpperBranch::mixed:
      return "mixed";
    case UpperBranch::erasure_only:
      return "erasure";
  }
  return "?";
}

P1Upper p1_upper(const BoundParams& params, int k) {
  if (k < 1) throw std::invalid_argument("p1_upper needs k >= 1");
  params.validate();
  const Rational two_n(2 * params.n);
  const Rational erasure_c1 = (1 - params.p) * params.log2d;

  // Ties keep the branch with fewer erasure uses.
  P1Upper best{Rational(two_n * k), UpperBranch::rocket_only, 0};
  for (int i = 1; i < k; ++i) {
    const Rational v = two_n * (k - i) + i * erasure_c1;
    if (v > best.per_use) best = P1Upper{v, UpperBranch::mixed, i};
  }
  const Rational erasure_only = k * erasure_capacity_formulas(params.p, params.log2d).private_;
  if (erasure_only > best.per_use) best = P1Upper{erasure_only, UpperBranch::erasure_only, k};
  best.per_use /= k;
  return best;
}

Rational q_lower(const BoundParams& params, int j) {
  if (j < 1) throw std::invalid_argument("q_lower needs j >= 1");
  return Rational(j - 1, j) * (1 - params.p) * params.log2d;
}

BoundParams theorem_params(int n) {
  const Rational p(11, 24);
  return BoundParams{n, p, Rational(4 * n * n) / (1 - 2 * p)};
}

TheoremRow theorem_row(int n, int k) {
  if (n < 1) throw std::invalid_argument("theorem row needs n >= 1");
  if (k < 1) throw std::invalid_argument("theorem row needs k >= 1");
  const BoundParams bp = theorem_params(n);
  const Rational erasure_c1 = (1 - bp.p) * bp.log2d;
  TheoremRow row;
  row.k = k;
  row.u1 = Rational(2 * n, k);
  // Mixed branch maximized over 1 <= i <= k-1; for k = 1 the displayed term 2n applies.
  if (k == 1) {
    row.u2 = Rational(2 * n);
  } else {
    Rational best = 0;
    for (int i = 1; i < k; ++i) best = std::max(best, Rational((2 * n * (k - i) + i * erasure_c1) / k));
    row.u2 = best;
  }
  row.u3 = erasure_capacity_formulas(bp.p, bp.log2d).private_;
  row.lower = q_lower(bp, k + 1);
  row.d1 = row.lower - row.u1;
  row.d2 = row.lower - row.u2;
  row.d3 = row.lower - row.u3;
  row.pass = row.d1 > 0 && row.d2 > 0 && row.d3 > 0;
  return row;
}

TheoremReport theorem_report(int n) {
  if (n < 2) throw std::invalid_argument("theorem report needs n >= 2");
  TheoremReport report{theorem_params(n), {}};
  for (int k = 1; k < n; ++k) report.rows.push_back(theorem_row(n, k));
  return report;
}

Rational theorem_d1_closed_form(int n, int k) { return Rational(26 * k * n * n, k + 1) - Rational(2 * n, k); }

Rational theorem_d2_closed_form(int n, int k) { return Rational(-2 * n * (k - 13 * n + 1), k * (k + 1)); }

Rational theorem_d3_closed_form(int n, int k) { return Rational(2 * (11 * k - 2) * n * n, k + 1); }

bool TheoremReport::pass() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const TheoremRow& r) { return r.pass; });
}

std::string TheoremReport::to_csv() const {
  std::ostringstream os;
  os << "n,k,U1,U2,U3,L,D1,D2,D3,pass\n";
  for (const auto& r : rows) {
    os << params.n << ',' << r.k << ',' << qcap::to_string(r.u1) << ',' << qcap::to_string(r.u2) << ','
       << qcap::to_string(r.u3) << ',' << qcap::to_string(r.lower) << ',' << qcap::to_string(r.d1) << ','
       << qcap::to_string(r.d2) << ',' << qcap::to_string(r.d3) << ',' << (r.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

nlohmann::json TheoremReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"n", params.n},
                         {"k", r.k},
                         {"U1", qcap::to_string(r.u1)},
                         {"U2", qcap::to_string(r.u2)},
                         {"U3", qcap::to_string(r.u3)},
                         {"L", qcap::to_string(r.lower)},
                         {"D1", qcap::to_string(r.d1)},
                         {"D2", qcap::to_string(r.d2)},
                         {"D3", qcap::to_string(r.d3)},
                         {"pass", r.pass},
                         {"unit", "rational-bits"}});
  }
  return {{"n", params.n},
          {"p", qcap::to_string(params.p)},
          {"log2d", qcap::to_string(params.log2d)},
          {"unit", "rational-bits"},
          {"rows", rows_json},
          {"pass", pass()}};
}

Rational conjecture_threshold(const Rational& p, int n) {
  if (n < 2) throw std::invalid_argument("conjecture threshold needs n >= 2");
  if (p <= 0 || p > Rational(1, 2)) throw std::invalid_argument("conjecture threshold needs 0 < p <= 1/2");
  return (1 - p) / (p * (n - 1));
}

}  // namespace qcap
