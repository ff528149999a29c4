#pragma once

// Closed-form capacity bounds and the interleaving check, in exact rational arithmetic.
// The output dimension d enters only through log2(d), so no matrix is ever built.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcap/rational.hpp"

namespace qcap {

struct BoundParams {
  int n = 1;
  Rational p;      // erasure probability, in [0, 1/2]
  Rational log2d;  // bits, > 0

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct ErasureCapacities {
  Rational quantum;    // max(0, (1 - 2p) log2 d)
  Rational private_;   // equal to quantum for degradable erasure
  Rational classical;  // (1 - p) log2 d
};

ErasureCapacities erasure_capacity_formulas(const Rational& p, const Rational& log2d);

/// (1 - p) log2 d - p gamma_d log2 e. Throws std::invalid_argument for p > 1/2 or d < 1.
double locking_upper(const Rational& p, long d);

/// c1_of_N + n (1 - p) log2 d.
Rational classical_add_upper(const Rational& c1_of_N, int n, const Rational& p, const Rational& log2d);

enum class UpperBranch { rocket_only, mixed, erasure_only };
std::string to_string(UpperBranch b);

struct P1Upper {
  Rational per_use;
  UpperBranch branch = UpperBranch::rocket_only;
  int erasure_uses = 0;  // the maximizing i
};

/// Per-use upper bound on P^(1) of k uses, maximized over the number i of erasure choices:
/// i = 0 -> 2kn; 0 < i < k -> 2n(k - i) + i (1 - p) log2 d; i = k -> k P(erasure).
P1Upper p1_upper(const BoundParams& params, int k);

/// Per-use coherent information of the witness over j uses: (j - 1)(1 - p) log2 d / j.
Rational q_lower(const BoundParams& params, int j);

struct TheoremRow {
  int k = 0;
  Rational u1, u2, u3, lower;
  Rational d1, d2, d3;
  bool pass = false;
};

struct TheoremReport {
  BoundParams params;
  std::vector<TheoremRow> rows;

  bool pass() const;
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Parameters p = 11/24, log2 d = 4n^2 / (1 - 2p) = 48 n^2.
BoundParams theorem_params(int n);

/// One interleaving row for any k >= 1 under theorem_params(n).
TheoremRow theorem_row(int n, int k);

/// Rows k = 1..n-1 with U1 = 2n/k, U2 the mixed bound, U3 = 4n^2, L = q_lower(k+1), Di = L - Ui.
TheoremReport theorem_report(int n);

/// Closed-form factored differences, used as an independent algebraic route.
Rational theorem_d1_closed_form(int n, int k);
Rational theorem_d2_closed_form(int n, int k);
Rational theorem_d3_closed_form(int n, int k);

/// (1 - p) / (p (n - 1)).
Rational conjecture_threshold(const Rational& p, int n);

}  // namespace qcap
