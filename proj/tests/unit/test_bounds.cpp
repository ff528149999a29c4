#include <catch2/catch.hpp>

#include "qcap/bounds.hpp"
#include "qcap/infoquant.hpp"

using namespace qcap;

namespace {

BoundParams params(int n, Rational p, Rational log2d) { return BoundParams{n, std::move(p), std::move(log2d)}; }

}  // namespace

TEST_CASE("erasure capacity formulas", "[bounds]") {
  const auto a = erasure_capacity_formulas(Rational(1, 4), Rational(1));
  CHECK(a.quantum == Rational(1, 2));
  CHECK(a.private_ == Rational(1, 2));
  CHECK(a.classical == Rational(3, 4));
  CHECK(erasure_capacity_formulas(Rational(1, 2), Rational(7)).quantum == 0);
  const auto c = erasure_capacity_formulas(Rational(3, 5), Rational(10));
  CHECK(c.quantum == 0);
  CHECK(c.private_ == 0);
  CHECK(c.classical == 4);
}

TEST_CASE("locking_upper", "[bounds]") {
  for (long d : {1L, 2L, 5L, 64L}) CHECK(locking_upper(Rational(0), d) == Approx(std::log2(double(d))));
  CHECK(locking_upper(Rational(1, 2), 2) == Approx(0.360674).margin(1e-6));
  CHECK(locking_upper(Rational(1, 2), 2) == Approx(0.36067376022224085).margin(1e-12));
  CHECK(locking_upper(Rational(1, 2), 1) == 0.0);
  CHECK_THROWS_AS(locking_upper(Rational(3, 5), 2), std::invalid_argument);
  CHECK_THROWS_AS(locking_upper(Rational(1, 4), 0), std::invalid_argument);
}

TEST_CASE("classical_add_upper", "[bounds]") {
  CHECK(classical_add_upper(Rational(2), 1, Rational(1, 4), Rational(1)) == Rational(11, 4));
  CHECK(classical_add_upper(Rational(0), 5, Rational(1), Rational(9)) == 0);
  // Rocket part 2n plus (k - 1) erasure uses reproduces the mixed branch at i = k - 1.
  const int n = 3;
  const int k = 4;
  const BoundParams bp = theorem_params(n);
  const Rational mixed = classical_add_upper(Rational(2 * n), k - 1, bp.p, bp.log2d) / k;
  CHECK(theorem_row(n, k).u2 == mixed);
}

TEST_CASE("p1_upper", "[bounds]") {
  const BoundParams bp = params(2, Rational(11, 24), Rational(192));
  const P1Upper k1 = p1_upper(bp, 1);
  CHECK(k1.per_use == 16);
  CHECK(k1.branch == UpperBranch::erasure_only);

  // (1/2) max(2kn = 8, 2n + (1-p) log2 d = 4 + 104, k (1-2p) log2 d = 32) = 54.
  const P1Upper k2 = p1_upper(bp, 2);
  CHECK(k2.per_use == 54);
  CHECK(k2.branch == UpperBranch::mixed);
  CHECK(k2.erasure_uses == 1);

  SECTION("p = 1/2 collapses the erasure branch") {
    const BoundParams half = params(2, Rational(1, 2), Rational(1));
    CHECK(erasure_capacity_formulas(half.p, half.log2d).private_ == 0);
    const P1Upper r = p1_upper(half, 3);
    CHECK(r.branch == UpperBranch::rocket_only);
    CHECK(r.per_use == 4);
  }
  SECTION("branch endpoints") {
    // Erasure-only branch equals k * P(erasure) / k; rocket-only equals 2n per use.
    const BoundParams e = params(1, Rational(1, 10), Rational(100));
    CHECK(p1_upper(e, 3).per_use == erasure_capacity_formulas(e.p, e.log2d).private_);
    const BoundParams r = params(5, Rational(1, 2), Rational(1));
    CHECK(p1_upper(r, 4).per_use == 10);
  }
  CHECK_THROWS_AS(p1_upper(bp, 0), std::invalid_argument);
  CHECK_THROWS_AS(p1_upper(params(0, Rational(1, 4), Rational(1)), 1), std::invalid_argument);
  CHECK_THROWS_AS(p1_upper(params(1, Rational(3, 4), Rational(1)), 1), std::invalid_argument);
}

TEST_CASE("q_lower", "[bounds]") {
  CHECK(q_lower(params(1, Rational(1, 4), Rational(1)), 1) == 0);
  CHECK(q_lower(params(1, Rational(1, 4), Rational(1)), 2) == Rational(3, 8));
  CHECK(q_lower(params(2, Rational(11, 24), Rational(192)), 2) == 52);
  CHECK_THROWS_AS(q_lower(params(1, Rational(1, 4), Rational(1)), 0), std::invalid_argument);

  const BoundParams bp = theorem_params(4);
  for (int j = 2; j < 30; ++j) CHECK(q_lower(bp, j) / q_lower(bp, j + 1) < 1);

  SECTION("desk-scale agreement with the simulated witness") {
    const BoundParams desk = params(2, Rational(1, 4), Rational(1));
    for (int j : {2, 3}) {
      const double simulated = witness_coherent_info(2, desk.p, 2, j).component("rate");
      CHECK(simulated == Approx(to_double(q_lower(desk, j))).margin(1e-6));
    }
  }
}

TEST_CASE("theorem_report", "[bounds]") {
  const TheoremReport r2 = theorem_report(2);
  CHECK(r2.params.p == Rational(11, 24));
  CHECK(r2.params.log2d == 192);
  REQUIRE(r2.rows.size() == 1);
  const TheoremRow& row = r2.rows[0];
  CHECK(row.u1 == 4);
  CHECK(row.u2 == 4);
  CHECK(row.u3 == 16);
  CHECK(row.lower == 52);
  CHECK(row.d1 == 48);
  CHECK(row.d2 == 48);
  CHECK(row.d3 == 36);
  CHECK(row.pass);
  CHECK(r2.pass());

  const TheoremReport r3 = theorem_report(3);
  REQUIRE(r3.rows.size() == 2);
  CHECK(r3.rows[0].u1 == 6);
  CHECK(r3.rows[0].lower == 117);
  CHECK(r3.rows[0].d3 == 81);
  CHECK(r3.rows[1].u1 == 3);
  CHECK(r3.rows[1].u2 == 120);
  CHECK(r3.rows[1].lower == 156);
  CHECK(r3.rows[1].d2 == 36);
  CHECK(r3.rows[1].d3 == 120);

  CHECK_THROWS_AS(theorem_report(1), std::invalid_argument);

  SECTION("closed-form differences and positivity for 2 <= n <= 64") {
    for (int n = 2; n <= 64; ++n) {
      const TheoremReport r = theorem_report(n);
      CHECK(r.params.log2d == 48 * n * n);
      CHECK(r.rows.size() == static_cast<std::size_t>(n - 1));
      for (const auto& x : r.rows) {
        CHECK(x.d1 == theorem_d1_closed_form(n, x.k));
        CHECK(x.d2 == theorem_d2_closed_form(n, x.k));
        CHECK(x.d3 == theorem_d3_closed_form(n, x.k));
        CHECK(x.d1 == x.lower - x.u1);
        CHECK(x.u3 == 4 * n * n);
        CHECK(x.lower == Rational(26 * x.k * n * n, x.k + 1));
        CHECK(x.pass);
        // Also against the regularized rocket-only branch 2n.
        CHECK(x.lower - 2 * n > 0);
      }
      CHECK(r.pass());
    }
  }
}

TEST_CASE("theorem report serialization", "[bounds]") {
  const TheoremReport r = theorem_report(2);
  CHECK(r.to_csv() == "n,k,U1,U2,U3,L,D1,D2,D3,pass\n2,1,4,4,16,52,48,48,36,true\n");
  const auto j = r.to_json();
  CHECK(j.at("unit") == "rational-bits");
  CHECK(j.at("rows").at(0).at("U1") == "4");
  CHECK(j.at("rows").at(0).at("unit") == "rational-bits");
  CHECK(j.at("pass") == true);
  const TheoremReport r3 = theorem_report(3);
  CHECK(r3.to_json().at("rows").at(1).at("U1") == "3");
  CHECK(theorem_report(5).to_csv().find("5,2,5,") != std::string::npos);
}

TEST_CASE("conjecture_threshold", "[bounds]") {
  CHECK(conjecture_threshold(Rational(11, 24), 13) == Rational(13, 132));
  CHECK(conjecture_threshold(Rational(1, 2), 2) == 1);
  for (int n = 2; n < 50; ++n) {
    CHECK(conjecture_threshold(Rational(11, 24), n + 1) < conjecture_threshold(Rational(11, 24), n));
  }
  CHECK_THROWS_AS(conjecture_threshold(Rational(1, 4), 1), std::invalid_argument);
  CHECK_THROWS_AS(conjecture_threshold(Rational(0), 3), std::invalid_argument);
}
