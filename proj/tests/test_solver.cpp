#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gridplan/solver/backend.hpp"
#include "gridplan/solver/mip.hpp"

using namespace gridplan::solver;

namespace {

// Row activity a'x.
double activity(const OptModel& m, int row, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& [j, c] : m.rows[row].terms) s += c * x[j];
  return s;
}

double primal_residual(const OptModel& m, const SolveOutcome& r) {
  double worst = 0.0;
  for (int i = 0; i < static_cast<int>(m.rows.size()); ++i) {
    const double a = activity(m, i, r.x);
    switch (m.rows[i].sense) {
      case RowSense::LessEqual: worst = std::max(worst, a - m.rows[i].rhs); break;
      case RowSense::GreaterEqual: worst = std::max(worst, m.rows[i].rhs - a); break;
      case RowSense::Equal: worst = std::max(worst, std::fabs(a - m.rows[i].rhs)); break;
    }
  }
  for (std::size_t j = 0; j < m.vars.size(); ++j) {
    worst = std::max(worst, m.vars[j].lb - r.x[j]);
    worst = std::max(worst, r.x[j] - m.vars[j].ub);
  }
  return worst;
}

// General dual objective of a bounded LP: b'y plus bound terms of the
// nonbasic reduced costs, reconstructed from y.
double dual_objective(const OptModel& m, const SolveOutcome& r) {
  double v = 0.0;
  for (std::size_t i = 0; i < m.rows.size(); ++i) v += r.row_dual[i] * m.rows[i].rhs;
  for (std::size_t j = 0; j < m.vars.size(); ++j) {
    double d = m.vars[j].obj;
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
      // dense scan is fine at test scale
      for (const auto& [jj, c] : m.rows[i].terms)
        if (jj == static_cast<int>(j)) d -= r.row_dual[i] * c;
    }
    if (std::fabs(d) <= 1e-7) continue;
    if (d > 0)
      v += d * m.vars[j].lb;
    else
      v += d * m.vars[j].ub;
  }
  return v;
}

}  // namespace

TEST_CASE("lp: single active lower bound with unit dual") {
  OptModel m;
  int x = m.add_var("x", -kInf, kInf, 1.0);
  m.add_row("c", {{x, 1.0}}, RowSense::GreaterEqual, 3.0);
  auto r = solve_lp(m);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[x] == doctest::Approx(3.0));
  CHECK(r.objective == doctest::Approx(3.0));
  CHECK(r.row_dual[0] == doctest::Approx(1.0));
}

TEST_CASE("lp: maximize via negated objective") {
  OptModel m;
  int x = m.add_var("x", -kInf, kInf, -1.0);
  m.add_row("c", {{x, 1.0}}, RowSense::LessEqual, 2.0);
  auto r = solve_lp(m);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[x] == doctest::Approx(2.0));
  CHECK(r.objective == doctest::Approx(-2.0));
}

TEST_CASE("lp: conflicting rows are infeasible") {
  OptModel m;
  int x = m.add_var("x", -kInf, kInf, 1.0);
  m.add_row("lo", {{x, 1.0}}, RowSense::GreaterEqual, 3.0);
  m.add_row("hi", {{x, 1.0}}, RowSense::LessEqual, 1.0);
  auto r = solve_lp(m);
  CHECK(r.status == SolveStatus::Infeasible);
}

TEST_CASE("lp: unbounded below is reported") {
  OptModel m;
  m.add_var("x", -kInf, kInf, 1.0);
  auto r = solve_lp(m);
  CHECK(r.status == SolveStatus::Unbounded);
}

TEST_CASE("lp: equality rows and fixed variables") {
  OptModel m;
  int x = m.add_var("x", 0.0, 10.0, 2.0);
  int y = m.add_var("y", 1.0, 1.0, 5.0);
  m.add_row("bal", {{x, 1.0}, {y, 1.0}}, RowSense::Equal, 4.0);
  auto r = solve_lp(m);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[x] == doctest::Approx(3.0));
  CHECK(r.x[y] == doctest::Approx(1.0));
  CHECK(r.objective == doctest::Approx(11.0));
}

TEST_CASE("lp: malformed models are rejected before the solve") {
  OptModel m;
  m.add_var("x", 3.0, 1.0, 1.0);
  CHECK_THROWS_AS(solve_lp(m), std::invalid_argument);

  OptModel m2;
  m2.add_var("x", 0.0, 1.0, 1.0);
  m2.add_row("bad", {{5, 1.0}}, RowSense::LessEqual, 1.0);
  CHECK_THROWS_AS(solve_lp(m2), std::invalid_argument);

  OptModel m3;
  m3.add_var("x", 0.0, 1.0, 1.0, true);
  CHECK_THROWS_AS(solve_lp(m3), std::invalid_argument);
}

TEST_CASE("lp: random bounded instances satisfy duality and determinism") {
  std::mt19937 rng(20240901);
  std::uniform_real_distribution<double> coef(-4.0, 4.0);
  std::uniform_real_distribution<double> cost(-5.0, 5.0);
  std::uniform_int_distribution<int> senses(0, 2);

  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 8;
    const int rows = 2 + trial % 10;
    OptModel m;
    std::uniform_real_distribution<double> ud(1.0, 9.0);
    std::vector<double> x0(n);
    for (int j = 0; j < n; ++j) {
      const double u = ud(rng);
      m.add_var("x" + std::to_string(j), 0.0, u, cost(rng));
      x0[j] = 0.5 * u;  // interior point used to make rows consistent
    }
    for (int i = 0; i < rows; ++i) {
      std::vector<std::pair<int, double>> terms;
      double act = 0.0;
      for (int j = 0; j < n; ++j) {
        if ((j + i + trial) % 2 == 0) continue;
        const double c = coef(rng);
        terms.emplace_back(j, c);
        act += c * x0[j];
      }
      if (terms.empty()) continue;
      switch (senses(rng)) {
        case 0: m.add_row("r" + std::to_string(i), terms, RowSense::LessEqual, act + 1.0); break;
        case 1: m.add_row("r" + std::to_string(i), terms, RowSense::GreaterEqual, act - 1.0); break;
        default: m.add_row("r" + std::to_string(i), terms, RowSense::Equal, act); break;
      }
    }
    auto r = solve_lp(m);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(primal_residual(m, r) <= 1e-6);
    const double dual = dual_objective(m, r);
    CHECK(std::fabs(dual - r.objective) <= 1e-6 * (1.0 + std::fabs(r.objective)));

    // complementary slackness: dual * row slack vanishes
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
      if (m.rows[i].sense == RowSense::Equal) continue;
      const double slack = m.rows[i].rhs - activity(m, static_cast<int>(i), r.x);
      CHECK(std::fabs(slack * r.row_dual[i]) <= 1e-6 * (1.0 + std::fabs(r.objective)));
    }

    auto r2 = solve_lp(m);
    CHECK(std::fabs(r2.objective - r.objective) <= 1e-9);
  }
}

TEST_CASE("mip: ceiling of a fractional bound") {
  OptModel m;
  int y = m.add_var("y", -kInf, kInf, 1.0, true);
  m.add_row("c", {{y, 1.0}}, RowSense::GreaterEqual, 2.3);
  auto r = solve_mip(m, 1e-4, 30.0);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[y] == doctest::Approx(3.0));
}

TEST_CASE("mip: binary packing picks the heavier item") {
  OptModel m;
  int a = m.add_var("a", 0.0, 1.0, -3.0, true);
  int b = m.add_var("b", 0.0, 1.0, -2.0, true);
  m.add_row("c", {{a, 1.0}, {b, 1.0}}, RowSense::LessEqual, 1.0);
  auto r = solve_mip(m, 1e-4, 30.0);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[a] == doctest::Approx(1.0));
  CHECK(r.x[b] == doctest::Approx(0.0));
  CHECK(r.objective == doctest::Approx(-3.0));
}

TEST_CASE("mip: reported gap honors the tolerance") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> cost(1.0, 10.0);
  OptModel m;
  std::vector<std::pair<int, double>> cover;
  for (int j = 0; j < 12; ++j) {
    cover.emplace_back(m.add_var("u" + std::to_string(j), 0.0, 5.0, cost(rng), true),
                       1.0 + (j % 3));
  }
  m.add_row("cover", cover, RowSense::GreaterEqual, 17.3);
  auto r = solve_mip(m, 1e-3, 30.0);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.rel_gap <= 1e-3);
  CHECK(r.best_bound <= r.objective + 1e-9);
}

TEST_CASE("mip: infeasible integer box") {
  OptModel m;
  int y = m.add_var("y", 0.2, 0.8, 1.0, true);
  (void)y;
  auto r = solve_mip(m, 1e-4, 30.0);
  CHECK(r.status == SolveStatus::Infeasible);
}

TEST_CASE("lp format dump is parseable text") {
  OptModel m;
  int x = m.add_var("x", 0.0, 4.0, 1.5);
  int y = m.add_var("y", -kInf, kInf, -1.0, true);
  m.add_row("r0", {{x, 2.0}, {y, -1.0}}, RowSense::LessEqual, 7.0);
  std::ostringstream os;
  write_lp_format(m, os);
  const std::string s = os.str();
  CHECK(s.find("Minimize") != std::string::npos);
  CHECK(s.find("Subject To") != std::string::npos);
  CHECK(s.find("r0:") != std::string::npos);
  CHECK(s.find("Generals") != std::string::npos);
  CHECK(s.find("End") != std::string::npos);
}
