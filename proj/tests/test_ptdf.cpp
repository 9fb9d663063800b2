#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "gridplan/ptdf/ptdf.hpp"

using namespace gridplan;
using gpfix::make_f3;

namespace {

std::vector<double> balanced_injection(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> d(-50.0, 50.0);
  std::vector<double> inj(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (auto& v : inj) {
    v = d(rng);
    sum += v;
  }
  for (auto& v : inj) v -= sum / n;
  return inj;
}

}  // namespace

TEST_CASE("ptdf: two buses, one line, all power crosses it") {
  grid::Network net;
  net.buses.resize(2);
  net.buses[0].id = 1;
  net.buses[1].id = 2;
  grid::Branch br;
  br.id = 1;
  br.from_bus = 1;
  br.to_bus = 2;
  br.reactance_pu = 0.07;
  br.thermal_limit_mw = 100;
  net.branches = {br};
  net.slack_bus = 2;
  auto ptdf = ptdf::compute_ptdf(net);
  CHECK(ptdf.entry(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ptdf.entry(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("ptdf: triangle split is exact") {
  auto net = make_f3();
  auto ptdf = ptdf::compute_ptdf(net);
  // one unit injected at bus 1 returns at the slack (bus 3): two-thirds on
  // the direct line, one-third across the two-hop path
  CHECK(std::fabs(ptdf.entry(1, 0) - 2.0 / 3.0) <= 1e-9);  // line 1-3
  CHECK(std::fabs(ptdf.entry(0, 0) - 1.0 / 3.0) <= 1e-9);  // line 1-2
  CHECK(std::fabs(ptdf.entry(2, 0) - 1.0 / 3.0) <= 1e-9);  // line 2-3
  // slack column identically zero
  for (int e = 0; e < 3; ++e) CHECK(ptdf.entry(e, 2) == 0.0);
}

TEST_CASE("ptdf: triangle flows by superposition") {
  auto net = make_f3();
  auto ptdf = ptdf::compute_ptdf(net);
  auto flows = ptdf.flows({90.0, -90.0, 0.0});
  CHECK(flows[0] == doctest::Approx(60.0));   // 1-2
  CHECK(flows[1] == doctest::Approx(30.0));   // 1-3
  CHECK(flows[2] == doctest::Approx(-30.0));  // 2-3
  // against the independent angle oracle
  auto oracle = gpfix::angle_flows(net, {90.0, -90.0, 0.0});
  for (int e = 0; e < 3; ++e) CHECK(std::fabs(flows[static_cast<std::size_t>(e)] - oracle[static_cast<std::size_t>(e)]) <= 1e-9);
}

TEST_CASE("ptdf: zero injection gives zero flows; unbalanced is rejected") {
  auto net = make_f3();
  auto ptdf = ptdf::compute_ptdf(net);
  auto flows = ptdf.flows({0.0, 0.0, 0.0});
  for (double f : flows) CHECK(f == doctest::Approx(0.0));
  CHECK_THROWS_AS(ptdf.flows({1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("ptdf: random networks match the angle formulation") {
  std::mt19937 rng(5150);
  for (int trial = 0; trial < 20; ++trial) {
    gpfix::RandomNetOptions opt;
    opt.n_buses = 5 + trial % 26;  // up to 30 buses
    opt.extra_branches = 2 + trial % 7;
    auto net = gpfix::random_network(rng, opt);
    auto ptdf = ptdf::compute_ptdf(net);
    auto inj = balanced_injection(rng, net.n_buses());
    auto flows = ptdf.flows(inj);
    auto oracle = gpfix::angle_flows(net, inj);
    for (std::size_t e = 0; e < flows.size(); ++e)
      CHECK(std::fabs(flows[e] - oracle[e]) <= 1e-6);

    // every entry magnitude bounded by one (no phase shifters)
    for (int e = 0; e < net.n_branches(); ++e)
      for (const auto& [b, v] : ptdf.row(e)) CHECK(std::fabs(v) <= 1.0 + 1e-9);

    // flows are slack-independent even though entries are not
    grid::Network other = net;
    other.slack_bus = net.slack_bus == 1 ? net.n_buses() : 1;
    auto ptdf2 = ptdf::compute_ptdf(other);
    auto flows2 = ptdf2.flows(inj);
    for (std::size_t e = 0; e < flows.size(); ++e)
      CHECK(std::fabs(flows[e] - flows2[e]) <= 1e-6);
  }
}

TEST_CASE("ptdf: superposition and nodal balance") {
  std::mt19937 rng(77);
  gpfix::RandomNetOptions opt;
  opt.n_buses = 9;
  auto net = gpfix::random_network(rng, opt);
  auto ptdf = ptdf::compute_ptdf(net);
  auto x = balanced_injection(rng, net.n_buses());
  auto y = balanced_injection(rng, net.n_buses());
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = 2.0 * x[i] - 0.5 * y[i];
  auto fx = ptdf.flows(x), fy = ptdf.flows(y), fz = ptdf.flows(z);
  for (std::size_t e = 0; e < fx.size(); ++e)
    CHECK(fz[e] == doctest::Approx(2.0 * fx[e] - 0.5 * fy[e]).epsilon(1e-9));

  // nodal balance bus by bus
  for (int i = 0; i < net.n_buses(); ++i) {
    double net_out = 0.0;
    for (int e = 0; e < net.n_branches(); ++e) {
      if (net.branches[static_cast<std::size_t>(e)].from_bus == i + 1) net_out += fx[static_cast<std::size_t>(e)];
      if (net.branches[static_cast<std::size_t>(e)].to_bus == i + 1) net_out -= fx[static_cast<std::size_t>(e)];
    }
    CHECK(std::fabs(net_out - x[static_cast<std::size_t>(i)]) <= 1e-6);
  }
}

TEST_CASE("ptdf: cutoff sparsification") {
  auto net = make_f3();
  auto dense = ptdf::compute_ptdf(net);

  // k_p = 0 is the identity
  auto same = ptdf::sparsify_ptdf(dense, 0.0);
  CHECK(same.nnz_after_cutoff() == dense.nnz_after_cutoff());
  CHECK(same.reduction_ratio() == doctest::Approx(0.0));

  // on the triangle every entry is at least 1/3, so 0.005 prunes nothing
  auto cut = ptdf::sparsify_ptdf(dense, 0.005);
  CHECK(cut.reduction_ratio() == doctest::Approx(0.0));
  CHECK(cut.cutoff() == doctest::Approx(0.005));

  // a large threshold prunes the 1/3 entries
  auto hard = ptdf::sparsify_ptdf(dense, 0.5);
  CHECK(hard.nnz_after_cutoff() < dense.nnz_after_cutoff());
  for (int e = 0; e < 3; ++e)
    for (const auto& [b, v] : hard.row(e)) CHECK(std::fabs(v) >= 0.5);

  // deviation report against the dense map
  std::mt19937 rng(3);
  std::vector<std::vector<double>> probes;
  for (int k = 0; k < 5; ++k) probes.push_back(balanced_injection(rng, 3));
  CHECK(ptdf::max_flow_deviation(dense, cut, probes) == doctest::Approx(0.0));
  CHECK(ptdf::max_flow_deviation(dense, hard, probes) > 0.0);

  CHECK_THROWS_AS(ptdf::sparsify_ptdf(dense, 1.0), std::invalid_argument);
}

TEST_CASE("ptdf: csv export lists branch, bus, value") {
  auto net = make_f3();
  auto ptdf = ptdf::compute_ptdf(net);
  const std::string path = "/tmp/gridplan_ptdf_test.csv";
  ptdf.export_csv(path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "branch,bus,value");
  int lines = 0;
  std::string row;
  while (std::getline(in, row)) ++lines;
  CHECK(lines == static_cast<int>(ptdf.nnz_after_cutoff()));
}
