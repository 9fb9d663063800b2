#include "fixtures.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace gpfix {

using gridplan::grid::Branch;
using gridplan::grid::Bus;
using gridplan::grid::Generator;
using gridplan::grid::GenType;

Network make_f3() {
  Network net;
  for (int i = 1; i <= 3; ++i) {
    Bus b;
    b.id = i;
    b.base_load_mw = i == 2 ? 90.0 : 0.0;
    b.storage_candidate = true;
    b.max_storage_units = 12;
    net.buses.push_back(b);
  }
  int eid = 1;
  for (auto [f, t] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
    Branch br;
    br.id = eid++;
    br.from_bus = f;
    br.to_bus = t;
    br.reactance_pu = 0.1;
    br.thermal_limit_mw = 60.0;
    br.upgrade_increment_mw = 18.0;  // 30% steps, three levels
    br.max_upgrade_level = 3;
    br.length_km = 50.0;
    net.branches.push_back(br);
  }
  Generator g1;
  g1.id = 1;
  g1.bus = 1;
  g1.type = GenType::Gas;
  g1.capacity_mw = 200.0;
  g1.marginal_cost_per_mwh = 10.0;
  net.generators.push_back(g1);
  Generator g2;
  g2.id = 2;
  g2.bus = 3;
  g2.type = GenType::Gas;
  g2.capacity_mw = 200.0;
  g2.marginal_cost_per_mwh = 100.0;
  net.generators.push_back(g2);
  net.slack_bus = 3;

  auto errs = net.validate();
  if (!errs.empty()) throw std::logic_error("f3 fixture invalid: " + errs[0]);
  return net;
}

CostConfig f3_costs() {
  return CostConfig{};  // defaults carry the shipped cost numbers
}

Scenario flat_scenario(const Network& net, const std::vector<double>& bus_load_mw, int T,
                       double weight, int id, const std::string& name) {
  std::vector<std::vector<double>> loads(net.buses.size(), std::vector<double>(T, 0.0));
  for (std::size_t i = 0; i < bus_load_mw.size(); ++i)
    for (int t = 0; t < T; ++t) loads[i][static_cast<std::size_t>(t)] = bus_load_mw[i];
  return make_scenario(net, loads, weight, id, name);
}

Scenario make_scenario(const Network& net, const std::vector<std::vector<double>>& bus_load_mw,
                       double weight, int id, const std::string& name) {
  Scenario sc;
  sc.id = id;
  sc.name = name;
  sc.weight = weight;
  sc.T = static_cast<int>(bus_load_mw.at(0).size());
  sc.bus_load_mw = bus_load_mw;
  sc.gen_max_mw.assign(net.generators.size(),
                       std::vector<double>(static_cast<std::size_t>(sc.T), 0.0));
  sc.gen_min_mw = sc.gen_max_mw;
  for (std::size_t g = 0; g < net.generators.size(); ++g)
    for (int t = 0; t < sc.T; ++t) {
      sc.gen_max_mw[g][static_cast<std::size_t>(t)] = net.generators[g].capacity_mw;
      sc.gen_min_mw[g][static_cast<std::size_t>(t)] = net.generators[g].min_output_mw;
    }
  return sc;
}

Network random_network(std::mt19937& rng, const RandomNetOptions& opt) {
  std::uniform_real_distribution<double> xdist(0.05, 0.2);
  std::uniform_real_distribution<double> limdist(40.0, 90.0);
  std::uniform_real_distribution<double> lendist(20.0, 120.0);
  std::uniform_real_distribution<double> loaddist(10.0, 45.0);
  std::uniform_real_distribution<double> capdist(60.0, 220.0);
  std::uniform_real_distribution<double> costdist(5.0, 80.0);

  Network net;
  const int n = opt.n_buses;
  for (int i = 1; i <= n; ++i) {
    Bus b;
    b.id = i;
    b.base_load_mw = (i % 3 != 0) ? loaddist(rng) : 0.0;
    net.buses.push_back(b);
  }
  // Random spanning tree, then extra chords.
  std::set<std::pair<int, int>> used;
  int eid = 1;
  auto add_edge = [&](int a, int b) {
    Branch br;
    br.id = eid++;
    br.from_bus = a;
    br.to_bus = b;
    br.reactance_pu = xdist(rng);
    br.thermal_limit_mw = limdist(rng);
    br.upgrade_increment_mw = std::round(0.3 * br.thermal_limit_mw);
    br.max_upgrade_level = opt.max_level;
    br.length_km = lendist(rng);
    net.branches.push_back(br);
    used.insert({std::min(a, b), std::max(a, b)});
  };
  for (int i = 2; i <= n; ++i) {
    std::uniform_int_distribution<int> parent(1, i - 1);
    add_edge(parent(rng), i);
  }
  std::uniform_int_distribution<int> pick(1, n);
  int chords = 0, guard = 0;
  while (chords < opt.extra_branches && guard++ < 400) {
    const int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    if (used.count({std::min(a, b), std::max(a, b)})) continue;
    add_edge(a, b);
    ++chords;
  }
  // Generators on every other bus; capacity comfortably covers system load.
  int gid = 1;
  double total_load = 0.0;
  for (const auto& b : net.buses) total_load += b.base_load_mw;
  double total_cap = 0.0;
  for (int i = 1; i <= n; i += 2) {
    Generator g;
    g.id = gid++;
    g.bus = i;
    g.type = GenType::Gas;
    g.capacity_mw = capdist(rng);
    g.marginal_cost_per_mwh = costdist(rng);
    total_cap += g.capacity_mw;
    net.generators.push_back(g);
  }
  if (total_cap < 2.2 * total_load) {
    const double scale = 2.2 * total_load / total_cap;
    for (auto& g : net.generators) g.capacity_mw *= scale;
  }
  std::uniform_int_distribution<int> slack(1, n);
  net.slack_bus = slack(rng);

  // Storage candidates on the highest-load buses.
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return net.buses[static_cast<std::size_t>(a)].base_load_mw >
           net.buses[static_cast<std::size_t>(b)].base_load_mw;
  });
  for (int k = 0; k < opt.storage_buses && k < n; ++k) {
    auto& b = net.buses[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    b.storage_candidate = true;
    b.max_storage_units = opt.max_storage_units;
  }

  auto errs = net.validate();
  if (!errs.empty()) throw std::logic_error("random fixture invalid: " + errs[0]);
  return net;
}

CostConfig random_costs(const RandomNetOptions& opt) {
  CostConfig c;
  c.line_cost_per_mw_km = 900.0;
  c.storage_cost_per_mwh = 4000.0;
  c.storage_throughput_cost_per_mwh = 1.5;
  c.storage_unit_mwh = opt.storage_unit_mwh;
  c.storage_duration_h = 4.0;
  c.efficiency = 0.95;
  return c;
}

std::vector<Scenario> random_scenarios(std::mt19937& rng, const Network& net, int S, int T) {
  std::uniform_real_distribution<double> peak(1.1, 1.8);
  std::uniform_real_distribution<double> phase(0.0, 6.28);
  std::uniform_real_distribution<double> dip(0.3, 0.7);
  std::vector<Scenario> out;
  for (int s = 0; s < S; ++s) {
    std::vector<std::vector<double>> loads(net.buses.size(),
                                           std::vector<double>(static_cast<std::size_t>(T), 0.0));
    const double pk = peak(rng);
    const double ph = phase(rng);
    for (std::size_t i = 0; i < net.buses.size(); ++i) {
      const double base = net.buses[i].base_load_mw;
      for (int t = 0; t < T; ++t) {
        const double shape =
            1.0 + (pk - 1.0) * 0.5 * (1.0 + std::sin(2.0 * 3.14159265 * t / T + ph));
        loads[i][static_cast<std::size_t>(t)] = base * shape;
      }
    }
    Scenario sc = make_scenario(net, loads, 1.0 / S, s, "rand-" + std::to_string(s));
    // A sagging ceiling on one unit mimics a renewable profile.
    if (!net.generators.empty()) {
      const std::size_t g = static_cast<std::size_t>(s) % net.generators.size();
      const double d = dip(rng);
      for (int t = 0; t < T; ++t) {
        const double cf = 1.0 - d * 0.5 * (1.0 + std::cos(2.0 * 3.14159265 * t / T + ph));
        sc.gen_max_mw[g][static_cast<std::size_t>(t)] *= cf;
      }
    }
    out.push_back(std::move(sc));
  }
  return out;
}

std::vector<double> angle_flows(const Network& net, const std::vector<double>& inj) {
  const int n = net.n_buses();
  const int slack = net.slack_bus - 1;
  // Full susceptance system with the slack row replaced by theta_slack = 0,
  // solved by Gauss-Jordan with partial pivoting.
  std::vector<std::vector<double>> a(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(n + 1), 0.0));
  for (const auto& br : net.branches) {
    const int f = br.from_bus - 1, t = br.to_bus - 1;
    const double w = 1.0 / br.reactance_pu;
    a[static_cast<std::size_t>(f)][static_cast<std::size_t>(f)] += w;
    a[static_cast<std::size_t>(t)][static_cast<std::size_t>(t)] += w;
    a[static_cast<std::size_t>(f)][static_cast<std::size_t>(t)] -= w;
    a[static_cast<std::size_t>(t)][static_cast<std::size_t>(f)] -= w;
  }
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] = inj[static_cast<std::size_t>(i)];
  for (int j = 0; j <= n; ++j) a[static_cast<std::size_t>(slack)][static_cast<std::size_t>(j)] = 0.0;
  a[static_cast<std::size_t>(slack)][static_cast<std::size_t>(slack)] = 1.0;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) >
          std::fabs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(k)]))
        piv = i;
    std::swap(a[static_cast<std::size_t>(k)], a[static_cast<std::size_t>(piv)]);
    const double d = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    if (std::fabs(d) < 1e-12) throw std::runtime_error("angle oracle: singular system");
    for (int j = k; j <= n; ++j) a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] /= d;
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const double f = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      if (f == 0.0) continue;
      for (int j = k; j <= n; ++j)
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
            f * a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    }
  }
  std::vector<double> theta(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) theta[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)];

  std::vector<double> flows;
  flows.reserve(net.branches.size());
  for (const auto& br : net.branches)
    flows.push_back((theta[static_cast<std::size_t>(br.from_bus - 1)] -
                     theta[static_cast<std::size_t>(br.to_bus - 1)]) /
                    br.reactance_pu);
  return flows;
}

void materialize_all_flow_rows(gridplan::opf::OperationalModel& om,
                               const gridplan::ptdf::PtdfMatrix& ptdf) {
  std::vector<gridplan::opf::FlowViolation> all;
  for (int e = 0; e < om.net->n_branches(); ++e)
    for (int t = 0; t < om.block.T; ++t)
      for (bool upper : {true, false}) {
        gridplan::opf::FlowViolation v;
        v.branch = e;
        v.hour = t;
        v.upper = upper;
        v.excess_mw = 1.0;
        all.push_back(v);
      }
  gridplan::opf::add_flow_rows(om.lp.model, om.block, *om.net, ptdf, all,
                               static_cast<int>(all.size()));
}

InvestmentPlan max_plan(const Network& net, const CostConfig& costs) {
  InvestmentPlan p = InvestmentPlan::zero(net);
  for (std::size_t e = 0; e < net.branches.size(); ++e)
    p.line_level[e] = net.branches[e].max_upgrade_level;
  for (std::size_t i = 0; i < net.buses.size(); ++i)
    p.storage_mwh[i] = net.buses[i].storage_candidate
                           ? net.buses[i].max_storage_units * costs.storage_unit_mwh
                           : 0.0;
  return p;
}

}  // namespace gpfix
