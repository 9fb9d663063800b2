#include "gridplan/ptdf/ptdf.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "gridplan/simd/kernels.hpp"

namespace gridplan::ptdf {

namespace {

constexpr double kBalanceTol = 1e-6;
constexpr double kDropTol = 1e-13;  // structural zeros from the solve

}  // namespace

void PtdfMatrix::materialize_row(int e) const {
  if (!deferred_) return;
  std::lock_guard<std::mutex> lock(deferred_->mu);
  if (deferred_->ready[static_cast<std::size_t>(e)]) return;
  const auto [fi, ti] = deferred_->endpoints[static_cast<std::size_t>(e)];
  std::vector<double> rhs(deferred_->lu->dim(), 0.0);
  const double w = deferred_->inv_reactance[static_cast<std::size_t>(e)];
  if (deferred_->reduced_index[static_cast<std::size_t>(fi)] >= 0)
    rhs[static_cast<std::size_t>(deferred_->reduced_index[static_cast<std::size_t>(fi)])] += w;
  if (deferred_->reduced_index[static_cast<std::size_t>(ti)] >= 0)
    rhs[static_cast<std::size_t>(deferred_->reduced_index[static_cast<std::size_t>(ti)])] -= w;
  deferred_->lu->solve(rhs);
  SparseRow& row = rows_[static_cast<std::size_t>(e)];
  for (int b = 0; b < n_buses_; ++b) {
    const int ri = deferred_->reduced_index[static_cast<std::size_t>(b)];
    if (ri < 0) continue;
    const double v = rhs[static_cast<std::size_t>(ri)];
    if (std::fabs(v) > kDropTol && std::fabs(v) >= cutoff_) row.emplace_back(b, v);
  }
  deferred_->ready[static_cast<std::size_t>(e)] = 1;
}

const PtdfMatrix::SparseRow& PtdfMatrix::row(int branch) const {
  if (deferred_ && !deferred_->ready[static_cast<std::size_t>(branch)]) materialize_row(branch);
  return rows_[static_cast<std::size_t>(branch)];
}

double PtdfMatrix::entry(int branch, int bus_index) const {
  if (has_dense_) return dense_.at(static_cast<std::size_t>(branch), static_cast<std::size_t>(bus_index));
  for (const auto& [b, v] : row(branch))
    if (b == bus_index) return v;
  return 0.0;
}

std::vector<double> PtdfMatrix::flows(const std::vector<double>& inj) const {
  if (static_cast<int>(inj.size()) != n_buses_)
    throw std::invalid_argument("ptdf: injection vector size mismatch");
  double sum = 0.0;
  for (double v : inj) sum += v;
  if (std::fabs(sum) > kBalanceTol)
    throw std::invalid_argument("ptdf: injections not balanced (sum = " + std::to_string(sum) +
                                " MW)");
  const int e_count = n_branches();
  std::vector<double> out(static_cast<std::size_t>(e_count), 0.0);
  if (has_dense_) {
    for (int e = 0; e < e_count; ++e)
      out[static_cast<std::size_t>(e)] =
          simd::dot(dense_.row(static_cast<std::size_t>(e)), inj.data(),
                    static_cast<std::size_t>(n_buses_));
  } else {
    for (int e = 0; e < e_count; ++e) {
      double s = 0.0;
      for (const auto& [b, v] : row(e)) s += v * inj[static_cast<std::size_t>(b)];
      out[static_cast<std::size_t>(e)] = s;
    }
  }
  return out;
}

void PtdfMatrix::refresh_counts() {
  nnz_after_ = 0;
  for (const auto& r : rows_) nnz_after_ += r.size();
}

void PtdfMatrix::export_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("ptdf export: cannot open " + path);
  os << "branch,bus,value\n";
  for (int e = 0; e < n_branches(); ++e)
    for (const auto& [b, v] : row(e)) os << (e + 1) << "," << (b + 1) << "," << v << "\n";
}

PtdfMatrix compute_ptdf(const grid::Network& net, int dense_threshold) {
  auto errs = net.validate();
  if (!errs.empty()) throw std::invalid_argument("compute_ptdf: invalid network: " + errs[0]);
  const int n = net.n_buses();
  const int e_count = net.n_branches();
  const int slack_idx = net.slack_bus - 1;

  std::vector<int> reduced_index(static_cast<std::size_t>(n), -1);
  int k = 0;
  for (int b = 0; b < n; ++b)
    if (b != slack_idx) reduced_index[static_cast<std::size_t>(b)] = k++;

  // Reduced nodal susceptance matrix (slack row/column deleted).
  linalg::DenseMatrix b_red(static_cast<std::size_t>(n - 1), static_cast<std::size_t>(n - 1), 0.0);
  std::vector<double> inv_x(static_cast<std::size_t>(e_count));
  std::vector<std::pair<int, int>> endpoints(static_cast<std::size_t>(e_count));
  for (int e = 0; e < e_count; ++e) {
    const auto& br = net.branches[static_cast<std::size_t>(e)];
    const int fi = br.from_bus - 1, ti = br.to_bus - 1;
    const double w = 1.0 / br.reactance_pu;
    inv_x[static_cast<std::size_t>(e)] = w;
    endpoints[static_cast<std::size_t>(e)] = {fi, ti};
    const int rf = reduced_index[static_cast<std::size_t>(fi)];
    const int rt = reduced_index[static_cast<std::size_t>(ti)];
    if (rf >= 0) b_red.at(static_cast<std::size_t>(rf), static_cast<std::size_t>(rf)) += w;
    if (rt >= 0) b_red.at(static_cast<std::size_t>(rt), static_cast<std::size_t>(rt)) += w;
    if (rf >= 0 && rt >= 0) {
      b_red.at(static_cast<std::size_t>(rf), static_cast<std::size_t>(rt)) -= w;
      b_red.at(static_cast<std::size_t>(rt), static_cast<std::size_t>(rf)) -= w;
    }
  }

  std::unique_ptr<linalg::LuFactor> lu;
  try {
    lu = std::make_unique<linalg::LuFactor>(std::move(b_red));
  } catch (const std::runtime_error&) {
    throw std::runtime_error("compute_ptdf: reduced susceptance matrix is singular (islanding)");
  }

  PtdfMatrix out;
  out.n_buses_ = n;
  out.slack_bus_ = net.slack_bus;
  out.cutoff_ = 0.0;
  out.rows_.assign(static_cast<std::size_t>(e_count), {});

  if (n <= dense_threshold) {
    out.dense_ = linalg::DenseMatrix(static_cast<std::size_t>(e_count),
                                     static_cast<std::size_t>(n), 0.0);
    out.has_dense_ = true;
    std::vector<double> rhs;
    for (int e = 0; e < e_count; ++e) {
      rhs.assign(static_cast<std::size_t>(n - 1), 0.0);
      const auto [fi, ti] = endpoints[static_cast<std::size_t>(e)];
      const double w = inv_x[static_cast<std::size_t>(e)];
      if (reduced_index[static_cast<std::size_t>(fi)] >= 0)
        rhs[static_cast<std::size_t>(reduced_index[static_cast<std::size_t>(fi)])] += w;
      if (reduced_index[static_cast<std::size_t>(ti)] >= 0)
        rhs[static_cast<std::size_t>(reduced_index[static_cast<std::size_t>(ti)])] -= w;
      lu->solve(rhs);
      for (int b = 0; b < n; ++b) {
        const int ri = reduced_index[static_cast<std::size_t>(b)];
        if (ri < 0) continue;
        const double v = rhs[static_cast<std::size_t>(ri)];
        if (std::fabs(v) > kDropTol) {
          out.dense_.at(static_cast<std::size_t>(e), static_cast<std::size_t>(b)) = v;
          out.rows_[static_cast<std::size_t>(e)].emplace_back(b, v);
        }
      }
    }
  } else {
    auto def = std::make_shared<PtdfMatrix::Deferred>();
    def->lu = std::move(lu);
    def->reduced_index = std::move(reduced_index);
    def->endpoints = std::move(endpoints);
    def->inv_reactance = std::move(inv_x);
    def->ready.assign(static_cast<std::size_t>(e_count), 0);
    out.deferred_ = std::move(def);
  }

  out.refresh_counts();
  out.nnz_before_ = out.nnz_after_;
  return out;
}

PtdfMatrix sparsify_ptdf(const PtdfMatrix& ptdf, double k_p) {
  if (k_p < 0.0 || k_p >= 1.0) throw std::invalid_argument("sparsify_ptdf: need 0 <= k_p < 1");
  PtdfMatrix out;
  out.n_buses_ = ptdf.n_buses_;
  out.slack_bus_ = ptdf.slack_bus_;
  out.cutoff_ = k_p;
  out.nnz_before_ = 0;
  out.rows_.resize(ptdf.rows_.size());
  if (ptdf.has_dense_) {
    out.has_dense_ = true;
    out.dense_ = linalg::DenseMatrix(static_cast<std::size_t>(ptdf.n_branches()),
                                     static_cast<std::size_t>(ptdf.n_buses_), 0.0);
  }
  for (int e = 0; e < ptdf.n_branches(); ++e) {
    const auto& src = ptdf.row(e);
    out.nnz_before_ += src.size();
    for (const auto& [b, v] : src) {
      if (std::fabs(v) < k_p) continue;
      out.rows_[static_cast<std::size_t>(e)].emplace_back(b, v);
      if (out.has_dense_)
        out.dense_.at(static_cast<std::size_t>(e), static_cast<std::size_t>(b)) = v;
    }
  }
  out.refresh_counts();
  return out;
}

double max_flow_deviation(const PtdfMatrix& a, const PtdfMatrix& b,
                          const std::vector<std::vector<double>>& probe_injections) {
  double worst = 0.0;
  for (const auto& inj : probe_injections) {
    const auto fa = a.flows(inj);
    const auto fb = b.flows(inj);
    for (std::size_t e = 0; e < fa.size(); ++e)
      worst = std::max(worst, std::fabs(fa[e] - fb[e]));
  }
  return worst;
}

}  // namespace gridplan::ptdf
