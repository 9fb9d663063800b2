#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "gridplan/grid/model.hpp"
#include "gridplan/linalg/dense.hpp"

namespace gridplan::ptdf {

// Injection-to-flow sensitivity map. The slack column is identically zero.
// For bus counts up to `dense_threshold` every row is materialized at
// construction (plus a dense buffer for fast flow evaluation); above it rows
// are generated on demand from the kept factorization and cached.
class PtdfMatrix {
 public:
  using SparseRow = std::vector<std::pair<int, double>>;  // (bus index 0-based, value)

  int n_buses() const { return n_buses_; }
  int n_branches() const { return static_cast<int>(rows_.size()); }
  int slack_bus() const { return slack_bus_; }  // 1-based id
  double cutoff() const { return cutoff_; }
  std::size_t nnz_before_cutoff() const { return nnz_before_; }
  std::size_t nnz_after_cutoff() const { return nnz_after_; }
  double reduction_ratio() const {
    return nnz_before_ == 0 ? 0.0
                            : 1.0 - static_cast<double>(nnz_after_) /
                                        static_cast<double>(nnz_before_);
  }

  const SparseRow& row(int branch) const;
  // Entry value (0 for pruned or slack entries).
  double entry(int branch, int bus_index) const;

  // Flows for a balanced injection vector (|sum| <= 1e-6 enforced).
  std::vector<double> flows(const std::vector<double>& injection_mw) const;

  void export_csv(const std::string& path) const;

 private:
  friend PtdfMatrix compute_ptdf(const grid::Network&, int);
  friend PtdfMatrix sparsify_ptdf(const PtdfMatrix&, double);

  void materialize_row(int e) const;
  void refresh_counts();

  int n_buses_ = 0;
  int slack_bus_ = 0;
  double cutoff_ = 0.0;
  std::size_t nnz_before_ = 0;
  std::size_t nnz_after_ = 0;
  mutable std::vector<SparseRow> rows_;
  mutable linalg::DenseMatrix dense_;  // E x N when materialized densely
  bool has_dense_ = false;

  // On-demand generation state (bus counts above the dense threshold).
  struct Deferred {
    std::unique_ptr<linalg::LuFactor> lu;
    std::vector<int> reduced_index;  // bus -> row in the reduced system, -1 slack
    std::vector<std::pair<int, int>> endpoints;
    std::vector<double> inv_reactance;
    std::vector<char> ready;
    std::mutex mu;
  };
  mutable std::shared_ptr<Deferred> deferred_;
};

// Builds the PTDF from topology and reactances by factoring the reduced nodal
// susceptance matrix once and solving one right-hand side per branch.
// Throws grid::CaseError-style std::runtime_error when the reduced matrix is
// singular (islanded network).
PtdfMatrix compute_ptdf(const grid::Network& net, int dense_threshold = 5000);

// Zeroes entries with |value| < k_p; 0 <= k_p < 1.
PtdfMatrix sparsify_ptdf(const PtdfMatrix& ptdf, double k_p);

// Largest per-line flow difference between two sensitivity maps over a probe
// set of balanced injections (reported alongside any cutoff > 0 run).
double max_flow_deviation(const PtdfMatrix& a, const PtdfMatrix& b,
                          const std::vector<std::vector<double>>& probe_injections);

}  // namespace gridplan::ptdf
