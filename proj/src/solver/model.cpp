#include "gridplan/solver/model.hpp"

#include <cmath>
#include <set>

namespace gridplan::solver {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::LimitHit: return "limit-hit";
  }
  return "unknown";
}

std::vector<std::string> OptModel::validate() const {
  std::vector<std::string> errs;
  const int n = static_cast<int>(vars.size());
  for (int j = 0; j < n; ++j) {
    const auto& v = vars[j];
    if (std::isnan(v.lb) || std::isnan(v.ub))
      errs.push_back("variable '" + v.name + "': NaN bound");
    else if (v.lb > v.ub)
      errs.push_back("variable '" + v.name + "': lower bound exceeds upper bound");
    if (std::isnan(v.obj)) errs.push_back("variable '" + v.name + "': NaN objective");
  }
  for (const auto& r : rows) {
    std::set<int> seen;
    for (const auto& [j, c] : r.terms) {
      if (j < 0 || j >= n) {
        errs.push_back("row '" + r.name + "': references undeclared variable index " +
                       std::to_string(j));
        continue;
      }
      if (!seen.insert(j).second)
        errs.push_back("row '" + r.name + "': duplicate variable index " + std::to_string(j));
      if (std::isnan(c) || std::isinf(c))
        errs.push_back("row '" + r.name + "': non-finite coefficient");
    }
    if (std::isnan(r.rhs)) errs.push_back("row '" + r.name + "': NaN right-hand side");
  }
  return errs;
}

namespace {

void write_terms(std::ostream& os, const OptModel& m,
                 const std::vector<std::pair<int, double>>& terms) {
  bool first = true;
  for (const auto& [j, c] : terms) {
    if (c == 0.0) continue;
    if (first) {
      os << (c < 0 ? "- " : "");
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    const double a = std::fabs(c);
    if (a != 1.0) os << a << " ";
    os << (m.vars[j].name.empty() ? "x" + std::to_string(j) : m.vars[j].name);
    first = false;
  }
  if (first) os << "0 x0";
}

}  // namespace

void write_lp_format(const OptModel& m, std::ostream& os) {
  os << "Minimize\n obj: ";
  std::vector<std::pair<int, double>> obj_terms;
  for (int j = 0; j < static_cast<int>(m.vars.size()); ++j)
    if (m.vars[j].obj != 0.0) obj_terms.emplace_back(j, m.vars[j].obj);
  write_terms(os, m, obj_terms);
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    const auto& r = m.rows[i];
    os << " " << (r.name.empty() ? "c" + std::to_string(i) : r.name) << ": ";
    write_terms(os, m, r.terms);
    switch (r.sense) {
      case RowSense::LessEqual: os << " <= "; break;
      case RowSense::Equal: os << " = "; break;
      case RowSense::GreaterEqual: os << " >= "; break;
    }
    os << r.rhs << "\n";
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < m.vars.size(); ++j) {
    const auto& v = m.vars[j];
    const std::string nm = v.name.empty() ? "x" + std::to_string(j) : v.name;
    if (v.lb == -kInf && v.ub == kInf) {
      os << " " << nm << " free\n";
    } else {
      os << " ";
      if (v.lb == -kInf) os << "-inf";
      else os << v.lb;
      os << " <= " << nm << " <= ";
      if (v.ub == kInf) os << "+inf";
      else os << v.ub;
      os << "\n";
    }
  }
  bool any_int = false;
  for (const auto& v : m.vars) any_int |= v.integral;
  if (any_int) {
    os << "Generals\n";
    for (std::size_t j = 0; j < m.vars.size(); ++j)
      if (m.vars[j].integral)
        os << " " << (m.vars[j].name.empty() ? "x" + std::to_string(j) : m.vars[j].name) << "\n";
  }
  os << "End\n";
}

}  // namespace gridplan::solver
