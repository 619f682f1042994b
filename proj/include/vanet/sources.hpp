#pragma once

// Information-source selection on the hybrid model: pass probabilities
// p(i|s), network capacity R_c, and the min-max source distribution LP.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "vanet/errors.hpp"
#include "vanet/graph.hpp"
#include "vanet/metrics.hpp"
#include "vanet/optim.hpp"

namespace vanet {

struct PassMatrix {
  MatrixXd values;         // values(i, s) = p(i|s)
  std::vector<int> nodes;  // graph node behind each row/column
  std::string warning;
};

struct SourceProblem {
  MatrixXd pass;        // A, N x N
  VectorXd impedance;   // diagonal of R
  double scale = 1.0;   // C

  void validate() const {
    if (pass.rows() != pass.cols() || pass.rows() != impedance.size()) {
      throw DomainError("source problem dimensions are inconsistent");
    }
    if (!(scale > 0.0)) throw DomainError("capacity scale C must be positive");
    if (impedance.size() && !(impedance.minCoeff() > 0.0)) throw DomainError("vehicle impedances must be positive");
  }
};

struct CapacityResult {
  double value = 0.0;  // R_c; +inf when nothing transits any vehicle
  double max_load = 0.0;
  bool infinite = false;
};

struct SourceSolution {
  VectorXd p;
  double lambda = 0.0;
  CapacityResult capacity;
  SolveReport report;
  std::size_t support = 0;  // entries of p above 1e-9
};

// p(i|s) over the largest component (N = its size); hop-count shortest paths.
inline PassMatrix pass_matrix(const VanetGraph& g, unsigned threads = 1) {
  auto comps = connected_components(g);
  PassMatrix out;
  if (comps.largest < 0) throw DegenerateError("pass matrix needs N >= 3");
  const auto& members = comps.members[comps.largest];
  const VanetGraph* sub = &g;
  VanetGraph restricted;
  if (members.size() != g.size()) {
    out.warning = "graph is disconnected; using the largest component (" + std::to_string(members.size()) +
                  " of " + std::to_string(g.size()) + " nodes)";
    std::vector<int> index(g.size(), -1);
    for (std::size_t k = 0; k < members.size(); ++k) index[members[k]] = static_cast<int>(k);
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : g.edges) {
      if (index[e.u] >= 0 && index[e.v] >= 0) edges.emplace_back(index[e.u], index[e.v]);
    }
    restricted = VanetGraph::from_edges(members.size(), edges);
    sub = &restricted;
  }
  const std::size_t n = sub->size();
  if (n < 3) throw DegenerateError("pass matrix needs N >= 3");
  out.nodes = members;
  out.values = MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double norm = 1.0 / static_cast<double>(n - 1);
  // Per-source rows are independent; reuse the blocked Brandes driver and
  // write columns directly (each source owns its column).
  detail::blocked_source_sum(*sub, threads, [&](int s, const detail::BrandesWorkspace& ws, std::vector<double>&) {
    for (std::size_t i = 0; i < n; ++i) out.values(static_cast<Eigen::Index>(i), s) = ws.delta[i] * norm;
  });
  return out;
}

// q(i) = sum_s p(s) p(i|s).
inline VectorXd pass_probability(const MatrixXd& pass, const VectorXd& p) {
  if (pass.cols() != p.size()) throw DomainError("pass matrix and distribution differ in size");
  return pass * p;
}

inline CapacityResult capacity(const MatrixXd& pass, const VectorXd& p, const VectorXd& impedance, double scale) {
  VectorXd load = impedance.cwiseProduct(pass_probability(pass, p));
  CapacityResult out;
  out.max_load = load.size() ? load.maxCoeff() : 0.0;
  if (out.max_load <= 0.0) {
    out.infinite = true;
    out.value = std::numeric_limits<double>::infinity();
  } else {
    out.value = scale / out.max_load;
  }
  return out;
}

// min Lambda  s.t.  R A p <= Lambda 1,  1^T p = 1,  p >= 0,  Lambda >= 0.
inline LinearProgram source_lp(const SourceProblem& prob) {
  const Eigen::Index n = prob.pass.rows();
  LinearProgram lp;
  lp.c = VectorXd::Zero(n + 1);
  lp.c[n] = 1.0;
  lp.A_ub = MatrixXd::Zero(n, n + 1);
  lp.A_ub.leftCols(n) = prob.impedance.asDiagonal() * prob.pass;
  lp.A_ub.col(n).setConstant(-1.0);
  lp.b_ub = VectorXd::Zero(n);
  lp.A_eq = MatrixXd::Zero(1, n + 1);
  lp.A_eq.leftCols(n).setOnes();
  lp.b_eq = VectorXd::Ones(1);
  return lp;
}

inline SourceSolution optimize_sources(const SourceProblem& prob) {
  prob.validate();
  const Eigen::Index n = prob.pass.rows();
  SourceSolution sol;
  sol.report = solve_lp(source_lp(prob));
  if (!sol.report.optimal()) return sol;
  sol.p = sol.report.x.head(n).cwiseMax(0.0);
  sol.p /= sol.p.sum();
  sol.lambda = sol.report.x[n];
  sol.capacity = capacity(prob.pass, sol.p, prob.impedance, prob.scale);
  // The LP optimum and the recomputed max load agree to solver tolerance;
  // a vanishing optimum is the infinite-capacity case.
  if (sol.lambda <= 1e-12) {
    sol.capacity.infinite = true;
    sol.capacity.value = std::numeric_limits<double>::infinity();
  }
  sol.support = static_cast<std::size_t>((sol.p.array() > 1e-9).count());
  return sol;
}

}  // namespace vanet
