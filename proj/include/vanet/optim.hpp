#pragma once

// Dense LP solvers: a two-phase primal simplex with Bland anti-cycling, and a
// log-barrier path-following method for the traffic allocation problem
//
//   min  cost^T x   s.t.  x >= 0,  1^T x >= Q,  A x <= c.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "vanet/errors.hpp"

namespace vanet {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class SolveStatus { optimal, infeasible, unbounded, max_iter };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::max_iter: return "max-iter";
  }
  return "unknown";
}

// min c^T x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  lower <= x <= upper.
// Empty bound vectors mean [0, +inf) for every variable.
struct LinearProgram {
  VectorXd c;
  MatrixXd A_ub;
  VectorXd b_ub;
  MatrixXd A_eq;
  VectorXd b_eq;
  VectorXd lower;
  VectorXd upper;

  Eigen::Index variables() const { return c.size(); }

  VectorXd lower_bounds() const { return lower.size() ? lower : VectorXd::Zero(c.size()); }
  VectorXd upper_bounds() const { return upper.size() ? upper : VectorXd::Constant(c.size(), kInf); }

  void validate() const {
    const auto n = c.size();
    auto bad = [](const std::string& what) { throw DomainError("linear program: " + what); };
    if (A_ub.rows() != b_ub.size() || (A_ub.rows() > 0 && A_ub.cols() != n)) bad("A_ub/b_ub dimension mismatch");
    if (A_eq.rows() != b_eq.size() || (A_eq.rows() > 0 && A_eq.cols() != n)) bad("A_eq/b_eq dimension mismatch");
    if ((lower.size() && lower.size() != n) || (upper.size() && upper.size() != n)) bad("bound size mismatch");
    if (!c.allFinite() || !A_ub.allFinite() || !b_ub.allFinite() || !A_eq.allFinite() || !b_eq.allFinite()) {
      bad("non-finite coefficient");
    }
    VectorXd lo = lower_bounds(), hi = upper_bounds();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::isnan(lo[j]) || std::isnan(hi[j]) || lo[j] > hi[j] || lo[j] == kInf || hi[j] == -kInf) {
        bad("invalid bounds on variable " + std::to_string(j));
      }
    }
  }

  // Largest constraint violation of x (bounds included).
  double violation(const VectorXd& x) const {
    double worst = 0.0;
    if (A_ub.rows()) worst = std::max(worst, (A_ub * x - b_ub).maxCoeff());
    if (A_eq.rows()) worst = std::max(worst, (A_eq * x - b_eq).cwiseAbs().maxCoeff());
    VectorXd lo = lower_bounds(), hi = upper_bounds();
    for (Eigen::Index j = 0; j < x.size(); ++j) worst = std::max({worst, lo[j] - x[j], x[j] - hi[j]});
    return worst;
  }
};

struct IterateRecord {
  int outer = 0;
  int inner = 0;
  double t = 0.0;
  double objective = 0.0;  // barrier objective t cost^T x + phi(x)
  double decrement = 0.0;  // Newton decrement squared / 2
  double min_slack = 0.0;
  VectorXd x;
};

struct SolveReport {
  VectorXd x;
  double objective = 0.0;
  double gap_bound = 0.0;  // certified suboptimality, (n+E+1)/t for barrier solves
  int iterations = 0;
  SolveStatus status = SolveStatus::max_iter;
  double max_violation = 0.0;
  std::vector<double> stage_residuals;  // central-path residual (max-norm) per outer stage
  std::vector<double> stage_t;
  VectorXd slack;                       // barrier solves: final constraint slacks
  std::vector<IterateRecord> iterates;  // filled when requested

  bool optimal() const { return status == SolveStatus::optimal; }
};

namespace detail {

class Tableau {
 public:
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Tableau(MatrixXd rows, VectorXd rhs, std::vector<int> basis)
      : t_(rows.rows(), rows.cols() + 1), basis_(std::move(basis)) {
    t_.leftCols(rows.cols()) = rows;
    t_.col(rows.cols()) = rhs;
  }

  Eigen::Index rows() const { return t_.rows(); }
  Eigen::Index cols() const { return t_.cols() - 1; }
  const std::vector<int>& basis() const { return basis_; }
  double rhs(Eigen::Index i) const { return t_(i, cols()); }
  double at(Eigen::Index i, Eigen::Index j) const { return t_(i, j); }

  void pivot(Eigen::Index r, Eigen::Index j) {
    t_.row(r) /= t_(r, j);
    VectorXd factor = t_.col(j);
    factor[r] = 0.0;
    Eigen::RowVectorXd pivot_row = t_.row(r);
    t_.noalias() -= factor * pivot_row;
    t_.col(j).setZero();
    t_(r, j) = 1.0;
    basis_[r] = static_cast<int>(j);
  }

  void drop_row(Eigen::Index r) {
    RowMatrix next(t_.rows() - 1, t_.cols());
    next.topRows(r) = t_.topRows(r);
    next.bottomRows(t_.rows() - r - 1) = t_.bottomRows(t_.rows() - r - 1);
    t_ = std::move(next);
    basis_.erase(basis_.begin() + r);
  }

  // Runs primal simplex on `cost` over columns with allowed[j]. Pricing is
  // Dantzig until a run of degenerate pivots, then Bland's rule for good.
  SolveStatus optimize(const VectorXd& cost, const std::vector<char>& allowed, int& iterations, int max_iter) {
    constexpr double kCostTol = 1e-9;
    constexpr double kPivotTol = 1e-9;
    constexpr int kDegenerateSwitch = 50;
    int degenerate_run = 0;
    bool bland = false;
    VectorXd reduced;
    auto price = [&] {
      reduced = cost;
      for (Eigen::Index i = 0; i < rows(); ++i) {
        double cb = cost[basis_[i]];
        if (cb != 0.0) reduced -= cb * t_.row(i).head(cols()).transpose();
      }
    };
    price();
    bool fresh = true;
    while (true) {
      // Incremental updates drift; reprice from scratch now and then.
      if (!fresh && iterations % 64 == 0) {
        price();
        fresh = true;
      }
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < cols(); ++j) {
        if (!allowed[j] || reduced[j] >= -kCostTol) continue;
        if (enter < 0) {
          enter = j;
          if (bland) break;
        } else if (reduced[j] < reduced[enter]) {
          enter = j;
        }
      }
      if (enter < 0) {
        if (fresh) return SolveStatus::optimal;
        price();
        fresh = true;
        continue;
      }
      if (iterations >= max_iter) return SolveStatus::max_iter;
      Eigen::Index leave = -1;
      double best_ratio = kInf;
      for (Eigen::Index i = 0; i < rows(); ++i) {
        double a = t_(i, enter);
        if (a <= kPivotTol) continue;
        double ratio = std::max(rhs(i), 0.0) / a;
        if (ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return SolveStatus::unbounded;
      if (best_ratio <= 1e-12) {
        if (++degenerate_run >= kDegenerateSwitch) bland = true;
      } else {
        degenerate_run = 0;
      }
      pivot(leave, enter);
      double rc = reduced[enter];
      reduced -= rc * t_.row(leave).head(cols()).transpose();
      reduced[enter] = 0.0;
      fresh = false;
      ++iterations;
    }
  }

  double objective(const VectorXd& cost) const {
    double v = 0.0;
    for (Eigen::Index i = 0; i < rows(); ++i) v += cost[basis_[i]] * rhs(i);
    return v;
  }

 private:
  RowMatrix t_;
  std::vector<int> basis_;
};

}  // namespace detail

// Two-phase dense primal simplex.
inline SolveReport solve_lp(const LinearProgram& lp) {
  lp.validate();
  const Eigen::Index n = lp.variables();
  const VectorXd lo = lp.lower_bounds(), hi = lp.upper_bounds();

  // x_j = offset_j + sum_k map(j, k) z_k with z >= 0.
  enum class Kind { shifted, reflected, free };
  std::vector<Kind> kind(n);
  std::vector<Eigen::Index> col(n);
  Eigen::Index nz = 0;
  VectorXd offset = VectorXd::Zero(n);
  std::vector<Eigen::Index> bounded;  // variables needing an explicit upper-bound row
  for (Eigen::Index j = 0; j < n; ++j) {
    col[j] = nz;
    if (std::isfinite(lo[j])) {
      kind[j] = Kind::shifted;
      offset[j] = lo[j];
      nz += 1;
      if (std::isfinite(hi[j])) bounded.push_back(j);
    } else if (std::isfinite(hi[j])) {
      kind[j] = Kind::reflected;
      offset[j] = hi[j];
      nz += 1;
    } else {
      kind[j] = Kind::free;
      nz += 2;
    }
  }
  auto substitute = [&](const MatrixXd& A) {
    MatrixXd out = MatrixXd::Zero(A.rows(), nz);
    for (Eigen::Index j = 0; j < n; ++j) {
      switch (kind[j]) {
        case Kind::shifted: out.col(col[j]) = A.col(j); break;
        case Kind::reflected: out.col(col[j]) = -A.col(j); break;
        case Kind::free:
          out.col(col[j]) = A.col(j);
          out.col(col[j] + 1) = -A.col(j);
          break;
      }
    }
    return out;
  };

  const Eigen::Index m_ub = lp.A_ub.rows() + static_cast<Eigen::Index>(bounded.size());
  const Eigen::Index m_eq = lp.A_eq.rows();
  const Eigen::Index m = m_ub + m_eq;
  const Eigen::Index ns = m_ub;  // one slack per inequality row
  MatrixXd rows = MatrixXd::Zero(m, nz + ns);
  VectorXd rhs(m);
  if (lp.A_ub.rows()) {
    rows.block(0, 0, lp.A_ub.rows(), nz) = substitute(lp.A_ub);
    rhs.head(lp.A_ub.rows()) = lp.b_ub - lp.A_ub * offset;
  }
  for (std::size_t k = 0; k < bounded.size(); ++k) {
    Eigen::Index r = lp.A_ub.rows() + static_cast<Eigen::Index>(k);
    rows(r, col[bounded[k]]) = 1.0;
    rhs[r] = hi[bounded[k]] - lo[bounded[k]];
  }
  for (Eigen::Index r = 0; r < m_ub; ++r) rows(r, nz + r) = 1.0;
  if (m_eq) {
    rows.block(m_ub, 0, m_eq, nz) = substitute(lp.A_eq);
    rhs.tail(m_eq) = lp.b_eq - lp.A_eq * offset;
  }

  // Nonnegative right-hand sides; rows whose slack keeps a +1 start in the basis.
  std::vector<int> basis(m, -1);
  Eigen::Index artificials = 0;
  for (Eigen::Index r = 0; r < m; ++r) {
    if (rhs[r] < 0.0) {
      rows.row(r) *= -1.0;
      rhs[r] = -rhs[r];
    }
    if (r < m_ub && rows(r, nz + r) > 0.0) {
      basis[r] = static_cast<int>(nz + r);
    } else {
      ++artificials;
    }
  }
  const Eigen::Index total = nz + ns + artificials;
  MatrixXd full = MatrixXd::Zero(m, total);
  full.leftCols(nz + ns) = rows;
  Eigen::Index next_art = nz + ns;
  for (Eigen::Index r = 0; r < m; ++r) {
    if (basis[r] < 0) {
      full(r, next_art) = 1.0;
      basis[r] = static_cast<int>(next_art++);
    }
  }

  detail::Tableau tab(std::move(full), std::move(rhs), std::move(basis));
  SolveReport report;
  const int max_iter = static_cast<int>(50 * (m + total) + 1000);
  std::vector<char> allowed(total, 1);

  if (artificials > 0) {
    VectorXd phase1 = VectorXd::Zero(total);
    phase1.tail(artificials).setOnes();
    auto status = tab.optimize(phase1, allowed, report.iterations, max_iter);
    if (status == SolveStatus::max_iter) {
      report.status = status;
      return report;
    }
    double scale = 1.0;
    for (Eigen::Index r = 0; r < tab.rows(); ++r) scale = std::max(scale, std::abs(tab.rhs(r)));
    if (tab.objective(phase1) > 1e-9 * scale) {
      report.status = SolveStatus::infeasible;
      return report;
    }
    // Pivot remaining (zero-valued) artificials out of the basis, dropping redundant rows.
    for (Eigen::Index r = 0; r < tab.rows();) {
      if (tab.basis()[r] < nz + ns) {
        ++r;
        continue;
      }
      Eigen::Index j = 0;
      while (j < nz + ns && std::abs(tab.at(r, j)) <= 1e-9) ++j;
      if (j < nz + ns) {
        tab.pivot(r, j);
        ++r;
      } else {
        tab.drop_row(r);
      }
    }
    for (Eigen::Index j = nz + ns; j < total; ++j) allowed[j] = 0;
  }

  VectorXd cost = VectorXd::Zero(total);
  for (Eigen::Index j = 0; j < n; ++j) {
    switch (kind[j]) {
      case Kind::shifted: cost[col[j]] = lp.c[j]; break;
      case Kind::reflected: cost[col[j]] = -lp.c[j]; break;
      case Kind::free:
        cost[col[j]] = lp.c[j];
        cost[col[j] + 1] = -lp.c[j];
        break;
    }
  }
  report.status = tab.optimize(cost, allowed, report.iterations, max_iter);
  if (report.status != SolveStatus::optimal) return report;

  VectorXd z = VectorXd::Zero(total);
  for (Eigen::Index r = 0; r < tab.rows(); ++r) z[tab.basis()[r]] = tab.rhs(r);
  report.x = offset;
  for (Eigen::Index j = 0; j < n; ++j) {
    switch (kind[j]) {
      case Kind::shifted: report.x[j] += z[col[j]]; break;
      case Kind::reflected: report.x[j] -= z[col[j]]; break;
      case Kind::free: report.x[j] = z[col[j]] - z[col[j] + 1]; break;
    }
  }
  report.objective = lp.c.dot(report.x);
  report.max_violation = lp.violation(report.x);
  return report;
}

// Traffic allocation in barrier form. capacity holds one entry per row of
// incidence (uniform capacity is the common case).
struct BarrierProblem {
  VectorXd cost;       // R_w, length n
  MatrixXd incidence;  // A, E x n
  double demand = 0.0; // Q
  VectorXd capacity;   // length E
  std::optional<VectorXd> start;

  Eigen::Index commodities() const { return cost.size(); }
  Eigen::Index edges() const { return incidence.rows(); }
  Eigen::Index constraint_count() const { return commodities() + edges() + 1; }

  void validate() const {
    if (cost.size() == 0) throw DomainError("barrier problem needs at least one commodity");
    if (incidence.rows() > 0 && incidence.cols() != cost.size()) throw DomainError("incidence column mismatch");
    if (capacity.size() != incidence.rows()) throw DomainError("capacity length must equal edge count");
    if (!cost.allFinite() || !incidence.allFinite() || !capacity.allFinite() || !std::isfinite(demand)) {
      throw DomainError("barrier problem has non-finite data");
    }
  }

  // The same problem as a LinearProgram: -1^T x <= -Q, A x <= c, x >= 0.
  LinearProgram as_lp() const {
    LinearProgram lp;
    lp.c = cost;
    lp.A_ub = MatrixXd::Zero(edges() + 1, commodities());
    lp.A_ub.row(0).setConstant(-1.0);
    lp.A_ub.bottomRows(edges()) = incidence;
    lp.b_ub = VectorXd(edges() + 1);
    lp.b_ub[0] = -demand;
    lp.b_ub.tail(edges()) = capacity;
    return lp;
  }

  // Constraint system f(x) = G x - h <= 0 in the order: nonnegativity (n),
  // demand (1), capacity (E).
  std::pair<MatrixXd, VectorXd> constraint_system() const {
    const Eigen::Index n = commodities(), e = edges();
    MatrixXd G = MatrixXd::Zero(n + 1 + e, n);
    VectorXd h = VectorXd::Zero(n + 1 + e);
    G.topRows(n) = -MatrixXd::Identity(n, n);
    G.row(n).setConstant(-1.0);
    h[n] = -demand;
    G.bottomRows(e) = incidence;
    h.tail(e) = capacity;
    return {G, h};
  }
};

struct BarrierOptions {
  double t0 = 1.0;
  double growth = 10.0;       // mu: t <- mu t per outer stage
  double gap_tol = 1e-6;      // stop once (n+E+1)/t <= gap_tol
  double newton_tol = 1e-10;  // stop inner loop when decrement^2 / 2 <= newton_tol
  double residual_tol = 1e-6; // ... and the central-path residual is this small
  double armijo_beta = 0.5;
  double armijo_sigma = 0.01;
  double regularization = 1e-12;
  int max_newton = 200;
  int max_outer = 64;
  bool record_iterates = false;
};

// Closed-form central-path residual
//   t R_w - 1/x - (1/(1^T x - Q)) 1 + A^T (1/(c - A x)),
// with elementwise reciprocals. It is the gradient of the barrier objective.
inline VectorXd central_path_residual(const BarrierProblem& bp, const VectorXd& x, double t) {
  VectorXd r = t * bp.cost - x.cwiseInverse();
  r.array() -= 1.0 / (x.sum() - bp.demand);
  if (bp.edges() > 0) r += bp.incidence.transpose() * (bp.capacity - bp.incidence * x).cwiseInverse();
  return r;
}

// Same residual from an explicit slack vector laid out as in
// constraint_system(): x itself, then xᵀ1 − Q, then c − Ax.
inline VectorXd slack_residual(const BarrierProblem& bp, const VectorXd& slack, double t) {
  const Eigen::Index n = bp.commodities();
  VectorXd r = t * bp.cost - slack.head(n).cwiseInverse();
  r.array() -= 1.0 / slack[n];
  if (bp.edges() > 0) r += bp.incidence.transpose() * slack.tail(bp.edges()).cwiseInverse();
  return r;
}

namespace detail {

struct BarrierEval {
  const MatrixXd& G;
  const VectorXd& h;
  const VectorXd& cost;

  // Returns +inf outside the strict interior.
  double value(const VectorXd& x, const VectorXd& s, double t) const {
    if (s.minCoeff() <= 0.0) return kInf;
    return t * cost.dot(x) - s.array().log().sum();
  }

  // value(x + a dx, s - a gdx) - value(x, s), summed term by term so that the
  // tiny decreases near the central point are not lost against the size of
  // the objective itself.
  double change(const VectorXd& dx, const VectorXd& gdx, const VectorXd& s, double a, double t) const {
    double d = t * a * cost.dot(dx);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      double r = a * gdx[i] / s[i];
      if (!(r < 1.0)) return kInf;
      d -= std::log1p(-r);
    }
    return d;
  }
};

}  // namespace detail

// Finds a strictly feasible point by maximizing the smallest constraint slack.
// Returns nullopt when no point has positive slack on every constraint.
inline std::optional<VectorXd> barrier_phase_one(const BarrierProblem& bp, double* margin = nullptr) {
  auto [G, h] = bp.constraint_system();
  const Eigen::Index n = bp.commodities(), m = G.rows();
  LinearProgram lp;
  lp.c = VectorXd::Zero(n + 1);
  lp.c[n] = -1.0;
  lp.A_ub = MatrixXd::Zero(m, n + 1);
  lp.A_ub.leftCols(n) = G;
  lp.A_ub.col(n).setOnes();
  lp.b_ub = h;
  lp.lower = VectorXd::Constant(n + 1, -kInf);
  lp.upper = VectorXd::Constant(n + 1, kInf);
  lp.upper[n] = 1.0;
  auto rep = solve_lp(lp);
  if (!rep.optimal()) return std::nullopt;
  double s = rep.x[n];
  if (margin) *margin = s;
  double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (!(s > 1e-9 * scale)) return std::nullopt;
  VectorXd x = rep.x.head(n);
  if ((h - G * x).minCoeff() <= 0.0) return std::nullopt;
  return x;
}

// Log-barrier path following with damped Newton inner iterations.
inline SolveReport barrier_solve(const BarrierProblem& bp, const BarrierOptions& opt = {}) {
  bp.validate();
  if (!(opt.t0 > 0.0) || !(opt.growth > 1.0) || !(opt.gap_tol > 0.0)) {
    throw DomainError("barrier options need t0 > 0, growth > 1, gap_tol > 0");
  }
  auto [G, h] = bp.constraint_system();
  const double m = static_cast<double>(bp.constraint_count());
  const Eigen::Index n = bp.commodities();
  detail::BarrierEval eval{G, h, bp.cost};
  SolveReport report;

  VectorXd x;
  if (bp.start) {
    x = *bp.start;
    if (x.size() != n || (h - G * x).minCoeff() <= 0.0) throw DomainError("supplied start is not strictly feasible");
  } else {
    auto found = barrier_phase_one(bp);
    if (!found) {
      report.status = SolveStatus::infeasible;
      return report;
    }
    x = *found;
  }

  // Slacks are carried along with x rather than recomputed as h − Gx, which
  // would cancel catastrophically once the iterate hugs a constraint.
  VectorXd s = h - G * x;
  double t = opt.t0;
  for (int outer = 0; outer < opt.max_outer; ++outer) {
    double f = eval.value(x, s, t);
    bool converged = false;
    bool stalled = false;
    for (int inner = 0; inner < opt.max_newton; ++inner) {
      VectorXd inv = s.cwiseInverse();
      VectorXd grad = t * bp.cost + G.transpose() * inv;
      MatrixXd H = G.transpose() * inv.cwiseAbs2().asDiagonal() * G;
      H.diagonal().array() += opt.regularization;
      Eigen::LLT<MatrixXd> llt(H);
      VectorXd dx = -llt.solve(grad);
      double decrement = -grad.dot(dx) / 2.0;
      double residual = grad.cwiseAbs().maxCoeff();
      if (opt.record_iterates) report.iterates.push_back({outer, inner, t, f, decrement, s.minCoeff(), x});
      if (decrement <= opt.newton_tol && residual <= opt.residual_tol) {
        converged = true;
        break;
      }
      // Largest step keeping the iterate strictly inside.
      double step = 1.0;
      VectorXd gdx = G * dx;
      for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (gdx[i] > 0.0) step = std::min(step, 0.99 * s[i] / gdx[i]);
      }
      double slope = grad.dot(dx);
      double f_new = f;
      VectorXd x_new, s_new;
      if (decrement > opt.newton_tol) {
        while (step > 1e-20) {
          double df = eval.change(dx, gdx, s, step, t);
          if (df <= opt.armijo_sigma * step * slope) {
            x_new = x + step * dx;
            s_new = s - step * gdx;
            f_new = f + df;
            break;
          }
          step *= opt.armijo_beta;
        }
        if (!(step > 1e-20)) {
          stalled = true;
          break;
        }
      } else {
        // Inside the quadratic region the decrease is at the rounding level of
        // f; take the feasible Newton step if it lowers the gradient without
        // raising f.
        double df = eval.change(dx, gdx, s, step, t);
        x_new = x + step * dx;
        s_new = s - step * gdx;
        f_new = f + df;
        if (!(df <= 0.0)) {
          stalled = true;
          break;
        }
        double res_new = (t * bp.cost + G.transpose() * s_new.cwiseInverse()).cwiseAbs().maxCoeff();
        if (!(res_new < residual)) {
          stalled = true;
          break;
        }
      }
      x = std::move(x_new);
      s = std::move(s_new);
      f = f_new;
      ++report.iterations;
    }
    report.stage_t.push_back(t);
    report.stage_residuals.push_back(slack_residual(bp, s, t).cwiseAbs().maxCoeff());
    if (!converged && !stalled) {
      report.status = SolveStatus::max_iter;
      break;
    }
    // A stalled stage is accepted once its residual is at the rounding floor
    // of t * cost; below that no step can be resolved.
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * t * bp.cost.cwiseAbs().maxCoeff();
    if (stalled && report.stage_residuals.back() > std::max(opt.residual_tol, floor)) {
      report.status = SolveStatus::max_iter;
      break;
    }
    if (m / t <= opt.gap_tol) {
      report.status = SolveStatus::optimal;
      break;
    }
    t *= opt.growth;
  }
  report.slack = s;
  report.x = x;
  report.objective = bp.cost.dot(x);
  report.gap_bound = m / report.stage_t.back();
  report.max_violation = std::max(0.0, (G * x - h).maxCoeff());
  return report;
}

}  // namespace vanet
