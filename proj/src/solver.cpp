#include "jgl/solver.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "jgl/errors.hpp"
#include "jgl/parallel.hpp"

namespace jgl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_classes(std::span<const SymMatrix> a, Index classes, Index p,
                   const char* what) {
  if (a.size() != classes)
    throw InputError(std::string(what) + ": expected " + std::to_string(classes) +
                     " matrices, got " + std::to_string(a.size()));
  for (const SymMatrix& m : a)
    if (m.dim() != p)
      throw InputError(std::string(what) + ": dimension mismatch");
}

Index shared_dim(std::span<const SymMatrix> a, const char* what) {
  if (a.empty()) throw InputError(std::string(what) + ": no matrices");
  Index p = a.front().dim();
  check_classes(a, a.size(), p, what);
  return p;
}

// Positive root of ρθ² + dθ − 1 = 0.
inline double positive_root(double d, double rho) {
  return (-d + std::sqrt(d * d + 4.0 * rho)) / (2.0 * rho);
}

struct BlockSolution {
  Eigen::MatrixXd theta;
  double log_det = 0.0;
};

BlockSolution solve_block(const Eigen::MatrixXd& a, double rho, Index p_total) {
  BlockSolution out;
  if (a.rows() == 1) {
    double t = positive_root(a(0, 0), rho);
    out.theta = Eigen::MatrixXd::Constant(1, 1, t);
    out.log_det = std::log(t);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success)
    throw NumericError("theta update: eigensolver failed on " +
                       std::to_string(a.rows()) + "x" + std::to_string(a.rows()) +
                       " block (p=" + std::to_string(p_total) + ")");
  Eigen::VectorXd vals(a.rows());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    vals(i) = positive_root(eig.eigenvalues()(i), rho);
    out.log_det += std::log(vals(i));
  }
  const Eigen::MatrixXd& q = eig.eigenvectors();
  out.theta = q * vals.asDiagonal() * q.transpose();
  return out;
}

}  // namespace

void PenaltyConfig::validate() const {
  if (!(lambda1 >= 0.0) || !std::isfinite(lambda1))
    throw ConfigError("lambda1 must be finite and non-negative");
  if (!(lambda2 >= 0.0) || !std::isfinite(lambda2))
    throw ConfigError("lambda2 must be finite and non-negative");
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw ConfigError("rho must be finite and positive");
}

double penalty_value(std::span<const SymMatrix> theta, const PenaltyConfig& penalty) {
  const Index p = shared_dim(theta, "penalty");
  double l1 = 0.0;
  double group = 0.0;
  for (Index j = 0; j < p; ++j)
    for (Index i = j + 1; i < p; ++i) {
      double sq = 0.0;
      for (const SymMatrix& t : theta) {
        const double v = t(i, j);
        l1 += std::abs(v);
        sq += v * v;
      }
      group += std::sqrt(sq);
    }
  // Each unordered pair appears twice in Σ_{i≠j}.
  return penalty.lambda1 * 2.0 * l1 + penalty.lambda2 * 2.0 * group;
}

double objective(const CovarianceSet& s, std::span<const SymMatrix> theta,
                 const PenaltyConfig& penalty) {
  const Index p = common_dimension(s);
  check_classes(theta, s.size(), p, "objective");
  double loss = 0.0;
  for (Index k = 0; k < s.size(); ++k) {
    loss += -log_det_pd(theta[k]) +
            s[k].dense().cwiseProduct(theta[k].dense()).sum();
  }
  return loss + penalty_value(theta, penalty);
}

SymMatrix theta_block_update(const SymMatrix& s_block, const SymMatrix& y_block,
                             const SymMatrix& u_block, double rho) {
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  if (s_block.dim() != y_block.dim() || s_block.dim() != u_block.dim())
    throw InputError("theta_block_update: block dimensions differ");
  Eigen::MatrixXd a = s_block.dense() - rho * (y_block.dense() - u_block.dense());
  return SymMatrix::from_dense(solve_block(a, rho, s_block.dim()).theta);
}

void group_prox(std::span<const double> a, double lambda1_eff, double lambda2_eff,
                std::span<double> out) {
  double norm_sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double mag = std::abs(a[k]) - lambda1_eff;
    out[k] = mag > 0.0 ? std::copysign(mag, a[k]) : 0.0;
    norm_sq += out[k] * out[k];
  }
  if (norm_sq == 0.0) return;
  const double norm = std::sqrt(norm_sq);
  const double scale = norm > lambda2_eff ? 1.0 - lambda2_eff / norm : 0.0;
  for (double& v : out) v *= scale;
}

std::vector<double> group_prox(std::span<const double> a, double lambda1_eff,
                               double lambda2_eff) {
  std::vector<double> out(a.size());
  group_prox(a, lambda1_eff, lambda2_eff, out);
  return out;
}

std::vector<SymMatrix> y_update(std::span<const SymMatrix> theta,
                                std::span<const SymMatrix> u,
                                const PenaltyConfig& penalty) {
  const Index p = shared_dim(theta, "y_update");
  const Index classes = theta.size();
  check_classes(u, classes, p, "y_update");
  const double l1 = penalty.lambda1 / penalty.rho;
  const double l2 = penalty.lambda2 / penalty.rho;
  std::vector<SymMatrix> y(classes, SymMatrix(p));
  std::vector<double> in(classes), out(classes);
  for (Index j = 0; j < p; ++j) {
    for (Index k = 0; k < classes; ++k) y[k].set(j, j, theta[k](j, j) + u[k](j, j));
    for (Index i = j + 1; i < p; ++i) {
      bool any = false;
      for (Index k = 0; k < classes; ++k) {
        in[k] = theta[k](i, j) + u[k](i, j);
        any |= in[k] != 0.0;
      }
      if (!any) continue;
      group_prox(in, l1, l2, out);
      for (Index k = 0; k < classes; ++k)
        if (out[k] != 0.0) y[k].set(i, j, out[k]);
    }
  }
  return y;
}

std::vector<SymMatrix> u_update(std::span<const SymMatrix> u,
                                std::span<const SymMatrix> theta,
                                std::span<const SymMatrix> y) {
  const Index p = shared_dim(u, "u_update");
  check_classes(theta, u.size(), p, "u_update");
  check_classes(y, u.size(), p, "u_update");
  std::vector<SymMatrix> out;
  out.reserve(u.size());
  for (Index k = 0; k < u.size(); ++k) out.push_back(u[k] + (theta[k] - y[k]));
  return out;
}

SolveResult admm_solve(const CovarianceSet& s, const PenaltyConfig& penalty,
                       const SolveOptions& opts) {
  penalty.validate();
  if (!(opts.tol_primal > 0.0) || !(opts.tol_dual > 0.0))
    throw ConfigError("stopping tolerances must be positive");
  const Index p = common_dimension(s);
  const Index classes = s.size();
  PartitionFamily partition = opts.partition.empty()
                                  ? PartitionFamily(classes, Partition::whole(p))
                                  : opts.partition;
  check_family(partition, p);
  if (partition.size() != classes)
    throw InputError("partition family has " + std::to_string(partition.size()) +
                     " classes, data has " + std::to_string(classes));

  struct Task {
    Index k;
    const IndexList* block;
  };
  std::vector<Task> tasks;
  for (Index k = 0; k < classes; ++k)
    for (const IndexList& comp : partition[k].components()) tasks.push_back({k, &comp});

  SolveResult result;
  SolveReport& report = result.report;
  for (const Partition& part : partition)
    report.block_complexities.push_back(complexity_estimate(part));

  AdmmState state;
  state.theta.assign(classes, SymMatrix(p));
  state.y.assign(classes, SymMatrix(p));
  state.u.assign(classes, SymMatrix(p));

  std::vector<double> task_log_det(tasks.size());
  std::vector<double> task_trace(tasks.size());
  const auto solve_start = Clock::now();

  while (state.iteration < opts.max_iter) {
    ++state.iteration;

    auto phase = Clock::now();
    std::vector<SymMatrix> theta(classes, SymMatrix(p));
    parallel_for(tasks.size(), opts.threads, [&](std::size_t t) {
      const Task& task = tasks[t];
      const IndexList& idx = *task.block;
      const Index m = idx.size();
      const Eigen::MatrixXd& sk = s[task.k].dense();
      const Eigen::MatrixXd& yk = state.y[task.k].dense();
      const Eigen::MatrixXd& uk = state.u[task.k].dense();
      Eigen::MatrixXd a(m, m);
      for (Index c = 0; c < m; ++c)
        for (Index r = 0; r < m; ++r) {
          const Index i = idx[r], j = idx[c];
          a(r, c) = sk(i, j) - penalty.rho * (yk(i, j) - uk(i, j));
        }
      BlockSolution block = solve_block(a, penalty.rho, p);
      double trace = 0.0;
      SymMatrix& out = theta[task.k];
      for (Index c = 0; c < m; ++c)
        for (Index r = c; r < m; ++r) {
          const double v = 0.5 * (block.theta(r, c) + block.theta(c, r));
          out.set(idx[r], idx[c], v);
          trace += (r == c ? 1.0 : 2.0) * sk(idx[r], idx[c]) * v;
        }
      task_log_det[t] = block.log_det;
      task_trace[t] = trace;
    });
    state.theta = std::move(theta);
    report.wall_times.theta_step += seconds_since(phase);

    if (opts.record_objective) {
      double value = 0.0;
      for (Index t = 0; t < tasks.size(); ++t) value += task_trace[t] - task_log_det[t];
      report.objective_trace.push_back(value + penalty_value(state.theta, penalty));
    }

    phase = Clock::now();
    std::vector<SymMatrix> y = y_update(state.theta, state.u, penalty);
    state.dual_residual = 0.0;
    for (Index k = 0; k < classes; ++k)
      state.dual_residual += (y[k] - state.y[k]).frobenius();
    state.y = std::move(y);
    report.wall_times.y_step += seconds_since(phase);

    phase = Clock::now();
    state.u = u_update(state.u, state.theta, state.y);
    state.primal_residual = 0.0;
    for (Index k = 0; k < classes; ++k)
      state.primal_residual += (state.theta[k] - state.y[k]).frobenius();
    report.wall_times.u_step += seconds_since(phase);

    if (state.primal_residual < opts.tol_primal && state.dual_residual < opts.tol_dual) {
      report.converged = true;
      break;
    }
  }
  report.wall_times.total = seconds_since(solve_start);
  report.iterations = state.iteration;
  report.primal_residual = state.primal_residual;
  report.dual_residual = state.dual_residual;

  try {
    report.final_objective = objective(s, state.y, penalty);
  } catch (const NumericError&) {
    // Y need not be PD before convergence; Θ always is.
    report.final_objective = objective(s, state.theta, penalty);
  }
  result.solution = std::move(state.y);
  return result;
}

double kkt_residual(const CovarianceSet& s, std::span<const SymMatrix> theta,
                    const PenaltyConfig& penalty) {
  const Index p = common_dimension(s);
  const Index classes = s.size();
  check_classes(theta, classes, p, "kkt_residual");
  // Gradient of the smooth part: S − Θ⁻¹.
  std::vector<Eigen::MatrixXd> grad;
  grad.reserve(classes);
  for (Index k = 0; k < classes; ++k)
    grad.push_back(s[k].dense() - inverse_pd(theta[k]).dense());

  const double l1 = penalty.lambda1;
  const double l2 = penalty.lambda2;
  double worst = 0.0;
  for (Index j = 0; j < p; ++j) {
    for (Index k = 0; k < classes; ++k) worst = std::max(worst, std::abs(grad[k](j, j)));
    for (Index i = j + 1; i < p; ++i) {
      double norm_sq = 0.0;
      for (Index k = 0; k < classes; ++k) norm_sq += theta[k](i, j) * theta[k](i, j);
      if (norm_sq > 0.0) {
        const double norm = std::sqrt(norm_sq);
        for (Index k = 0; k < classes; ++k) {
          const double t = theta[k](i, j);
          const double g = grad[k](i, j);
          const double v = t != 0.0
                               ? std::abs(g + l1 * std::copysign(1.0, t) + l2 * t / norm)
                               : std::max(0.0, std::abs(g) - l1);
          worst = std::max(worst, v);
        }
      } else {
        // 0 ∈ g + λ1[-1,1] + λ2·ball  ⇔  ‖soft(g, λ1)‖₂ ≤ λ2.
        double soft_sq = 0.0;
        for (Index k = 0; k < classes; ++k) {
          const double e = std::abs(grad[k](i, j)) - l1;
          if (e > 0.0) soft_sq += e * e;
        }
        worst = std::max(worst, std::sqrt(soft_sq) - l2);
      }
    }
  }
  return worst;
}

}  // namespace jgl
