#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jgl/matrix.hpp"
#include "jgl/screening.hpp"

namespace jgl {

struct PenaltyConfig {
  double lambda1 = 0.0;  // elementwise, off-diagonal only
  double lambda2 = 0.0;  // cross-class group weight
  double rho = 1.0;      // augmented Lagrangian parameter

  // Throws ConfigError unless λ1, λ2 >= 0 and ρ > 0.
  void validate() const;
};

struct AdmmState {
  std::vector<SymMatrix> theta;
  std::vector<SymMatrix> y;
  std::vector<SymMatrix> u;
  Index iteration = 0;
  double primal_residual = 0.0;  // Σ_k ‖Θ − Y‖_F
  double dual_residual = 0.0;    // Σ_k ‖Y_new − Y_old‖_F
};

struct SolveOptions {
  double tol_primal = 1e-6;
  double tol_dual = 1e-6;
  Index max_iter = 10000;
  // Empty means one block per class (plain ADMM).
  PartitionFamily partition;
  bool record_objective = false;
  unsigned threads = 1;
};

struct PhaseTimes {
  double theta_step = 0.0;
  double y_step = 0.0;
  double u_step = 0.0;
  double total = 0.0;
};

struct SolveReport {
  std::vector<double> objective_trace;  // objective at Θ after each Θ-step
  Index iterations = 0;
  bool converged = false;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  PhaseTimes wall_times;  // seconds
  double final_objective = 0.0;
  std::vector<std::uint64_t> block_complexities;
};

struct SolveResult {
  std::vector<SymMatrix> solution;  // the exactly sparse Y iterate
  SolveReport report;
};

// Σ_k[−logdet Θ + tr(SΘ)] + λ1 Σ_k Σ_{i≠j}|Θ_ij| + 2λ2 Σ_{i<j} ‖Θ_ij‖₂.
// Throws NumericError when some Θ^(k) is not PD.
double objective(const CovarianceSet& s, std::span<const SymMatrix> theta,
                 const PenaltyConfig& penalty);

// Penalty part of the objective alone.
double penalty_value(std::span<const SymMatrix> theta, const PenaltyConfig& penalty);

// PD solution of Θ⁻¹ = S + ρ(Θ − Y + U) on one block.
SymMatrix theta_block_update(const SymMatrix& s_block, const SymMatrix& y_block,
                             const SymMatrix& u_block, double rho);

// Minimizer of ½‖y − a‖² + λ1‖y‖₁ + λ2‖y‖₂, written into out.
void group_prox(std::span<const double> a, double lambda1_eff, double lambda2_eff,
                std::span<double> out);
std::vector<double> group_prox(std::span<const double> a, double lambda1_eff,
                               double lambda2_eff);

std::vector<SymMatrix> y_update(std::span<const SymMatrix> theta,
                                std::span<const SymMatrix> u,
                                const PenaltyConfig& penalty);

std::vector<SymMatrix> u_update(std::span<const SymMatrix> u,
                                std::span<const SymMatrix> theta,
                                std::span<const SymMatrix> y);

// Block ADMM. The partition must be feasible for (s, penalty); entries that
// cross blocks of a class stay exactly zero. Reaching max_iter is reported
// through report.converged, not an exception.
SolveResult admm_solve(const CovarianceSet& s, const PenaltyConfig& penalty,
                       const SolveOptions& opts);

// Largest violation of the optimality conditions at theta (taken as the
// exact sparsity pattern). Throws NumericError when theta is not PD.
double kkt_residual(const CovarianceSet& s, std::span<const SymMatrix> theta,
                    const PenaltyConfig& penalty);

}  // namespace jgl
