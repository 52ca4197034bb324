#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jgl/matrix.hpp"
#include "jgl/screening.hpp"

namespace jgl {

// Per-class off-diagonal supports plus their union. Diagonals are always set
// and carry no information.
struct EdgePatternSet {
  std::vector<BinaryMatrix> per_class;
  BinaryMatrix mixed{1};
};

enum class Clause {
  all_separated,   // separated in every class: Σ_k(|S_ij| − λ1)₊² ≤ λ2²
  class_separated  // separated in class k, joined in another: |S^k_ij| ≤ bound
};

std::string to_string(Clause clause);

struct Violation {
  Clause clause;
  std::optional<Index> k;  // absent for all_separated
  Index i;
  Index j;
  double lhs;
  double rhs;
};

struct ConditionReport {
  bool satisfied = true;
  std::vector<Violation> violations;  // sorted by (clause, k, i, j)
  Index pairs_checked = 0;
  // Smallest rhs − lhs over all checked constraints; negative iff violated.
  std::optional<double> min_slack;
};

inline constexpr double kDefaultZeroTol = 1e-6;
inline constexpr double kNecessaryKktGate = 1e-4;

EdgePatternSet edge_pattern(std::span<const SymMatrix> theta, double zero_tol);

std::pair<PartitionFamily, Partition> solution_partition(const EdgePatternSet& e);

// Sufficient condition for a per-class family to be feasible.
ConditionReport check_sufficient(const CovarianceSet& s, const PartitionFamily& family,
                                 double lambda1, double lambda2);

// Z^(k)_ij = λ1 + λ2·[Σ_{t≠k}|Θ^(t)_ij| = 0], zero tested against zero_tol.
std::vector<SymMatrix> necessary_bounds(std::span<const SymMatrix> theta_opt,
                                        double lambda1, double lambda2,
                                        double zero_tol);

// Necessary condition at an optimal solution. Throws PreconditionError when
// the KKT residual of theta_opt exceeds kkt_gate. A constraint counts as
// violated only when lhs exceeds rhs by more than slack_tol.
ConditionReport check_necessary(const CovarianceSet& s,
                                std::span<const SymMatrix> theta_opt,
                                const PartitionFamily& family, double lambda1,
                                double lambda2, double zero_tol = kDefaultZeroTol,
                                double slack_tol = kDefaultZeroTol,
                                double kkt_gate = kNecessaryKktGate);

}  // namespace jgl
