#include "jgl/validation.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "jgl/errors.hpp"
#include "jgl/solver.hpp"

namespace jgl {

std::string to_string(Clause clause) {
  return clause == Clause::all_separated ? "all_separated" : "class_separated";
}

EdgePatternSet edge_pattern(std::span<const SymMatrix> theta, double zero_tol) {
  if (theta.empty()) throw InputError("edge_pattern: no matrices");
  if (!(zero_tol >= 0.0)) throw InputError("edge_pattern: zero_tol must be >= 0");
  const Index p = theta.front().dim();
  EdgePatternSet out;
  out.mixed = BinaryMatrix(p);
  for (const SymMatrix& t : theta) {
    if (t.dim() != p) throw InputError("edge_pattern: dimension mismatch");
    BinaryMatrix e(p);
    for (Index j = 0; j < p; ++j)
      for (Index i = j + 1; i < p; ++i)
        if (std::abs(t(i, j)) > zero_tol) {
          e.set(i, j, true);
          out.mixed.set(i, j, true);
        }
    out.per_class.push_back(std::move(e));
  }
  return out;
}

std::pair<PartitionFamily, Partition> solution_partition(const EdgePatternSet& e) {
  PartitionFamily family;
  family.reserve(e.per_class.size());
  for (const BinaryMatrix& ek : e.per_class) family.push_back(connected_components(ek));
  return {std::move(family), connected_components(e.mixed)};
}

namespace {

void finish(ConditionReport& report) {
  std::sort(report.violations.begin(), report.violations.end(),
            [](const Violation& a, const Violation& b) {
              const Index ka = a.k.value_or(0), kb = b.k.value_or(0);
              return std::tie(a.clause, ka, a.i, a.j) < std::tie(b.clause, kb, b.i, b.j);
            });
  report.satisfied = report.violations.empty();
}

void note_slack(ConditionReport& report, double lhs, double rhs) {
  const double slack = rhs - lhs;
  if (!report.min_slack || slack < *report.min_slack) report.min_slack = slack;
}

// Shared scan for both conditions; class_bound(k, i, j) supplies the
// per-class right-hand side.
template <typename ClassBound>
ConditionReport scan(const CovarianceSet& s, const PartitionFamily& family,
                     double lambda1, double lambda2, double slack_tol,
                     ClassBound&& class_bound) {
  const Index p = common_dimension(s);
  check_family(family, p);
  if (family.size() != s.size())
    throw InputError("partition family has " + std::to_string(family.size()) +
                     " classes, data has " + std::to_string(s.size()));
  const Index classes = s.size();
  ConditionReport report;
  std::vector<char> joined(classes);
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      Index joined_count = 0;
      for (Index k = 0; k < classes; ++k) {
        joined[k] = family[k].same(i, j);
        joined_count += joined[k];
      }
      if (joined_count == classes) continue;
      ++report.pairs_checked;
      if (joined_count == 0) {
        const double lhs = excess_sum_sq(s, i, j, lambda1);
        const double rhs = lambda2 * lambda2;
        note_slack(report, lhs, rhs);
        if (lhs > rhs + slack_tol)
          report.violations.push_back({Clause::all_separated, std::nullopt, i, j, lhs, rhs});
        continue;
      }
      for (Index k = 0; k < classes; ++k) {
        if (joined[k]) continue;
        const double lhs = std::abs(s[k](i, j));
        const double rhs = class_bound(k, i, j);
        note_slack(report, lhs, rhs);
        if (lhs > rhs + slack_tol)
          report.violations.push_back({Clause::class_separated, k, i, j, lhs, rhs});
      }
    }
  }
  finish(report);
  return report;
}

}  // namespace

ConditionReport check_sufficient(const CovarianceSet& s, const PartitionFamily& family,
                                 double lambda1, double lambda2) {
  return scan(s, family, lambda1, lambda2, 0.0,
              [&](Index, Index, Index) { return lambda1; });
}

std::vector<SymMatrix> necessary_bounds(std::span<const SymMatrix> theta_opt,
                                        double lambda1, double lambda2,
                                        double zero_tol) {
  if (theta_opt.empty()) throw InputError("necessary_bounds: no matrices");
  const Index p = theta_opt.front().dim();
  const Index classes = theta_opt.size();
  std::vector<SymMatrix> z(classes, SymMatrix(p));
  for (Index i = 0; i < p; ++i)
    for (Index j = i + 1; j < p; ++j)
      for (Index k = 0; k < classes; ++k) {
        bool others_zero = true;
        for (Index t = 0; t < classes; ++t)
          if (t != k && std::abs(theta_opt[t](i, j)) > zero_tol) others_zero = false;
        z[k].set(i, j, lambda1 + (others_zero ? lambda2 : 0.0));
      }
  return z;
}

ConditionReport check_necessary(const CovarianceSet& s,
                                std::span<const SymMatrix> theta_opt,
                                const PartitionFamily& family, double lambda1,
                                double lambda2, double zero_tol, double slack_tol,
                                double kkt_gate) {
  const Index p = common_dimension(s);
  if (theta_opt.size() != s.size())
    throw InputError("check_necessary: solution has " + std::to_string(theta_opt.size()) +
                     " classes, data has " + std::to_string(s.size()));
  for (const SymMatrix& t : theta_opt)
    if (t.dim() != p) throw InputError("check_necessary: dimension mismatch");
  const double kkt = kkt_residual(s, theta_opt, PenaltyConfig{lambda1, lambda2, 1.0});
  if (!(kkt <= kkt_gate))
    throw PreconditionError("check_necessary: solution is not converged (KKT residual " +
                            std::to_string(kkt) + " > " + std::to_string(kkt_gate) + ")");
  std::vector<SymMatrix> z = necessary_bounds(theta_opt, lambda1, lambda2, zero_tol);
  return scan(s, family, lambda1, lambda2, slack_tol,
              [&](Index k, Index i, Index j) { return z[k](i, j); });
}

}  // namespace jgl
