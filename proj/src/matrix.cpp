#include "jgl/matrix.hpp"

#include <cmath>
#include <string>

#include "jgl/errors.hpp"

namespace jgl {

SymMatrix::SymMatrix(Index p) : m_(Eigen::MatrixXd::Zero(p, p)) {
  if (p == 0) throw InputError("SymMatrix: dimension must be at least 1");
}

SymMatrix SymMatrix::identity(Index p) {
  SymMatrix out(p);
  out.m_.diagonal().setOnes();
  return out;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix out(d.size());
  for (Index i = 0; i < d.size(); ++i) out.m_(i, i) = d[i];
  return out;
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw InputError("SymMatrix: expected a non-empty square matrix");
  if (!a.allFinite()) throw InputError("SymMatrix: non-finite entry");
  Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  return SymMatrix(std::move(sym), Unchecked{});
}

SymMatrix SymMatrix::from_symmetric(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw InputError("SymMatrix: expected a non-empty square matrix");
  if (!a.allFinite()) throw InputError("SymMatrix: non-finite entry");
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = j + 1; i < a.rows(); ++i)
      if (a(i, j) != a(j, i))
        throw InputError("SymMatrix: matrix is not symmetric at (" +
                         std::to_string(i) + "," + std::to_string(j) + ")");
  return SymMatrix(a, Unchecked{});
}

void SymMatrix::add(Index i, Index j, double v) {
  m_(i, j) += v;
  if (i != j) m_(j, i) = m_(i, j);
}

SampleMatrix::SampleMatrix(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() == 0 || rows_.cols() == 0)
    throw InputError("SampleMatrix: need n >= 1 and p >= 1");
  if (!rows_.allFinite()) throw InputError("SampleMatrix: non-finite entry");
}

SymMatrix empirical_covariance(const SampleMatrix& x) {
  const Eigen::MatrixXd& rows = x.rows();
  Eigen::RowVectorXd mean = rows.colwise().mean();
  Eigen::MatrixXd centered = rows.rowwise() - mean;
  Eigen::MatrixXd s(x.p(), x.p());
  s.setZero();
  s.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(),
                                               1.0 / static_cast<double>(x.n()));
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  return SymMatrix::from_symmetric(s);
}

EigenDecomposition sym_eigen(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.dense(),
                                                        Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericError("sym_eigen: eigensolver did not converge for " +
                       std::to_string(a.dim()) + "x" + std::to_string(a.dim()) +
                       " matrix");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

SymMatrix extract_block(const SymMatrix& a, std::span<const Index> idx) {
  const Index p = a.dim();
  for (Index r = 0; r < idx.size(); ++r) {
    if (idx[r] >= p)
      throw InputError("extract_block: index " + std::to_string(idx[r]) +
                       " out of range for dimension " + std::to_string(p));
    if (r > 0 && idx[r] <= idx[r - 1])
      throw InputError("extract_block: indices must be strictly ascending");
  }
  if (idx.empty()) throw InputError("extract_block: empty index list");
  const Index m = idx.size();
  Eigen::MatrixXd out(m, m);
  const Eigen::MatrixXd& src = a.dense();
  for (Index c = 0; c < m; ++c)
    for (Index r = 0; r < m; ++r) out(r, c) = src(idx[r], idx[c]);
  return SymMatrix::from_symmetric(out);
}

void scatter_block(SymMatrix& target, std::span<const Index> idx,
                   const SymMatrix& block) {
  if (idx.size() != block.dim())
    throw InputError("scatter_block: index count " + std::to_string(idx.size()) +
                     " does not match block dimension " +
                     std::to_string(block.dim()));
  for (Index r : idx)
    if (r >= target.dim())
      throw InputError("scatter_block: index " + std::to_string(r) +
                       " out of range for dimension " +
                       std::to_string(target.dim()));
  for (Index c = 0; c < idx.size(); ++c)
    for (Index r = c; r < idx.size(); ++r) target.set(idx[r], idx[c], block(r, c));
}

Index common_dimension(const CovarianceSet& s) {
  if (s.empty()) throw InputError("covariance set is empty");
  const Index p = s.front().dim();
  for (Index k = 1; k < s.size(); ++k)
    if (s[k].dim() != p)
      throw InputError("class " + std::to_string(k) + " has dimension " +
                       std::to_string(s[k].dim()) + ", expected " +
                       std::to_string(p));
  return p;
}

SymMatrix reassemble(const EigenDecomposition& e, const Eigen::VectorXd& values) {
  const Eigen::MatrixXd& q = e.eigenvectors;
  Eigen::MatrixXd out = q * values.asDiagonal() * q.transpose();
  return SymMatrix::from_dense(out);
}

double log_det_pd(const SymMatrix& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a.dense());
  if (llt.info() != Eigen::Success)
    throw NumericError("matrix of dimension " + std::to_string(a.dim()) +
                       " is not positive definite");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

SymMatrix inverse_pd(const SymMatrix& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a.dense());
  if (llt.info() != Eigen::Success)
    throw NumericError("matrix of dimension " + std::to_string(a.dim()) +
                       " is not positive definite");
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(a.dim(), a.dim()));
  return SymMatrix::from_dense(inv);
}

}  // namespace jgl
