#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace jgl {

using Index = std::size_t;
using IndexList = std::vector<Index>;

// Dense symmetric matrix. Every mutation writes both (i,j) and (j,i), so the
// stored matrix is symmetric by construction.
class SymMatrix {
 public:
  explicit SymMatrix(Index p = 1);

  static SymMatrix zeros(Index p) { return SymMatrix(p); }
  static SymMatrix identity(Index p);
  static SymMatrix diagonal(std::span<const double> d);
  // Symmetrizes (A + Aᵀ)/2; throws InputError if the result is not finite or
  // A is not square.
  static SymMatrix from_dense(const Eigen::MatrixXd& a);
  // Requires exact symmetry; throws InputError otherwise.
  static SymMatrix from_symmetric(const Eigen::MatrixXd& a);

  Index dim() const { return static_cast<Index>(m_.rows()); }
  double operator()(Index i, Index j) const { return m_(i, j); }
  void set(Index i, Index j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  void add(Index i, Index j, double v);

  const Eigen::MatrixXd& dense() const { return m_; }

  double frobenius() const { return m_.norm(); }
  double trace() const { return m_.trace(); }

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

  // Entrywise arithmetic keeps exact symmetry, so no re-check is needed.
  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    return SymMatrix(a.m_ + b.m_, Unchecked{});
  }
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    return SymMatrix(a.m_ - b.m_, Unchecked{});
  }
  friend SymMatrix operator*(double c, const SymMatrix& a) {
    return SymMatrix(c * a.m_, Unchecked{});
  }

 private:
  struct Unchecked {};
  SymMatrix(Eigen::MatrixXd m, Unchecked) : m_(std::move(m)) {}

  Eigen::MatrixXd m_;
};

// Row-per-observation sample matrix (n × p).
class SampleMatrix {
 public:
  // Throws InputError on empty shape or non-finite entries.
  explicit SampleMatrix(Eigen::MatrixXd rows);

  Index n() const { return static_cast<Index>(rows_.rows()); }
  Index p() const { return static_cast<Index>(rows_.cols()); }
  const Eigen::MatrixXd& rows() const { return rows_; }

 private:
  Eigen::MatrixXd rows_;
};

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // column j pairs with eigenvalue j
};

using CovarianceSet = std::vector<SymMatrix>;

// Maximum-likelihood covariance, normalized by 1/n.
SymMatrix empirical_covariance(const SampleMatrix& x);

EigenDecomposition sym_eigen(const SymMatrix& a);

SymMatrix extract_block(const SymMatrix& a, std::span<const Index> idx);

// Writes block into target at rows/cols idx; all other entries untouched.
void scatter_block(SymMatrix& target, std::span<const Index> idx,
                   const SymMatrix& block);

// Throws InputError unless every matrix has the same dimension; returns it.
Index common_dimension(const CovarianceSet& s);

// A = Q diag(f(d)) Qᵀ for a decomposition.
SymMatrix reassemble(const EigenDecomposition& e, const Eigen::VectorXd& values);

// logdet via Cholesky; throws NumericError when a is not positive definite.
double log_det_pd(const SymMatrix& a);

// Inverse of a PD matrix; throws NumericError when not PD.
SymMatrix inverse_pd(const SymMatrix& a);

}  // namespace jgl
