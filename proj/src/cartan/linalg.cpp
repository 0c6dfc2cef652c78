#include "cartan/linalg.hpp"

#include <algorithm>

#include "cartan/error.hpp"

namespace cartan {

CMat kronecker(const CMat& a, const CMat& b) {
  const auto p = b.rows();
  const auto q = b.cols();
  CMat out(a.rows() * p, a.cols() * q);
  for (Eigen::Index j = 0; j < a.rows(); ++j)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      out.block(j * p, k * q, p, q) = a(j, k) * b;
  return out;
}

CVec vec_rows(const CMat& m) {
  CVec v(m.size());
  for (Eigen::Index j = 0; j < m.rows(); ++j)
    for (Eigen::Index l = 0; l < m.cols(); ++l) v(j * m.cols() + l) = m(j, l);
  return v;
}

CMat unvec_rows(const CVec& v, Eigen::Index rows, Eigen::Index cols) {
  require(v.size() == rows * cols, "unvec_rows: length mismatch");
  CMat m(rows, cols);
  for (Eigen::Index j = 0; j < rows; ++j)
    for (Eigen::Index l = 0; l < cols; ++l) m(j, l) = v(j * cols + l);
  return m;
}

CMat SvdNormalForm::diagonal() const {
  CMat d = CMat::Zero(u.rows(), v.rows());
  for (Eigen::Index k = 0; k < lambdas.size(); ++k) d(k, k) = lambdas(k);
  return d;
}

CMat SvdNormalForm::reconstruct() const { return u * diagonal() * v; }

SvdNormalForm svd_normal_form(const CMat& z) {
  require(z.rows() <= z.cols(), "svd_normal_form: requires rows <= cols");
  Eigen::JacobiSVD<CMat> svd(z, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // Eigen returns Z = U S V^H with singular values already descending.
  return SvdNormalForm{svd.matrixU(), svd.singularValues(), svd.matrixV().adjoint()};
}

double operator_norm(const CMat& z) {
  if (z.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(z);
  return svd.singularValues()(0);
}

double min_hermitian_eigenvalue(const CMat& h) {
  const CMat sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

CMat upper_cholesky(const CMat& a) {
  // Cholesky of the index-reversed matrix, reversed back.
  const auto n = a.rows();
  CMat flipped(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) flipped(i, j) = a(n - 1 - i, n - 1 - j);
  Eigen::LLT<CMat> llt(flipped);
  if (llt.info() != Eigen::Success)
    fail(ErrorKind::Conditioning, "upper_cholesky: matrix not positive definite");
  const CMat l = llt.matrixL();
  CMat r(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) r(i, j) = l(n - 1 - i, n - 1 - j);
  return r;
}

double max_abs_diff(const CMat& a, const CMat& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

double unitarity_residual(const CMat& u) {
  return max_abs_diff(u.adjoint() * u, CMat::Identity(u.cols(), u.cols()));
}

}  // namespace cartan
