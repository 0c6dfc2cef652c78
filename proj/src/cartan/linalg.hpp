#pragma once

// Dense complex linear algebra shared by every module. Vectorisation of an
// m x n matrix is row-major throughout: entry (j, l) sits at j * n + l.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace cartan {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Kronecker product with entry (j*p + l, k*q + r) = a(j,k) * b(l,r).
CMat kronecker(const CMat& a, const CMat& b);

/// Row-major vectorisation and its inverse.
CVec vec_rows(const CMat& m);
CMat unvec_rows(const CVec& v, Eigen::Index rows, Eigen::Index cols);

/// Z = U * (sum_k lambda_k E_kk) * V with U (m x m), V (n x n) unitary and
/// lambda descending. Requires rows <= cols.
struct SvdNormalForm {
  CMat u;
  RVec lambdas;
  CMat v;

  /// The m x n matrix sum_k lambda_k E_kk.
  CMat diagonal() const;
  CMat reconstruct() const;
};

SvdNormalForm svd_normal_form(const CMat& z);

double operator_norm(const CMat& z);

/// Smallest eigenvalue of a Hermitian matrix (symmetrised before solving).
double min_hermitian_eigenvalue(const CMat& h);

/// Upper-triangular R with positive diagonal and A = R R^H (A Hermitian PD).
/// Throws Conditioning when A is not numerically positive definite.
CMat upper_cholesky(const CMat& a);

/// Maximum of |a(i,j) - b(i,j)|.
double max_abs_diff(const CMat& a, const CMat& b);

/// Residual of U^H U against the identity.
double unitarity_residual(const CMat& u);

}  // namespace cartan
