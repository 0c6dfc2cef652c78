#pragma once

// Bergman metrics of the classical domains and their products, stored in the
// column-vector convention H_z(v, v) = v^H G(z) v over intrinsic coordinates.
//
// Kind I uses G = (m+n) (I - Z Z^H)^{-1} (x) conj((I - Z^H Z)^{-1}); kinds II
// and III restrict the same ambient form (with their own constants) to the
// symmetric / antisymmetric subspace; kind IV uses the Lie-ball formula.
// Products are block diagonal.

#include "cartan/domains.hpp"

namespace cartan {

/// Points closer to the boundary than this are refused by every metric
/// operation.
inline constexpr double kMetricBoundaryFloor = 1e-8;

struct MetricMatrix {
  Domain domain;
  Point at;
  CMat gram;
};

MetricMatrix metric_matrix(const Domain& d, const Point& z);

/// v^H G v evaluated block by block for products, with the same floating
/// point operations as summing the factor forms.
double quadratic_form(const MetricMatrix& g, const Tangent& v);

/// H_z(v, v). Additive over product factors.
double bergman_form(const Domain& d, const Point& z, const Tangent& v);

/// Lower-triangular Cholesky factor L of G(z) together with L^{-H}. For kind
/// I both are assembled from triangular factors of I - ZZ^H and I - Z^H Z,
/// which keeps them accurate near the boundary.
struct MetricFactor {
  CMat lower;
  CMat inv_adjoint;
};

MetricFactor metric_factor(const Domain& d, const Point& z);

/// sup_v |grad . v|^2 / H_z(v, v) = grad G^{-1} grad^H, i.e. Q_f(z)^2 for a
/// function with holomorphic gradient `grad` (grad . v = sum_i grad_i v_i).
double rayleigh_sup(const Domain& d, const Point& z, const CVec& grad);

/// Throws OutsideDomain / Conditioning unless z is admissible for metric
/// evaluation.
void require_metric_point(const Domain& d, const Point& z);

}  // namespace cartan
