#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "cartan/domains.hpp"
#include "cartan/linalg.hpp"

namespace cartan::testing {

/// Log-potential whose complex Hessian is the Bergman metric.
inline double potential(const Domain& d, const CVec& v) {
  switch (d.kind()) {
    case DomainKind::I:
    case DomainKind::II: {
      const CMat z = to_matrix(d, v);
      const double c = d.kind() == DomainKind::I ? d.rows() + d.cols() : d.rows() + 1;
      const CMat a = CMat::Identity(z.rows(), z.rows()) - z * z.adjoint();
      return -c * std::log(a.determinant().real());
    }
    case DomainKind::III: {
      const CMat z = to_matrix(d, v);
      const CMat a = CMat::Identity(z.rows(), z.rows()) - z * z.adjoint();
      return -2.0 * (d.rows() - 1) * std::log(a.determinant().real());
    }
    case DomainKind::IV: {
      const cplx s = (v.array() * v.array()).sum();
      return -static_cast<double>(v.size()) * std::log(1.0 + std::norm(s) - 2.0 * v.squaredNorm());
    }
    case DomainKind::Product: {
      double sum = 0.0;
      for (std::size_t i = 0; i < d.factors().size(); ++i) sum += potential(d.factors()[i], factor_slice(d, i, v));
      return sum;
    }
  }
  return 0.0;
}

/// d^2/dt dt-bar of the potential along z + t v, by the five-point Laplacian.
inline double hessian_form_fd(const Domain& d, const CVec& z, const CVec& v, double h = 1e-4) {
  const cplx i(0.0, 1.0);
  const double lap = potential(d, z + h * v) + potential(d, z - h * v) + potential(d, z + i * h * v) +
                     potential(d, z - i * h * v) - 4.0 * potential(d, z);
  return lap / (4.0 * h * h);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace cartan::testing
