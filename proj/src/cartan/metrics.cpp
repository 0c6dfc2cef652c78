#include "cartan/metrics.hpp"

#include <cmath>
#include <sstream>

#include "cartan/error.hpp"

namespace cartan {

namespace {

double metric_constant(const Domain& d) {
  switch (d.kind()) {
    case DomainKind::I: return d.rows() + d.cols();
    case DomainKind::II: return d.rows() + 1;
    case DomainKind::III: return 2.0 * (d.rows() - 1);
    case DomainKind::IV: return 2.0 * d.rows();
    case DomainKind::Product: break;
  }
  return 0.0;
}

struct MatrixFactors {
  CMat a;  // I - Z Z^H
  CMat b;  // I - Z^H Z
};

// For II and III these coincide with I - Z Zbar / I + Z Zbar and their
// counterparts because Zbar = Z^H (symmetric) or Zbar = -Z^H (antisymmetric).
MatrixFactors matrix_factors(const Domain& d, const CVec& v) {
  const CMat z = to_matrix(d, v);
  return {CMat::Identity(z.rows(), z.rows()) - z * z.adjoint(),
          CMat::Identity(z.cols(), z.cols()) - z.adjoint() * z};
}

CMat hermitian_inverse(const CMat& a) {
  Eigen::LLT<CMat> llt(a);
  if (llt.info() != Eigen::Success) fail(ErrorKind::Conditioning, "metric: factor not positive definite");
  return llt.solve(CMat::Identity(a.rows(), a.cols()));
}

CMat symmetrize(const CMat& g) { return 0.5 * (g + g.adjoint()); }

CMat gram_irreducible(const Domain& d, const CVec& v) {
  const double c = metric_constant(d);
  if (d.kind() == DomainKind::IV) {
    const Eigen::Index n = v.size();
    const cplx s = (v.array() * v.array()).sum();
    const double norm2 = v.squaredNorm();
    const double delta = 1.0 + std::norm(s) - 2.0 * norm2;
    // t(l,k) multiplies u_l conj(u_k) in the row form; G is its transpose.
    CMat t(n, n);
    for (Eigen::Index l = 0; l < n; ++l)
      for (Eigen::Index k = 0; k < n; ++k) {
        const cplx zl = v(l), zk = v(k);
        const cplx inner = (1.0 - 2.0 * norm2) * zl * std::conj(zk) + std::conj(s) * zl * zk +
                           s * std::conj(zl) * std::conj(zk) - std::conj(zl) * zk;
        t(l, k) = (l == k ? cplx(delta) : cplx(0.0)) - 2.0 * inner;
      }
    return symmetrize((c / (delta * delta)) * t.transpose());
  }
  const auto f = matrix_factors(d, v);
  const CMat ambient = c * kronecker(hermitian_inverse(f.a), hermitian_inverse(f.b).conjugate());
  if (d.kind() == DomainKind::I) return symmetrize(ambient);
  const CMat s = ambient_embedding(d);
  return symmetrize(s.adjoint() * ambient * s);
}

CMat block_diagonal(const Domain& d, const std::vector<CMat>& blocks) {
  CMat out = CMat::Zero(d.dimension(), d.dimension());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto off = d.factor_offset(i);
    out.block(off, off, blocks[i].rows(), blocks[i].cols()) = blocks[i];
  }
  return out;
}

// sum_i conj(v_i) sum_j g_ij v_j over the index window [off, off + len).
// The imaginary part is rounding noise; it is judged against the size of the
// summed terms since the result itself may come from heavy cancellation.
double hermitian_form_window(const CMat& g, const CVec& v, Eigen::Index off, Eigen::Index len) {
  cplx total = 0.0;
  double magnitude = 0.0;
  for (Eigen::Index i = 0; i < len; ++i) {
    cplx row = 0.0;
    double row_mag = 0.0;
    for (Eigen::Index j = 0; j < len; ++j) {
      row += g(off + i, off + j) * v(off + j);
      row_mag += std::abs(g(off + i, off + j)) * std::abs(v(off + j));
    }
    total += std::conj(v(off + i)) * row;
    magnitude += std::abs(v(off + i)) * row_mag;
  }
  if (std::abs(total.imag()) > 1e-11 * magnitude)
    fail(ErrorKind::Conditioning, "bergman form has a non-negligible imaginary part");
  return total.real();
}

MetricFactor factor_irreducible(const Domain& d, const CVec& v) {
  if (d.kind() == DomainKind::I) {
    const double c = metric_constant(d);
    const auto f = matrix_factors(d, v);
    const CMat ra = upper_cholesky(f.a);
    const CMat rb = upper_cholesky(f.b).conjugate();
    const CMat ra_inv = ra.triangularView<Eigen::Upper>().solve(CMat::Identity(ra.rows(), ra.cols()));
    const CMat rb_inv = rb.triangularView<Eigen::Upper>().solve(CMat::Identity(rb.rows(), rb.cols()));
    return {std::sqrt(c) * kronecker(ra_inv.adjoint(), rb_inv.adjoint()),
            kronecker(ra, rb) / std::sqrt(c)};
  }
  const CMat g = gram_irreducible(d, v);
  Eigen::LLT<CMat> llt(g);
  if (llt.info() != Eigen::Success) fail(ErrorKind::Conditioning, "metric: Gram matrix not positive definite");
  const CMat l = llt.matrixL();
  const CMat lh = l.adjoint();
  return {l, lh.triangularView<Eigen::Upper>().solve(CMat::Identity(l.rows(), l.cols()))};
}

}  // namespace

void require_metric_point(const Domain& d, const Point& z) {
  check_length(d, z.coords, "metric");
  if (!contains(d, z)) fail(ErrorKind::OutsideDomain, "point outside " + d.describe());
  const double dist = boundary_surrogate(d, z);
  if (dist < kMetricBoundaryFloor) {
    std::ostringstream os;
    os << "point too close to the boundary of " << d.describe() << " (distance " << dist << ")";
    fail(ErrorKind::Conditioning, os.str());
  }
}

MetricMatrix metric_matrix(const Domain& d, const Point& z) {
  require_metric_point(d, z);
  if (d.kind() != DomainKind::Product) return {d, z, gram_irreducible(d, z.coords)};
  std::vector<CMat> blocks;
  for (std::size_t i = 0; i < d.factors().size(); ++i)
    blocks.push_back(gram_irreducible(d.factors()[i], factor_slice(d, i, z.coords)));
  return {d, z, block_diagonal(d, blocks)};
}

double quadratic_form(const MetricMatrix& g, const Tangent& v) {
  check_length(g.domain, v.coords, "quadratic_form");
  if (g.domain.kind() != DomainKind::Product)
    return hermitian_form_window(g.gram, v.coords, 0, v.coords.size());
  double total = 0.0;
  for (std::size_t i = 0; i < g.domain.factors().size(); ++i)
    total += hermitian_form_window(g.gram, v.coords, g.domain.factor_offset(i), g.domain.factors()[i].dimension());
  return total;
}

double bergman_form(const Domain& d, const Point& z, const Tangent& v) {
  check_length(d, v.coords, "bergman_form");
  if (d.kind() != DomainKind::Product) return quadratic_form(metric_matrix(d, z), v);
  require_metric_point(d, z);
  double total = 0.0;
  for (std::size_t i = 0; i < d.factors().size(); ++i)
    total += bergman_form(d.factors()[i], {factor_slice(d, i, z.coords)}, {factor_slice(d, i, v.coords)});
  return total;
}

MetricFactor metric_factor(const Domain& d, const Point& z) {
  require_metric_point(d, z);
  if (d.kind() != DomainKind::Product) return factor_irreducible(d, z.coords);
  std::vector<CMat> lower, inv;
  for (std::size_t i = 0; i < d.factors().size(); ++i) {
    auto f = factor_irreducible(d.factors()[i], factor_slice(d, i, z.coords));
    lower.push_back(std::move(f.lower));
    inv.push_back(std::move(f.inv_adjoint));
  }
  return {block_diagonal(d, lower), block_diagonal(d, inv)};
}

double rayleigh_sup(const Domain& d, const Point& z, const CVec& grad) {
  check_length(d, grad, "rayleigh_sup");
  const MetricMatrix g = metric_matrix(d, z);
  const double smallest = min_hermitian_eigenvalue(g.gram);
  if (smallest < 1e-14 * g.gram.trace().real())
    fail(ErrorKind::Conditioning, "rayleigh_sup: metric numerically singular");
  // grad G^{-1} grad^H = |L^{-1} conj(grad)|^2.
  const MetricFactor f = metric_factor(d, z);
  const CVec w = f.inv_adjoint.adjoint() * grad.conjugate();
  return w.squaredNorm();
}

}  // namespace cartan
