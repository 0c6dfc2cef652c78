#include "cartan/automorphisms.hpp"

#include <cmath>

#include "cartan/error.hpp"

namespace cartan {

namespace {

CMat diagonal_scaling(const RVec& lambdas, Eigen::Index size, bool inverse) {
  CMat d = CMat::Identity(size, size);
  for (Eigen::Index k = 0; k < lambdas.size(); ++k) {
    const double s = std::sqrt(1.0 - lambdas(k) * lambdas(k));
    d(k, k) = inverse ? s : 1.0 / s;
  }
  return d;
}

Eigen::PartialPivLU<CMat> checked_lu(const CMat& a, const char* what) {
  Eigen::PartialPivLU<CMat> lu(a);
  if (!(lu.rcond() > 1e-14)) fail(ErrorKind::Conditioning, what);
  return lu;
}

// X * A^{-1} without forming A^{-1}.
CMat solve_right(const CMat& x, const CMat& a, const char* what) {
  const CMat at = a.transpose();
  return checked_lu(at, what).solve(x.transpose()).transpose();
}

}  // namespace

MobiusFactors mobius_factors_from(const CMat& u, const RVec& lambdas, const CMat& v) {
  const auto m = u.rows();
  const auto n = v.rows();
  require(lambdas.size() == m && m <= n, "mobius_factors: shape mismatch");
  for (Eigen::Index k = 0; k < m; ++k) {
    if (!(lambdas(k) >= 0.0)) fail(ErrorKind::InvalidArgument, "mobius_factors: negative singular value");
    if (!(lambdas(k) < 1.0)) fail(ErrorKind::OutsideDomain, "mobius_factors: P is not inside R_I");
  }
  MobiusFactors f;
  f.u = u;
  f.v = v;
  f.lambdas = lambdas;
  CMat diag = CMat::Zero(m, n);
  for (Eigen::Index k = 0; k < m; ++k) diag(k, k) = lambdas(k);
  f.p = u * diag * v;
  f.q = u * diagonal_scaling(lambdas, m, false) * u.adjoint();
  f.q_inv = u * diagonal_scaling(lambdas, m, true) * u.adjoint();
  f.r = v.adjoint() * diagonal_scaling(lambdas, n, false) * v;
  f.r_inv = v.adjoint() * diagonal_scaling(lambdas, n, true) * v;
  return f;
}

MobiusFactors mobius_factors(const CMat& p) {
  const auto svd = svd_normal_form(p);
  MobiusFactors f = mobius_factors_from(svd.u, svd.lambdas, svd.v);
  f.p = p;
  return f;
}

MobiusFactors mobius_factors(const Domain& d, const Point& p) {
  require(d.kind() == DomainKind::I, "mobius automorphisms are defined on R_I only");
  check_length(d, p.coords, "mobius_factors");
  return mobius_factors(to_matrix(d, p.coords));
}

CMat mobius_apply(const MobiusFactors& f, const CMat& z) {
  const auto n = f.v.rows();
  const CMat m = CMat::Identity(n, n) - f.p.adjoint() * z;
  return solve_right(f.q * (f.p - z), m, "mobius_apply: I - P^H Z is singular") * f.r_inv;
}

CMat mobius_apply_alt(const MobiusFactors& f, const CMat& z) {
  const auto m = f.u.rows();
  const CMat k = CMat::Identity(m, m) - z * f.p.adjoint();
  const CMat x = checked_lu(k, "mobius_apply_alt: I - Z P^H is singular").solve(f.p - z);
  return f.q_inv * x * f.r;
}

Point mobius_apply(const Domain& d, const Point& p, const Point& z) {
  check_length(d, z.coords, "mobius_apply");
  return {from_matrix(d, mobius_apply(mobius_factors(d, p), to_matrix(d, z.coords)))};
}

namespace {

struct DifferentialFactors {
  CMat left;   // Q (-I + (P - Z) M^{-1} P^H)
  CMat right;  // M^{-1} R^{-1}
};

DifferentialFactors differential_factors(const MobiusFactors& f, const CMat& z) {
  const auto m = f.u.rows();
  const auto n = f.v.rows();
  const CMat mm = CMat::Identity(n, n) - f.p.adjoint() * z;
  const auto lu = checked_lu(mm, "mobius_differential: I - P^H Z is singular");
  const CMat minv_ph = lu.solve(f.p.adjoint());
  const CMat left = f.q * (-CMat::Identity(m, m) + (f.p - z) * minv_ph);
  const CMat right = lu.solve(f.r_inv);
  return {left, right};
}

}  // namespace

CMat mobius_differential(const MobiusFactors& f, const CMat& z, const CMat& w) {
  const auto d = differential_factors(f, z);
  return d.left * w * d.right;
}

CMat mobius_jacobian(const MobiusFactors& f, const CMat& z) {
  const auto d = differential_factors(f, z);
  // vec_rows(L W R) = (L (x) R^T) vec_rows(W)
  return kronecker(d.left, d.right.transpose());
}

CMat mobius_jacobian(const Domain& d, const Point& p, const Point& z) {
  check_length(d, z.coords, "mobius_jacobian");
  return mobius_jacobian(mobius_factors(d, p), to_matrix(d, z.coords));
}

HoloMap collapse_map(const Domain& d, const RVec& lambdas, std::size_t keep) {
  require(d.kind() == DomainKind::I, "collapse_map: domain must be R_I");
  require(lambdas.size() == d.rows(), "collapse_map: need one singular value per row");
  require(keep < static_cast<std::size_t>(d.rows()), "collapse_map: keep index out of range");
  if (!(lambdas.maxCoeff() < 1.0)) fail(ErrorKind::OutsideDomain, "collapse_map: lambda_1 >= 1");
  bool single = true;
  for (Eigen::Index k = 0; k < lambdas.size(); ++k)
    if (k != static_cast<Eigen::Index>(keep) && lambdas(k) != 0.0) single = false;
  if (single) return HoloMap::identity(d);
  CMat diag = CMat::Zero(d.rows(), d.cols());
  CMat kept = CMat::Zero(d.rows(), d.cols());
  for (Eigen::Index k = 0; k < lambdas.size(); ++k) diag(k, k) = lambdas(k);
  kept(keep, keep) = lambdas(keep);
  return HoloMap::compose({HoloMap::mobius(d, {from_matrix(d, diag)}),
                           HoloMap::mobius(d, {from_matrix(d, kept)})});
}

IdentityResiduals automorphism_battery(int m, int n, std::size_t samples, Rng& rng) {
  const Domain d = Domain::type_one(m, n);
  IdentityResiduals out;
  out.samples = samples;
  const CMat im = CMat::Identity(m, m);
  for (std::size_t s = 0; s < samples; ++s) {
    const CMat p = to_matrix(d, random_interior(d, rng, 0.95).coords);
    const CMat z = to_matrix(d, random_interior(d, rng, 0.95).coords);
    const CMat w = complex_gaussian_matrix(rng, m, n);
    const MobiusFactors f = mobius_factors(p);
    const CMat phi = mobius_apply(f, z);

    out.involution = std::max(out.involution, max_abs_diff(mobius_apply(f, phi), z));
    out.exchange = std::max(out.exchange, max_abs_diff(mobius_apply(f, CMat::Zero(m, n)), p));
    out.exchange = std::max(out.exchange, max_abs_diff(mobius_apply(f, p), CMat::Zero(m, n)));
    out.alternate_form = std::max(out.alternate_form, max_abs_diff(mobius_apply_alt(f, z), phi));

    const CMat at_p = unvec_rows(mobius_jacobian(f, p) * vec_rows(w), m, n);
    out.differential_at_p = std::max(out.differential_at_p, max_abs_diff(at_p, -f.q * w * f.r));
    const CMat at_0 = unvec_rows(mobius_jacobian(f, CMat::Zero(m, n)) * vec_rows(w), m, n);
    out.differential_at_0 = std::max(out.differential_at_0, max_abs_diff(at_0, -f.q_inv * w * f.r_inv));

    const CMat lhs = (im - z * p.adjoint()) * f.q * (im - phi * phi.adjoint()) * f.q.adjoint() *
                     (im - p * z.adjoint());
    out.determinant_identity = std::max(out.determinant_identity, (lhs - (im - z * z.adjoint())).norm());

    if (!contains(d, {from_matrix(d, phi)})) ++out.self_map_failures;
  }
  return out;
}

}  // namespace cartan
