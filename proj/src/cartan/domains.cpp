#include "cartan/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cartan/error.hpp"

namespace cartan {

Domain Domain::type_one(int m, int n) {
  require(m >= 1 && m <= n, "R_I(m,n) requires 1 <= m <= n");
  return Domain(DomainKind::I, m, n, static_cast<Eigen::Index>(m) * n);
}

Domain Domain::type_two(int p) {
  require(p >= 1, "R_II(p) requires p >= 1");
  return Domain(DomainKind::II, p, p, static_cast<Eigen::Index>(p) * (p + 1) / 2);
}

Domain Domain::type_three(int q) {
  require(q >= 2, "R_III(q) requires q >= 2");
  return Domain(DomainKind::III, q, q, static_cast<Eigen::Index>(q) * (q - 1) / 2);
}

Domain Domain::type_four(int n) {
  require(n >= 1, "R_IV(N) requires N >= 1");
  return Domain(DomainKind::IV, n, 1, n);
}

Domain Domain::product(const std::vector<Domain>& factors) {
  require(!factors.empty(), "product domain needs at least one factor");
  Domain d(DomainKind::Product, 0, 0, 0);
  for (const auto& f : factors) {
    if (f.kind() == DomainKind::Product) {
      for (const auto& g : f.factors()) d.factors_.push_back(g);
    } else {
      d.factors_.push_back(f);
    }
  }
  for (const auto& f : d.factors_) {
    d.offsets_.push_back(d.dim_);
    d.dim_ += f.dimension();
  }
  d.a_ = static_cast<int>(d.factors_.size());
  return d;
}

Eigen::Index Domain::factor_offset(std::size_t index) const {
  require(kind_ == DomainKind::Product && index < factors_.size(), "factor index out of range");
  return offsets_[index];
}

std::string Domain::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case DomainKind::I: os << "I(" << a_ << "," << b_ << ")"; break;
    case DomainKind::II: os << "II(" << a_ << ")"; break;
    case DomainKind::III: os << "III(" << a_ << ")"; break;
    case DomainKind::IV: os << "IV(" << a_ << ")"; break;
    case DomainKind::Product:
      os << "Product[";
      for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? ", " : "") << factors_[i].describe();
      os << "]";
      break;
  }
  return os.str();
}

bool operator==(const Domain& x, const Domain& y) {
  if (x.kind_ != y.kind_ || x.a_ != y.a_ || x.b_ != y.b_) return false;
  if (x.kind_ != DomainKind::Product) return true;
  return x.factors_ == y.factors_;
}

void check_length(const Domain& d, const CVec& v, const char* what) {
  if (v.size() != d.dimension()) {
    std::ostringstream os;
    os << what << ": expected " << d.dimension() << " coordinates for " << d.describe() << ", got "
       << v.size();
    fail(ErrorKind::InvalidArgument, os.str());
  }
}

CMat to_matrix(const Domain& d, const CVec& v) {
  require(d.is_matrix_kind(), "to_matrix: only kinds I, II, III have a matrix form");
  check_length(d, v, "to_matrix");
  const int p = d.rows();
  switch (d.kind()) {
    case DomainKind::I:
      return unvec_rows(v, d.rows(), d.cols());
    case DomainKind::II: {
      CMat z(p, p);
      Eigen::Index idx = 0;
      for (int k = 0; k < p; ++k)
        for (int l = k; l < p; ++l) {
          z(k, l) = v(idx);
          z(l, k) = v(idx);
          ++idx;
        }
      return z;
    }
    default: {
      CMat z = CMat::Zero(p, p);
      Eigen::Index idx = 0;
      for (int k = 0; k < p; ++k)
        for (int l = k + 1; l < p; ++l) {
          z(k, l) = v(idx);
          z(l, k) = -v(idx);
          ++idx;
        }
      return z;
    }
  }
}

CVec from_matrix(const Domain& d, const CMat& z) {
  require(d.is_matrix_kind(), "from_matrix: only kinds I, II, III have a matrix form");
  require(z.rows() == d.rows() && z.cols() == d.cols(), "from_matrix: shape mismatch");
  if (d.kind() == DomainKind::I) return vec_rows(z);
  const int p = d.rows();
  const int shift = d.kind() == DomainKind::II ? 0 : 1;
  CVec v(d.dimension());
  Eigen::Index idx = 0;
  for (int k = 0; k < p; ++k)
    for (int l = k + shift; l < p; ++l) v(idx++) = z(k, l);
  return v;
}

CMat ambient_embedding(const Domain& d) {
  require(d.is_matrix_kind(), "ambient_embedding: only kinds I, II, III");
  const Eigen::Index n_amb = static_cast<Eigen::Index>(d.rows()) * d.cols();
  if (d.kind() == DomainKind::I) return CMat::Identity(n_amb, n_amb);
  CMat s = CMat::Zero(n_amb, d.dimension());
  for (Eigen::Index c = 0; c < d.dimension(); ++c) {
    CVec e = CVec::Zero(d.dimension());
    e(c) = 1.0;
    s.col(c) = vec_rows(to_matrix(d, e));
  }
  return s;
}

namespace {

struct LieBallTerms {
  double abs_zz;    // |z z'|
  double defining;  // 1 + |zz'|^2 - 2 z zbar'
};

LieBallTerms lie_ball_terms(const CVec& z) {
  const cplx zz = (z.array() * z.array()).sum();
  const double norm2 = z.squaredNorm();
  const double a = std::abs(zz);
  return {a, 1.0 + a * a - 2.0 * norm2};
}

bool contains_irreducible(const Domain& d, const CVec& v) {
  switch (d.kind()) {
    case DomainKind::I: {
      const CMat z = to_matrix(d, v);
      const CMat h = CMat::Identity(d.rows(), d.rows()) - z * z.adjoint();
      return min_hermitian_eigenvalue(h) > 0.0;
    }
    case DomainKind::II: {
      const CMat z = to_matrix(d, v);
      const CMat h = CMat::Identity(d.rows(), d.rows()) - z * z.conjugate();
      return min_hermitian_eigenvalue(h) > 0.0;
    }
    case DomainKind::III: {
      const CMat z = to_matrix(d, v);
      const CMat h = CMat::Identity(d.rows(), d.rows()) + z * z.conjugate();
      return min_hermitian_eigenvalue(h) > 0.0;
    }
    case DomainKind::IV: {
      const auto t = lie_ball_terms(v);
      return t.defining > 0.0 && t.abs_zz < 1.0;
    }
    case DomainKind::Product: break;
  }
  return false;
}

double surrogate_irreducible(const Domain& d, const CVec& v) {
  if (d.kind() == DomainKind::IV) {
    const auto t = lie_ball_terms(v);
    return std::min(1.0 - t.abs_zz, 0.5 * t.defining);
  }
  return 1.0 - operator_norm(to_matrix(d, v));
}

}  // namespace

CVec factor_slice(const Domain& d, std::size_t index, const CVec& v) {
  const Eigen::Index off = d.factor_offset(index);
  return v.segment(off, d.factors()[index].dimension());
}

bool contains(const Domain& d, const Point& z) {
  check_length(d, z.coords, "contains");
  if (!z.coords.allFinite()) return false;
  if (d.kind() != DomainKind::Product) return contains_irreducible(d, z.coords);
  for (std::size_t i = 0; i < d.factors().size(); ++i)
    if (!contains_irreducible(d.factors()[i], factor_slice(d, i, z.coords))) return false;
  return true;
}

double boundary_surrogate(const Domain& d, const Point& z) {
  check_length(d, z.coords, "boundary_surrogate");
  if (d.kind() != DomainKind::Product) return surrogate_irreducible(d, z.coords);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.factors().size(); ++i)
    best = std::min(best, surrogate_irreducible(d.factors()[i], factor_slice(d, i, z.coords)));
  return best;
}

double boundary_distance(const Domain& d, const Point& z) {
  if (!contains(d, z)) fail(ErrorKind::OutsideDomain, "boundary_distance: point outside " + d.describe());
  return std::max(0.0, boundary_surrogate(d, z));
}

namespace {

double ray_exit_irreducible(const Domain& d, const CVec& dir) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (d.kind() == DomainKind::IV) {
    // With x = t^2 the defining function is 1 + |s|^2 x^2 - 2 |d|^2 x; its
    // smaller root is also below 1/|s|, so it is the exit point.
    const double norm2 = dir.squaredNorm();
    if (norm2 == 0.0) return inf;
    const double s = std::abs((dir.array() * dir.array()).sum());
    const double disc = std::sqrt(std::max(0.0, norm2 * norm2 - s * s));
    return std::sqrt(1.0 / (norm2 + disc));
  }
  const double sigma = operator_norm(to_matrix(d, dir));
  return sigma == 0.0 ? inf : 1.0 / sigma;
}

}  // namespace

double ray_exit(const Domain& d, const CVec& dir) {
  check_length(d, dir, "ray_exit");
  if (d.kind() != DomainKind::Product) return ray_exit_irreducible(d, dir);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.factors().size(); ++i)
    best = std::min(best, ray_exit_irreducible(d.factors()[i], factor_slice(d, i, dir)));
  return best;
}

CVec random_direction(const Domain& d, Rng& rng) {
  if (d.kind() == DomainKind::Product) {
    CVec v(d.dimension());
    for (std::size_t i = 0; i < d.factors().size(); ++i)
      v.segment(d.factor_offset(i), d.factors()[i].dimension()) = random_direction(d.factors()[i], rng);
    return v;
  }
  return complex_gaussian_vector(rng, d.dimension());
}

Point random_interior(const Domain& d, Rng& rng, double max_radius) {
  require(max_radius > 0.0 && max_radius < 1.0, "random_interior: max_radius must lie in (0,1)");
  if (d.kind() == DomainKind::Product) {
    CVec v(d.dimension());
    for (std::size_t i = 0; i < d.factors().size(); ++i)
      v.segment(d.factor_offset(i), d.factors()[i].dimension()) =
          random_interior(d.factors()[i], rng, max_radius).coords;
    return {v};
  }
  const CVec dir = random_direction(d, rng);
  const double t = ray_exit(d, dir) * max_radius * std::sqrt(uniform01(rng));
  return {t * dir};
}

}  // namespace cartan
