#pragma once

// Cartan's classical domains R_I(m,n), R_II(p), R_III(q), R_IV(N) and their
// finite products, in intrinsic complex coordinates.
//
//   I   : all m*n entries of Z, row-major.
//   II  : entries z_kl with k <= l (symmetric Z), row-major over the upper
//         triangle including the diagonal.
//   III : entries z_kl with k < l (antisymmetric Z).
//   IV  : the N coordinates of z.
//   Product : concatenation of the factors' coordinates.

#include <cstddef>
#include <string>
#include <vector>

#include "cartan/linalg.hpp"
#include "cartan/random.hpp"

namespace cartan {

enum class DomainKind { I, II, III, IV, Product };

class Domain {
 public:
  static Domain type_one(int m, int n);
  static Domain type_two(int p);
  static Domain type_three(int q);
  static Domain type_four(int n);
  /// Nested products are flattened.
  static Domain product(const std::vector<Domain>& factors);

  DomainKind kind() const { return kind_; }
  /// Matrix shape (I: m x n, II: p x p, III: q x q). IV reports (N, 1).
  int rows() const { return a_; }
  int cols() const { return b_; }
  Eigen::Index dimension() const { return dim_; }

  bool is_matrix_kind() const {
    return kind_ == DomainKind::I || kind_ == DomainKind::II || kind_ == DomainKind::III;
  }

  const std::vector<Domain>& factors() const { return factors_; }
  Eigen::Index factor_offset(std::size_t index) const;

  std::string describe() const;

  friend bool operator==(const Domain& x, const Domain& y);
  friend bool operator!=(const Domain& x, const Domain& y) { return !(x == y); }

 private:
  Domain(DomainKind kind, int a, int b, Eigen::Index dim) : kind_(kind), a_(a), b_(b), dim_(dim) {}

  DomainKind kind_;
  int a_ = 0;
  int b_ = 0;
  Eigen::Index dim_ = 0;
  std::vector<Domain> factors_;
  std::vector<Eigen::Index> offsets_;
};

/// Intrinsic coordinates of a point of a domain.
struct Point {
  CVec coords;
};

/// Intrinsic coordinates of a tangent vector.
struct Tangent {
  CVec coords;
};

inline Eigen::Index dimension(const Domain& d) { return d.dimension(); }

CMat to_matrix(const Domain& d, const CVec& v);
CVec from_matrix(const Domain& d, const CMat& z);

/// Linear map S taking intrinsic coordinates to the row-major vectorisation
/// of the full matrix. Identity for kind I.
CMat ambient_embedding(const Domain& d);

bool contains(const Domain& d, const Point& z);

/// 1 - sigma_max(Z) for I/II/III, min(1 - |zz'|, defining function / 2) for
/// IV, minimum over factors for products. Positive exactly on the domain;
/// no membership check.
double boundary_surrogate(const Domain& d, const Point& z);

/// boundary_surrogate restricted to interior points; throws OutsideDomain
/// otherwise.
double boundary_distance(const Domain& d, const Point& z);

/// Coordinates belonging to factor `index` of a product domain.
CVec factor_slice(const Domain& d, std::size_t index, const CVec& v);

/// Largest t with t * dir inside the domain (infinity if the ray never
/// leaves it).
double ray_exit(const Domain& d, const CVec& dir);

CVec random_direction(const Domain& d, Rng& rng);

/// Random interior point whose relative radius along its ray is at most
/// max_radius.
Point random_interior(const Domain& d, Rng& rng, double max_radius = 0.999);

void check_length(const Domain& d, const CVec& v, const char* what);

}  // namespace cartan
