#pragma once

// Holomorphic self-maps built from a closed registry of families. Every map
// acts on one domain (source == target); compositions list their children in
// application order.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "cartan/domains.hpp"

namespace cartan {

struct MobiusFactors;

enum class MapFamily {
  Identity,
  Constant,
  Scale,
  DiscAffine,
  UnitaryPair,
  Mobius,
  Product,
  Compose,
  FactorEmbed,
};

const char* family_name(MapFamily f);

class HoloMap {
 public:
  static HoloMap identity(const Domain& d);
  static HoloMap constant(const Domain& d, const Point& c);
  /// z -> c z, 0 < c <= 1; a self-map because every classical domain is a
  /// complete circular domain.
  static HoloMap scale(const Domain& d, double c);
  /// z -> a + b z on I(1,1), |a| + |b| <= 1.
  static HoloMap disc_affine(const Domain& d, cplx a, cplx b);
  /// Z -> P Z Q on I(m,n) with P, Q unitary.
  static HoloMap unitary_pair(const Domain& d, const CMat& p, const CMat& q);
  /// The involutive automorphism exchanging P and 0 on I(m,n).
  static HoloMap mobius(const Domain& d, const Point& p);
  /// Factor-wise map on a product domain.
  static HoloMap product(const Domain& d, const std::vector<HoloMap>& factors);
  /// maps[0] is applied first.
  static HoloMap compose(const std::vector<HoloMap>& maps);
  /// Applies `base` to factor `index` of a product domain, identity elsewhere.
  static HoloMap factor_embed(const Domain& d, std::size_t index, const HoloMap& base);

  MapFamily family() const;
  const Domain& source() const;
  const Domain& target() const;
  const std::vector<HoloMap>& children() const;
  /// Mobius family only.
  const MobiusFactors& mobius_factors() const;

  Point evaluate(const Point& z) const;
  /// Holomorphic Jacobian d phi_l / d z_k in intrinsic coordinates.
  CMat jacobian(const Point& z) const;

  std::string describe() const;

 private:
  struct Node;
  explicit HoloMap(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct FiniteDifferenceJacobian {
  CMat jacobian;
  /// max |D_x phi - (-i) D_y phi| over entries: zero for holomorphic maps.
  double cauchy_riemann_residual = 0.0;
};

/// Central differences along the real and imaginary axis of every complex
/// coordinate. Throws OutsideDomain if any stencil point leaves the domain.
FiniteDifferenceJacobian jacobian_fd(const HoloMap& m, const Point& z, double h);

}  // namespace cartan
