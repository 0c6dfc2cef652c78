#pragma once

// Extremal test functions on R_I(m,n) that stay bounded in the Bloch space,
// vanish on compacta as r -> 1, and keep a fixed lower bound on
// |grad f(a) w| / H_a(w, w)^{1/2} at a boundary-approaching point a.
//
// With c = exp(-a (1 - r)) the three base functions are
//
//   case 1: log(1 - c z11) - log(1 - z11)
//   case 2: (sum_{l>=2} e^{-i theta_1l} z_1l + sum_{k>=2} e^{-i theta_k1} z_k1)
//           * ((1 - c z11)^{-1/2} - (1 - z11)^{-1/2})
//   case 3: (sum_{k,l>=2} e^{-i theta_kl} z_kl) * (1 - z11)^{1/2}
//           * ((1 - c z11)^{-1/2} - (1 - z11)^{-1/2})
//
// using principal branches (both 1 - z11 and 1 - c z11 have positive real
// part on R_I). General points are reduced to r E11 by a unitary rotation
// followed by a composition of two Mobius automorphisms.

#include <cstddef>
#include <optional>
#include <vector>

#include "cartan/maps.hpp"

namespace cartan {

enum class TestCase { LogCase1 = 1, RootCase2 = 2, RootCase3 = 3 };

const char* test_case_name(TestCase c);

struct DirectionClass {
  TestCase test_case;
  double a;  // |w11|^2 / (1 - r^2)^2
  double b;  // (sum_l>=2 |w1l|^2 + sum_k>=2 |wk1|^2) / (1 - r^2)
  double c;  // sum_{k,l>=2} |wkl|^2
};

/// Splits H_{rE11}(w, w) = (m+n)(A + B + C) and picks the dominant term;
/// ties go to the smaller case index.
DirectionClass classify_direction(const Domain& d, double r, const Tangent& w);

class TestFunction {
 public:
  /// f == 0 on the given domain.
  static TestFunction zero(const Domain& d);
  /// Base function on d = I(m,n) with coefficients e^{-i theta} (or 0) per
  /// coordinate; only the entries the chosen case uses are read.
  static TestFunction diagonal(const Domain& d, TestCase test_case, double r, double a_param,
                               const CVec& phases);

  bool is_zero() const { return zero_; }
  TestCase test_case() const { return case_; }
  double r() const { return r_; }
  double a_param() const { return a_param_; }
  const CVec& phases() const { return phases_; }
  /// Domain the function is defined on (R_I or a product containing it).
  const Domain& domain() const { return domain_; }
  /// The R_I domain of the base function.
  const Domain& base_domain() const { return base_domain_; }
  std::optional<std::size_t> factor() const { return factor_; }
  /// Maps applied (in order) before the base function.
  const std::vector<HoloMap>& pre_maps() const { return pre_maps_; }

  TestFunction with_pre_maps(std::vector<HoloMap> maps) const;
  /// Same function viewed on a product domain through factor `index`.
  TestFunction lifted(const Domain& product, std::size_t index) const;

  cplx evaluate(const Point& z) const;
  /// Holomorphic gradient; grad . v = sum_i grad_i v_i.
  CVec gradient(const Point& z) const;

  /// Base function and its gradient at a point of the base R_I domain.
  cplx base_value(const CVec& z) const;
  CVec base_gradient(const CVec& z) const;

 private:
  TestFunction(Domain d) : domain_(d), base_domain_(d) {}

  CVec base_slice(const Point& z) const;

  Domain domain_;
  Domain base_domain_;
  std::optional<std::size_t> factor_;
  bool zero_ = false;
  TestCase case_ = TestCase::LogCase1;
  double r_ = 0.0;
  double a_param_ = 1.0;
  CVec phases_;
  std::vector<HoloMap> pre_maps_;
};

/// Test function targeted at r E11 and direction w; case from classify_direction.
TestFunction build_diagonal(const Domain& d, double r, const Tangent& w, double a_param = 1.0);
/// As build_diagonal with the case fixed by the caller.
TestFunction build_diagonal_case(const Domain& d, double r, const Tangent& w, double a_param, TestCase test_case);

/// Test function targeted at an arbitrary interior point of R_I: rotate the
/// point to its singular-value diagonal, collapse the diagonal onto
/// lambda_1 E11 and build the diagonal function for the transported
/// direction. Throws Conditioning when lambda_1 >= 1 - 1e-8.
TestFunction build_general(const Domain& d, const Point& a_point, const Tangent& w, double a_param = 1.0,
                           std::optional<TestCase> forced = std::nullopt);

/// |grad f(a) . w| / H_a(w, w)^{1/2}.
double ratio_at(const TestFunction& f, const Point& a_point, const Tangent& w);

/// sup |f| over random points of the base R_I domain with sigma_max <= rho.
double decay_on_compact(const TestFunction& f, double rho, std::size_t samples, Rng& rng);

/// sup_z Q_f(z) over random interior points of f.domain().
double sampled_seminorm(const TestFunction& f, std::size_t samples, Rng& rng, double max_radius = 0.999);

/// Central-difference gradient along the real axis of each coordinate.
CVec gradient_fd(const TestFunction& f, const Point& z, double h);

}  // namespace cartan
