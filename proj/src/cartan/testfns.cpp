#include "cartan/testfns.hpp"

#include <cmath>
#include <limits>

#include "cartan/automorphisms.hpp"
#include "cartan/error.hpp"
#include "cartan/metrics.hpp"

namespace cartan {

const char* test_case_name(TestCase c) {
  switch (c) {
    case TestCase::LogCase1: return "LogCase1";
    case TestCase::RootCase2: return "RootCase2";
    case TestCase::RootCase3: return "RootCase3";
  }
  return "unknown";
}

namespace {

void require_type_one(const Domain& d) {
  require(d.kind() == DomainKind::I, "test functions are constructed on R_I only");
}

enum class Block { Corner, Cross, Interior };

Block block_of(Eigen::Index idx, int n) {
  const auto k = idx / n;
  const auto l = idx % n;
  if (k == 0 && l == 0) return Block::Corner;
  if (k == 0 || l == 0) return Block::Cross;
  return Block::Interior;
}

cplx phase_of(cplx w) {
  const double a = std::abs(w);
  return a == 0.0 ? cplx(0.0) : std::conj(w) / a;
}

}  // namespace

DirectionClass classify_direction(const Domain& d, double r, const Tangent& w) {
  require_type_one(d);
  check_length(d, w.coords, "classify_direction");
  require(r > 0.0 && r < 1.0, "classify_direction: r must lie in (0,1)");
  require(w.coords.squaredNorm() > 0.0, "classify_direction: w must be nonzero");
  const double s = 1.0 - r * r;
  double cross = 0.0, interior = 0.0, corner = 0.0;
  for (Eigen::Index i = 0; i < w.coords.size(); ++i) {
    const double a2 = std::norm(w.coords(i));
    switch (block_of(i, d.cols())) {
      case Block::Corner: corner += a2; break;
      case Block::Cross: cross += a2; break;
      case Block::Interior: interior += a2; break;
    }
  }
  DirectionClass out{TestCase::LogCase1, corner / (s * s), cross / s, interior};
  if (out.a >= out.b && out.a >= out.c) out.test_case = TestCase::LogCase1;
  else if (out.b >= out.c) out.test_case = TestCase::RootCase2;
  else out.test_case = TestCase::RootCase3;
  return out;
}

TestFunction TestFunction::zero(const Domain& d) {
  TestFunction f(d);
  f.zero_ = true;
  return f;
}

TestFunction TestFunction::diagonal(const Domain& d, TestCase test_case, double r, double a_param,
                                    const CVec& phases) {
  require_type_one(d);
  check_length(d, phases, "test function phases");
  require(r > 0.0 && r < 1.0, "test function: r must lie in (0,1)");
  require(a_param > 0.0, "test function: a must be positive");
  TestFunction f(d);
  f.case_ = test_case;
  f.r_ = r;
  f.a_param_ = a_param;
  f.phases_ = phases;
  return f;
}

TestFunction TestFunction::with_pre_maps(std::vector<HoloMap> maps) const {
  for (const auto& m : maps) require(m.source() == base_domain_, "pre-map domain mismatch");
  TestFunction f = *this;
  f.pre_maps_ = std::move(maps);
  return f;
}

TestFunction TestFunction::lifted(const Domain& product, std::size_t index) const {
  require(!factor_.has_value(), "test function is already lifted");
  require(product.kind() == DomainKind::Product && index < product.factors().size(),
          "lift: need a product domain and a valid factor index");
  require(product.factors()[index] == base_domain_, "lift: factor does not match the base domain");
  TestFunction f = *this;
  f.domain_ = product;
  f.factor_ = index;
  return f;
}

CVec TestFunction::base_slice(const Point& z) const {
  check_length(domain_, z.coords, "test function");
  return factor_ ? factor_slice(domain_, *factor_, z.coords) : z.coords;
}

cplx TestFunction::base_value(const CVec& z) const {
  if (zero_) return 0.0;
  const int n = base_domain_.cols();
  const double c = std::exp(-a_param_ * (1.0 - r_));
  const cplx z11 = z(0);
  if (case_ == TestCase::LogCase1) return std::log(1.0 - c * z11) - std::log(1.0 - z11);
  const cplx root_c = std::sqrt(1.0 - c * z11);
  const cplx root_1 = std::sqrt(1.0 - z11);
  const Block wanted = case_ == TestCase::RootCase2 ? Block::Cross : Block::Interior;
  cplx linear = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (block_of(i, n) == wanted) linear += phases_(i) * z(i);
  if (case_ == TestCase::RootCase2) return linear * (1.0 / root_c - 1.0 / root_1);
  return linear * (root_1 / root_c - 1.0);
}

CVec TestFunction::base_gradient(const CVec& z) const {
  CVec g = CVec::Zero(z.size());
  if (zero_) return g;
  const int n = base_domain_.cols();
  const double c = std::exp(-a_param_ * (1.0 - r_));
  const cplx z11 = z(0);
  if (case_ == TestCase::LogCase1) {
    g(0) = -c / (1.0 - c * z11) + 1.0 / (1.0 - z11);
    return g;
  }
  const cplx root_c = std::sqrt(1.0 - c * z11);
  const cplx root_1 = std::sqrt(1.0 - z11);
  const Block wanted = case_ == TestCase::RootCase2 ? Block::Cross : Block::Interior;
  cplx linear = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (block_of(i, n) == wanted) linear += phases_(i) * z(i);
  cplx factor, factor_prime;
  if (case_ == TestCase::RootCase2) {
    factor = 1.0 / root_c - 1.0 / root_1;
    factor_prime = 0.5 * c / (root_c * root_c * root_c) - 0.5 / (root_1 * root_1 * root_1);
  } else {
    factor = root_1 / root_c - 1.0;
    factor_prime = -0.5 / (root_1 * root_c) + 0.5 * c * root_1 / (root_c * root_c * root_c);
  }
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (block_of(i, n) == wanted) g(i) = phases_(i) * factor;
  g(0) = linear * factor_prime;
  return g;
}

cplx TestFunction::evaluate(const Point& z) const {
  if (zero_) return 0.0;
  Point cur{base_slice(z)};
  for (const auto& m : pre_maps_) cur = m.evaluate(cur);
  return base_value(cur.coords);
}

CVec TestFunction::gradient(const Point& z) const {
  CVec full = CVec::Zero(domain_.dimension());
  if (zero_) return full;
  Point cur{base_slice(z)};
  CMat jac = CMat::Identity(cur.coords.size(), cur.coords.size());
  for (const auto& m : pre_maps_) {
    jac = m.jacobian(cur) * jac;
    cur = m.evaluate(cur);
  }
  // Row covector chain rule: grad(f o psi) = grad f(psi) J_psi.
  const CVec g = jac.transpose() * base_gradient(cur.coords);
  if (!factor_) return g;
  full.segment(domain_.factor_offset(*factor_), g.size()) = g;
  return full;
}

namespace {

CVec phases_for(const Domain& d, const Tangent& w, TestCase test_case) {
  CVec phases = CVec::Zero(d.dimension());
  if (test_case == TestCase::LogCase1) return phases;
  const Block wanted = test_case == TestCase::RootCase2 ? Block::Cross : Block::Interior;
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    if (block_of(i, d.cols()) == wanted) phases(i) = phase_of(w.coords(i));
  return phases;
}

bool is_normal_form(const Domain& d, const CMat& a) {
  double prev = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < a.rows(); ++j)
    for (Eigen::Index l = 0; l < a.cols(); ++l) {
      if (j != l) {
        if (a(j, l) != 0.0) return false;
        continue;
      }
      const cplx x = a(j, j);
      if (x.imag() != 0.0 || x.real() < 0.0 || x.real() > prev) return false;
      prev = x.real();
    }
  (void)d;
  return true;
}

}  // namespace

TestFunction build_diagonal_case(const Domain& d, double r, const Tangent& w, double a_param, TestCase test_case) {
  require_type_one(d);
  check_length(d, w.coords, "build_diagonal");
  require(w.coords.squaredNorm() > 0.0, "build_diagonal: w must be nonzero");
  return TestFunction::diagonal(d, test_case, r, a_param, phases_for(d, w, test_case));
}

TestFunction build_diagonal(const Domain& d, double r, const Tangent& w, double a_param) {
  return build_diagonal_case(d, r, w, a_param, classify_direction(d, r, w).test_case);
}

TestFunction build_general(const Domain& d, const Point& a_point, const Tangent& w, double a_param,
                           std::optional<TestCase> forced) {
  require_type_one(d);
  check_length(d, a_point.coords, "build_general");
  check_length(d, w.coords, "build_general");
  if (!contains(d, a_point)) fail(ErrorKind::OutsideDomain, "build_general: point outside " + d.describe());
  const CMat a = to_matrix(d, a_point.coords);
  const auto svd = svd_normal_form(a);
  const double r = svd.lambdas(0);
  if (r >= 1.0 - 1e-8) fail(ErrorKind::Conditioning, "build_general: point too close to the boundary");
  require(r > 0.0, "build_general: target point must be nonzero");

  std::vector<HoloMap> pre;
  RVec lambdas = svd.lambdas;
  if (!is_normal_form(d, a)) {
    pre.push_back(HoloMap::unitary_pair(d, svd.u.adjoint(), svd.v.adjoint()));
  } else {
    for (Eigen::Index k = 0; k < lambdas.size(); ++k) lambdas(k) = a(k, k).real();
  }
  const HoloMap collapse = collapse_map(d, lambdas, 0);
  if (collapse.family() != MapFamily::Identity) pre.push_back(collapse);

  Point cur = a_point;
  CVec v = w.coords;
  for (const auto& m : pre) {
    v = m.jacobian(cur) * v;
    cur = m.evaluate(cur);
  }
  const Tangent transported{v};
  const TestFunction base = forced ? build_diagonal_case(d, r, transported, a_param, *forced)
                                   : build_diagonal(d, r, transported, a_param);
  return base.with_pre_maps(std::move(pre));
}

double ratio_at(const TestFunction& f, const Point& a_point, const Tangent& w) {
  require(w.coords.squaredNorm() > 0.0, "ratio_at: w must be nonzero");
  const cplx num = f.gradient(a_point).cwiseProduct(w.coords).sum();
  return std::abs(num) / std::sqrt(bergman_form(f.domain(), a_point, w));
}

namespace {

Point embed_base(const TestFunction& f, const CVec& base) {
  if (!f.factor()) return {base};
  CVec full = CVec::Zero(f.domain().dimension());
  full.segment(f.domain().factor_offset(*f.factor()), base.size()) = base;
  return {full};
}

}  // namespace

double decay_on_compact(const TestFunction& f, double rho, std::size_t samples, Rng& rng) {
  require(rho > 0.0 && rho < 1.0, "decay_on_compact: rho must lie in (0,1)");
  if (f.is_zero()) return 0.0;
  const Domain& base = f.base_domain();
  CVec corner = CVec::Zero(base.dimension());
  corner(0) = rho;
  double sup = std::abs(f.evaluate(embed_base(f, corner)));
  for (std::size_t s = 0; s < samples; ++s) {
    const CVec dir = random_direction(base, rng);
    const double t = rho * std::sqrt(uniform01(rng)) / operator_norm(to_matrix(base, dir));
    sup = std::max(sup, std::abs(f.evaluate(embed_base(f, t * dir))));
  }
  return sup;
}

double sampled_seminorm(const TestFunction& f, std::size_t samples, Rng& rng, double max_radius) {
  double sup = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Point z = random_interior(f.domain(), rng, max_radius);
    sup = std::max(sup, std::sqrt(rayleigh_sup(f.domain(), z, f.gradient(z))));
  }
  return sup;
}

CVec gradient_fd(const TestFunction& f, const Point& z, double h) {
  require(h > 0.0, "gradient_fd: step must be positive");
  CVec g(z.coords.size());
  for (Eigen::Index k = 0; k < z.coords.size(); ++k) {
    CVec step = CVec::Zero(z.coords.size());
    step(k) = h;
    g(k) = (f.evaluate({z.coords + step}) - f.evaluate({z.coords - step})) / (2.0 * h);
  }
  return g;
}

}  // namespace cartan
