#include "cartan/maps.hpp"

#include <cmath>
#include <sstream>

#include "cartan/automorphisms.hpp"
#include "cartan/error.hpp"

namespace cartan {

struct HoloMap::Node {
  explicit Node(MapFamily f, Domain d) : family(f), domain(std::move(d)) {}

  MapFamily family;
  Domain domain;
  Point constant;
  double scale = 1.0;
  cplx a = 0.0, b = 1.0;
  CMat left, right;
  std::shared_ptr<const MobiusFactors> mobius;
  std::vector<HoloMap> children;
  std::size_t index = 0;
};

const char* family_name(MapFamily f) {
  switch (f) {
    case MapFamily::Identity: return "identity";
    case MapFamily::Constant: return "constant";
    case MapFamily::Scale: return "scale";
    case MapFamily::DiscAffine: return "disc_affine";
    case MapFamily::UnitaryPair: return "unitary_pair";
    case MapFamily::Mobius: return "mobius";
    case MapFamily::Product: return "product";
    case MapFamily::Compose: return "compose";
    case MapFamily::FactorEmbed: return "factor_embed";
  }
  return "unknown";
}

HoloMap HoloMap::identity(const Domain& d) {
  return HoloMap(std::make_shared<Node>(MapFamily::Identity, d));
}

HoloMap HoloMap::constant(const Domain& d, const Point& c) {
  check_length(d, c.coords, "constant map");
  if (!contains(d, c)) fail(ErrorKind::OutsideDomain, "constant map value lies outside " + d.describe());
  auto node = std::make_shared<Node>(MapFamily::Constant, d);
  node->constant = c;
  return HoloMap(node);
}

HoloMap HoloMap::scale(const Domain& d, double c) {
  require(c > 0.0 && c <= 1.0, "scale map requires 0 < c <= 1");
  auto node = std::make_shared<Node>(MapFamily::Scale, d);
  node->scale = c;
  return HoloMap(node);
}

HoloMap HoloMap::disc_affine(const Domain& d, cplx a, cplx b) {
  require(d.kind() == DomainKind::I && d.rows() == 1 && d.cols() == 1, "disc_affine acts on I(1,1) only");
  require(std::abs(a) + std::abs(b) <= 1.0 + 1e-12, "disc_affine requires |a| + |b| <= 1");
  auto node = std::make_shared<Node>(MapFamily::DiscAffine, d);
  node->a = a;
  node->b = b;
  return HoloMap(node);
}

HoloMap HoloMap::unitary_pair(const Domain& d, const CMat& p, const CMat& q) {
  require(d.kind() == DomainKind::I, "unitary_pair acts on R_I only");
  require(p.rows() == d.rows() && p.cols() == d.rows(), "unitary_pair: P must be m x m");
  require(q.rows() == d.cols() && q.cols() == d.cols(), "unitary_pair: Q must be n x n");
  require(unitarity_residual(p) < 1e-10 && unitarity_residual(q) < 1e-10, "unitary_pair: P and Q must be unitary");
  auto node = std::make_shared<Node>(MapFamily::UnitaryPair, d);
  node->left = p;
  node->right = q;
  return HoloMap(node);
}

HoloMap HoloMap::mobius(const Domain& d, const Point& p) {
  auto node = std::make_shared<Node>(MapFamily::Mobius, d);
  node->mobius = std::make_shared<const MobiusFactors>(cartan::mobius_factors(d, p));
  return HoloMap(node);
}

HoloMap HoloMap::product(const Domain& d, const std::vector<HoloMap>& factors) {
  require(d.kind() == DomainKind::Product, "product map needs a product domain");
  require(factors.size() == d.factors().size(), "product map needs one map per factor");
  for (std::size_t i = 0; i < factors.size(); ++i)
    require(factors[i].source() == d.factors()[i], "product map: factor map domain mismatch");
  auto node = std::make_shared<Node>(MapFamily::Product, d);
  node->children = factors;
  return HoloMap(node);
}

HoloMap HoloMap::compose(const std::vector<HoloMap>& maps) {
  require(!maps.empty(), "compose needs at least one map");
  for (std::size_t i = 0; i + 1 < maps.size(); ++i)
    require(maps[i].target() == maps[i + 1].source(), "compose: target/source mismatch");
  auto node = std::make_shared<Node>(MapFamily::Compose, maps.front().source());
  node->children = maps;
  return HoloMap(node);
}

HoloMap HoloMap::factor_embed(const Domain& d, std::size_t index, const HoloMap& base) {
  require(d.kind() == DomainKind::Product, "factor_embed needs a product domain");
  require(index < d.factors().size(), "factor_embed: index out of range");
  require(base.source() == d.factors()[index], "factor_embed: base map domain mismatch");
  auto node = std::make_shared<Node>(MapFamily::FactorEmbed, d);
  node->children = {base};
  node->index = index;
  return HoloMap(node);
}

MapFamily HoloMap::family() const { return node_->family; }
const Domain& HoloMap::source() const { return node_->domain; }
const Domain& HoloMap::target() const { return node_->domain; }
const std::vector<HoloMap>& HoloMap::children() const { return node_->children; }

const MobiusFactors& HoloMap::mobius_factors() const {
  require(node_->family == MapFamily::Mobius, "not a mobius map");
  return *node_->mobius;
}

Point HoloMap::evaluate(const Point& z) const {
  const Node& n = *node_;
  check_length(n.domain, z.coords, "evaluate");
  switch (n.family) {
    case MapFamily::Identity: return z;
    case MapFamily::Constant: return n.constant;
    case MapFamily::Scale: return {n.scale * z.coords};
    case MapFamily::DiscAffine: {
      CVec out(1);
      out(0) = n.a + n.b * z.coords(0);
      return {out};
    }
    case MapFamily::UnitaryPair:
      return {from_matrix(n.domain, n.left * to_matrix(n.domain, z.coords) * n.right)};
    case MapFamily::Mobius:
      return {from_matrix(n.domain, mobius_apply(*n.mobius, to_matrix(n.domain, z.coords)))};
    case MapFamily::Product: {
      CVec out(z.coords.size());
      for (std::size_t i = 0; i < n.children.size(); ++i)
        out.segment(n.domain.factor_offset(i), n.domain.factors()[i].dimension()) =
            n.children[i].evaluate({factor_slice(n.domain, i, z.coords)}).coords;
      return {out};
    }
    case MapFamily::Compose: {
      Point cur = z;
      for (const auto& c : n.children) cur = c.evaluate(cur);
      return cur;
    }
    case MapFamily::FactorEmbed: {
      CVec out = z.coords;
      out.segment(n.domain.factor_offset(n.index), n.domain.factors()[n.index].dimension()) =
          n.children[0].evaluate({factor_slice(n.domain, n.index, z.coords)}).coords;
      return {out};
    }
  }
  return z;
}

CMat HoloMap::jacobian(const Point& z) const {
  const Node& n = *node_;
  check_length(n.domain, z.coords, "jacobian");
  const auto dim = n.domain.dimension();
  switch (n.family) {
    case MapFamily::Identity: return CMat::Identity(dim, dim);
    case MapFamily::Constant: return CMat::Zero(dim, dim);
    case MapFamily::Scale: return n.scale * CMat::Identity(dim, dim);
    case MapFamily::DiscAffine: return CMat::Constant(1, 1, n.b);
    case MapFamily::UnitaryPair: return kronecker(n.left, n.right.transpose());
    case MapFamily::Mobius: return mobius_jacobian(*n.mobius, to_matrix(n.domain, z.coords));
    case MapFamily::Product: {
      CMat j = CMat::Zero(dim, dim);
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        const auto off = n.domain.factor_offset(i);
        const auto len = n.domain.factors()[i].dimension();
        j.block(off, off, len, len) = n.children[i].jacobian({factor_slice(n.domain, i, z.coords)});
      }
      return j;
    }
    case MapFamily::Compose: {
      CMat j = CMat::Identity(dim, dim);
      Point cur = z;
      for (const auto& c : n.children) {
        j = c.jacobian(cur) * j;
        cur = c.evaluate(cur);
      }
      return j;
    }
    case MapFamily::FactorEmbed: {
      CMat j = CMat::Identity(dim, dim);
      const auto off = n.domain.factor_offset(n.index);
      const auto len = n.domain.factors()[n.index].dimension();
      j.block(off, off, len, len) = n.children[0].jacobian({factor_slice(n.domain, n.index, z.coords)});
      return j;
    }
  }
  return CMat::Identity(dim, dim);
}

std::string HoloMap::describe() const {
  const Node& n = *node_;
  std::ostringstream os;
  os << family_name(n.family);
  switch (n.family) {
    case MapFamily::Scale: os << "(" << n.scale << ")"; break;
    case MapFamily::DiscAffine: os << "(" << n.a << ", " << n.b << ")"; break;
    case MapFamily::FactorEmbed: os << "(" << n.index << ", " << n.children[0].describe() << ")"; break;
    case MapFamily::Product:
    case MapFamily::Compose:
      os << "[";
      for (std::size_t i = 0; i < n.children.size(); ++i) os << (i ? ", " : "") << n.children[i].describe();
      os << "]";
      break;
    default: break;
  }
  os << " on " << n.domain.describe();
  return os.str();
}

FiniteDifferenceJacobian jacobian_fd(const HoloMap& m, const Point& z, double h) {
  require(h > 0.0, "jacobian_fd: step must be positive");
  const Domain& d = m.source();
  check_length(d, z.coords, "jacobian_fd");
  const auto dim = d.dimension();
  FiniteDifferenceJacobian out;
  out.jacobian = CMat(m.target().dimension(), dim);
  const cplx i_unit(0.0, 1.0);
  for (Eigen::Index k = 0; k < dim; ++k) {
    CVec step = CVec::Zero(dim);
    step(k) = h;
    const Point xp{z.coords + step}, xm{z.coords - step};
    const Point yp{z.coords + i_unit * step}, ym{z.coords - i_unit * step};
    for (const Point* p : {&xp, &xm, &yp, &ym})
      if (!contains(d, *p)) fail(ErrorKind::OutsideDomain, "jacobian_fd: stencil exits the domain");
    const CVec dx = (m.evaluate(xp).coords - m.evaluate(xm).coords) / (2.0 * h);
    const CVec dy = (m.evaluate(yp).coords - m.evaluate(ym).coords) / (2.0 * h);
    out.jacobian.col(k) = dx;
    // For holomorphic maps d/dy = i d/dz.
    out.cauchy_riemann_residual =
        std::max(out.cauchy_riemann_residual, (dx - dy / i_unit).cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace cartan
