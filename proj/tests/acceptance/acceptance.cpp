// One line per acceptance criterion; exits nonzero if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cartan/automorphisms.hpp"
#include "cartan/commands.hpp"
#include "cartan/compactness.hpp"
#include "cartan/metrics.hpp"
#include "cartan/testfns.hpp"

using namespace cartan;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

CVec unit(const Domain& d, int row, int col) {
  CVec e = CVec::Zero(d.dimension());
  e(row * d.cols() + col) = 1.0;
  return e;
}

Outcome ac01() {
  Rng rng(101);
  const auto r = automorphism_battery(2, 3, 100, rng);
  const double worst = std::max({r.involution, r.alternate_form, r.determinant_identity, r.exchange});
  return {worst < 1e-9 && r.self_map_failures == 0, fmt("max residual %.3g over 100 pairs", worst)};
}

Outcome ac02() {
  Rng rng(102);
  const auto r = automorphism_battery(2, 3, 50, rng);
  const double worst = std::max(r.differential_at_p, r.differential_at_0);
  return {worst < 1e-10, fmt("max residual %.3g over 50 W", worst)};
}

Outcome ac03() {
  Rng rng(103);
  const Domain d = Domain::type_one(2, 3);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Point p = random_interior(d, rng, 0.9);
    const Point z = random_interior(d, rng);
    const Tangent v{complex_gaussian_vector(rng, 6)};
    const double before = bergman_form(d, z, v);
    const double after = bergman_form(d, mobius_apply(d, p, z), {mobius_jacobian(d, p, z) * v.coords});
    worst = std::max(worst, std::abs(after - before) / before);
  }
  return {worst < 1e-8, fmt("max relative deviation %.3g over 1000 samples", worst)};
}

Outcome ac04() {
  Rng rng(104);
  double worst = 0.0;
  for (const Domain& d : {Domain::type_one(2, 3), Domain::type_one(2, 2)}) {
    for (int t = 0; t < 1000; ++t) {
      const double r = 0.999 * uniform01(rng) + 1e-6;
      const Tangent w{complex_gaussian_vector(rng, d.dimension())};
      const auto c = classify_direction(d, r, w);
      const double h = bergman_form(d, {r * unit(d, 0, 0)}, w);
      worst = std::max(worst, std::abs((d.rows() + d.cols()) * (c.a + c.b + c.c) - h) / h);
    }
  }
  return {worst < 1e-10, fmt("max relative deviation %.3g", worst)};
}

Outcome ac05() {
  // The exact ratio at r = 1 - 1e-6 is about (1 + r) times the published
  // lower bound, so it is checked against the bound from below; the bound
  // itself must sit within 2% of its limit at this r.
  bool ok = true;
  double min_margin = 1e300, worst_bound_gap = 0.0;
  const double r = 1.0 - 1e-6, c = std::exp(-(1.0 - r));
  for (const Domain& d : {Domain::type_one(2, 2), Domain::type_one(2, 3)}) {
    const double mn = d.rows() + d.cols();
    const double target = std::sqrt(1.0 / (3.0 * mn)) * 0.5;
    const TestFunction f = build_diagonal(d, r, {unit(d, 0, 0)}, 1.0);
    const double ratio = ratio_at(f, {r * unit(d, 0, 0)}, {unit(d, 0, 0)});
    const double bound = std::sqrt(1.0 / (3.0 * mn)) * (1.0 - (1.0 - r) * c / (1.0 - c * r));
    ok = ok && ratio >= 0.98 * target && std::abs(bound / target - 1.0) < 0.02;
    min_margin = std::min(min_margin, ratio / target);
    worst_bound_gap = std::max(worst_bound_gap, std::abs(bound / target - 1.0));
  }
  return {ok, fmt("lower-bound reading: exact ratio is %.4f x the limit, the bound is within %.2e of it", min_margin,
                 worst_bound_gap)};
}

Outcome ac06() {
  Rng rng(106);
  int violations = 0;
  for (const Domain& d : {Domain::type_one(2, 2), Domain::type_one(2, 3)}) {
    const double mn = d.rows() + d.cols();
    const TestFunction f1 = build_diagonal_case(d, 0.999, {unit(d, 0, 0)}, 1.0, TestCase::LogCase1);
    const TestFunction f2 = build_diagonal_case(d, 0.999, {unit(d, 0, 1)}, 1.0, TestCase::RootCase2);
    for (int t = 0; t < 1000; ++t) {
      const Point z = random_interior(d, rng);
      violations += rayleigh_sup(d, z, f1.gradient(z)) > 16.0 / mn;
      violations += std::abs(f2.evaluate(z)) > 4.0 * (std::sqrt(d.rows()) + std::sqrt(d.cols()));
    }
  }
  return {violations == 0, fmt("%.0f violations over 2x2000 checks", violations)};
}

Outcome ac07() {
  const HoloMap m = HoloMap::disc_affine(Domain::type_one(1, 1), 0.5, 0.5);
  double worst = 0.0;
  for (double r : {0.0, 0.5, 0.9, 0.99}) {
    const double want = 4.0 * (1 + r) * (1 + r) / ((3 + r) * (3 + r));
    worst = std::max(worst, std::abs(distortion_ratio(m, {CVec::Constant(1, r)}).ratio - want));
  }
  return {worst < 1e-9, fmt("max abs error %.3g", worst)};
}

Outcome ac08() {
  const Domain disc = Domain::type_one(1, 1);
  const Domain i23 = Domain::type_one(2, 3);
  const Domain i22 = Domain::type_one(2, 2);
  SamplerSpec sampler;
  Rng rng(108);
  bool ok = ratio_profile(HoloMap::scale(disc, 0.5), sampler, 1).verdict == Verdict::ImageBoundedAway;
  double dev = 0.0;
  for (int t = 0; t < 3; ++t) {
    const RatioProfile p = ratio_profile(HoloMap::mobius(i23, random_interior(i23, rng, 0.8)), sampler, 10 + t);
    ok = ok && p.verdict == Verdict::EvidenceNonCompact;
    for (const auto& s : p.samples) dev = std::max(dev, std::abs(s.ratio - 1.0));
  }
  ok = ok && dev < 1e-8;
  ok = ok && ratio_profile(HoloMap::disc_affine(disc, 0.5, 0.5), sampler, 2).verdict == Verdict::EvidenceNonCompact;
  const HoloMap ms = HoloMap::compose({HoloMap::scale(i22, 0.5), HoloMap::mobius(i22, random_interior(i22, rng, 0.8))});
  ok = ok && ratio_profile(ms, sampler, 3).verdict == Verdict::ImageBoundedAway;
  return {ok, fmt("four verdicts; mobius ratios within %.3g of 1", dev)};
}

Outcome ac09() {
  Rng rng(109);
  const Domain i12 = Domain::type_one(1, 2);
  const Domain iv2 = Domain::type_four(2);
  const std::vector<HoloMap> maps{
      HoloMap::compose({HoloMap::scale(i12, 0.7), HoloMap::mobius(i12, random_interior(i12, rng, 0.8))}),
      HoloMap::scale(iv2, 0.8)};
  bool ok = true;
  double worst_reach = 1.0;
  for (const auto& m : maps) {
    const Point z = random_interior(m.source(), rng, 0.9);
    const auto dr = distortion_ratio(m, z);
    const Point phi = m.evaluate(z);
    const CMat j = m.jacobian(z);
    double best = 0.0;
    for (int k = 0; k < 100000; ++k) {
      const CVec u = complex_gaussian_vector(rng, z.coords.size());
      best = std::max(best, bergman_form(m.target(), phi, {j * u}) / bergman_form(m.source(), z, {u}));
    }
    ok = ok && best <= dr.ratio * (1.0 + 1e-12) && best >= 0.99 * dr.ratio;
    worst_reach = std::min(worst_reach, best / dr.ratio);
  }
  return {ok, fmt("random max reaches %.5f of the eigenvalue", worst_reach)};
}

Outcome ac10() {
  Rng rng(110);
  const Domain i23 = Domain::type_one(2, 3);
  const Domain prod = Domain::product({Domain::type_one(1, 2), Domain::type_four(2)});
  const std::vector<HoloMap> maps{
      HoloMap::disc_affine(Domain::type_one(1, 1), 0.5, 0.5),
      HoloMap::unitary_pair(i23, random_unitary(rng, 2), random_unitary(rng, 3)),
      HoloMap::mobius(i23, random_interior(i23, rng, 0.8)),
      HoloMap::compose({HoloMap::scale(i23, 0.6), HoloMap::mobius(i23, random_interior(i23, rng, 0.8))}),
      HoloMap::product(prod, {HoloMap::mobius(prod.factors()[0], random_interior(prod.factors()[0], rng, 0.8)),
                              HoloMap::scale(prod.factors()[1], 0.5)})};
  double worst = 0.0;
  for (const auto& m : maps)
    for (int t = 0; t < 100; ++t) {
      const Point z = random_interior(m.source(), rng, 0.9);
      const CMat an = m.jacobian(z);
      worst = std::max(worst, (jacobian_fd(m, z, 1e-6).jacobian - an).norm() / std::max(1.0, an.norm()));
    }
  for (TestCase tc : {TestCase::LogCase1, TestCase::RootCase2, TestCase::RootCase3}) {
    const TestFunction f = build_general(i23, random_interior(i23, rng, 0.95), {complex_gaussian_vector(rng, 6)}, 1.0, tc);
    for (int t = 0; t < 100; ++t) {
      const Point z = random_interior(i23, rng, 0.9);
      const CVec an = f.gradient(z);
      worst = std::max(worst, (gradient_fd(f, z, 1e-6) - an).norm() / std::max(1e-3, an.norm()));
    }
  }
  return {worst < 1e-6, fmt("max relative error %.3g", worst)};
}

Outcome ac11() {
  Rng rng(111);
  const Domain d = Domain::type_one(2, 2);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const double l1 = 0.2 + 0.79 * uniform01(rng);
    RVec lambdas(2);
    lambdas << l1, l1 * uniform01(rng);
    const HoloMap psi = collapse_map(d, lambdas, 0);
    const CVec z = random_interior(d, rng).coords;
    const cplx want = z(0) + lambdas(1) * z(1) * z(2) / (1.0 - lambdas(1) * z(3));
    worst = std::max(worst, std::abs(psi.evaluate({z}).coords(0) - want));
  }
  return {worst < 1e-10, fmt("max abs error %.3g", worst)};
}

Outcome ac12() {
  Rng rng(112);
  const Domain disc = Domain::type_one(1, 1);
  const Domain p = Domain::product({Domain::type_one(1, 2), Domain::type_four(2), disc});
  const HoloMap m = HoloMap::product(p, {HoloMap::mobius(p.factors()[0], random_interior(p.factors()[0], rng, 0.7)),
                                         HoloMap::scale(p.factors()[1], 0.6), HoloMap::disc_affine(disc, 0.5, 0.5)});
  int bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto dec = product_ratio_decomposition(m, random_interior(p, rng), Tangent{complex_gaussian_vector(rng, 5)});
    bad += !dec.bound_holds || dec.total != dec.block_total;
  }
  return {bad == 0, fmt("%.0f failures over 1000 samples", bad)};
}

Outcome ac13() {
  const char* cfg = R"({
    "domain": {"kind": "I", "m": 2, "n": 3},
    "map": {"family": "mobius", "params": {"P": [[0.3, [0.1, -0.2], 0.0], [0.0, 0.25, [0.0, 0.1]]]}},
    "seed": 11})";
  bool ok = true;
  for (OutputFormat f : {OutputFormat::Json, OutputFormat::Csv}) {
    RunOptions a, b;
    a.format = b.format = f;
    b.workers = 4;
    const Report first = run_command("ratio-profile", cfg, a);
    ok = ok && first.exit_code == 0 && first.text == run_command("ratio-profile", cfg, a).text &&
         first.text == run_command("ratio-profile", cfg, b).text;
  }
  return {ok, "json and csv identical across repeats and worker counts"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"automorphism identity battery", ac01},
      {"differential at P and at 0", ac02},
      {"Bergman isometry under automorphisms", ac03},
      {"direction split matches the metric", ac04},
      {"log-case ratio near the boundary", ac05},
      {"test-function bounds", ac06},
      {"disc distortion closed form", ac07},
      {"verdict regression", ac08},
      {"eigenvalue vs random directions", ac09},
      {"analytic vs finite-difference derivatives", ac10},
      {"collapse map first component", ac11},
      {"product decomposition", ac12},
      {"ratio-profile determinism", ac13},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("[%s] AC%02zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
