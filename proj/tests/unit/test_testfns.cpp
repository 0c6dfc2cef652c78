#include <doctest.h>

#include "cartan/automorphisms.hpp"
#include "cartan/error.hpp"
#include "cartan/metrics.hpp"
#include "cartan/testfns.hpp"

using namespace cartan;

namespace {

CVec unit(const Domain& d, int row, int col) {
  CVec e = CVec::Zero(d.dimension());
  e(row * d.cols() + col) = 1.0;
  return e;
}

Point diag_point(const Domain& d, double r) { return {r * unit(d, 0, 0)}; }

}  // namespace

TEST_CASE("direction classification examples") {
  const Domain d = Domain::type_one(2, 3);
  auto c1 = classify_direction(d, 0.3, {unit(d, 0, 0)});
  CHECK(c1.test_case == TestCase::LogCase1);
  CHECK(c1.b == 0.0);
  CHECK(c1.c == 0.0);
  auto c2 = classify_direction(d, 0.9, {unit(d, 0, 1)});
  CHECK(c2.test_case == TestCase::RootCase2);
  CHECK(c2.a == 0.0);
  CHECK(c2.c == 0.0);
  CHECK(c2.b == doctest::Approx(1.0 / (1.0 - 0.81)).epsilon(1e-14));
  auto c3 = classify_direction(d, 0.5, {unit(d, 1, 1)});
  CHECK(c3.test_case == TestCase::RootCase3);
  CHECK(c3.c == 1.0);
  CHECK_THROWS_AS(classify_direction(d, 0.5, {CVec::Zero(6)}), Error);
  CHECK_THROWS_AS(classify_direction(d, 1.0, {unit(d, 0, 0)}), Error);
}

TEST_CASE("classification ties go to the smaller case") {
  const Domain d = Domain::type_one(2, 2);
  // r = 0: A = |w11|^2, B = |w12|^2 + |w21|^2, C = |w22|^2.
  const double r = 1e-300;
  CVec w = unit(d, 0, 0) + unit(d, 0, 1);
  CHECK(classify_direction(d, r, {w}).test_case == TestCase::LogCase1);
  w = unit(d, 0, 1) + unit(d, 1, 1);
  CHECK(classify_direction(d, r, {w}).test_case == TestCase::RootCase2);
}

TEST_CASE("metric splits into the three direction terms") {
  Rng rng(40);
  for (const Domain& d : {Domain::type_one(2, 3), Domain::type_one(2, 2)}) {
    for (int t = 0; t < 200; ++t) {
      const double r = 0.999 * uniform01(rng);
      const Tangent w{complex_gaussian_vector(rng, d.dimension())};
      const auto c = classify_direction(d, r, w);
      const double h = bergman_form(d, diag_point(d, r), w);
      CHECK(std::abs((d.rows() + d.cols()) * (c.a + c.b + c.c) - h) / h < 1e-10);
    }
  }
}

TEST_CASE("log case gradient at the target point") {
  const Domain d = Domain::type_one(2, 3);
  for (double r : {0.5, 0.9, 0.999}) {
    const TestFunction f = build_diagonal(d, r, {unit(d, 0, 0)}, 1.0);
    const CVec g = f.gradient(diag_point(d, r));
    const double c = std::exp(-(1.0 - r));
    CHECK(std::abs(g(0) - (1.0 / (1.0 - r) - c / (1.0 - c * r))) < 1e-12 / (1.0 - r));
    CHECK(g.tail(5).norm() == 0.0);
  }
}

TEST_CASE("analytic gradients match finite differences") {
  Rng rng(41);
  const Domain d = Domain::type_one(2, 3);
  for (TestCase tc : {TestCase::LogCase1, TestCase::RootCase2, TestCase::RootCase3}) {
    CAPTURE(test_case_name(tc));
    const Point target = random_interior(d, rng, 0.95);
    const TestFunction general = build_general(d, target, {complex_gaussian_vector(rng, 6)}, 1.0, tc);
    const TestFunction diagonal = build_diagonal_case(d, 0.99, {complex_gaussian_vector(rng, 6)}, 1.0, tc);
    for (const TestFunction* f : {&general, &diagonal}) {
      double worst = 0.0;
      for (int t = 0; t < 100; ++t) {
        const Point z = random_interior(d, rng, 0.9);
        const CVec an = f->gradient(z);
        const CVec fd = gradient_fd(*f, z, 1e-6);
        worst = std::max(worst, (an - fd).norm() / std::max(an.norm(), 1e-3));
      }
      CHECK(worst < 1e-6);
    }
  }
}

TEST_CASE("published bounds on the log and cross cases") {
  Rng rng(42);
  for (const Domain& d : {Domain::type_one(2, 3), Domain::type_one(2, 2), Domain::type_one(1, 3)}) {
    const double mn = d.rows() + d.cols();
    for (double r : {0.9, 0.999}) {
      const TestFunction f1 = build_diagonal_case(d, r, {unit(d, 0, 0)}, 1.0, TestCase::LogCase1);
      const TestFunction f2 = build_diagonal_case(d, r, {unit(d, 0, 1)}, 1.0, TestCase::RootCase2);
      int violations = 0;
      for (int t = 0; t < 1000; ++t) {
        const Point z = random_interior(d, rng, 0.999);
        if (rayleigh_sup(d, z, f1.gradient(z)) > 16.0 / mn) ++violations;
        if (std::abs(f2.evaluate(z)) > 4.0 * (std::sqrt(d.rows()) + std::sqrt(d.cols()))) ++violations;
      }
      CHECK(violations == 0);
    }
  }
}

TEST_CASE("ratio at the target point") {
  const Domain d22 = Domain::type_one(2, 2);
  const Domain d23 = Domain::type_one(2, 3);
  for (const Domain& d : {d22, d23}) {
    const double mn = d.rows() + d.cols();
    const double r = 1.0 - 1e-6;
    const TestFunction f = build_diagonal(d, r, {unit(d, 0, 0)}, 1.0);
    CHECK(ratio_at(f, diag_point(d, r), {unit(d, 0, 0)}) >= std::sqrt(1.0 / (3.0 * mn)) * 0.5 * 0.98);

    // Cross case: |h(r)| sqrt((1 - r^2)/(m+n)) with h(r) = (1-cr)^{-1/2} - (1-r)^{-1/2}.
    double prev = 0.0;
    for (double rr : {0.9, 0.99, 0.999}) {
      const TestFunction g = build_diagonal(d, rr, {unit(d, 0, 1)}, 1.0);
      REQUIRE(g.test_case() == TestCase::RootCase2);
      const double c = std::exp(-(1.0 - rr));
      const double h = 1.0 / std::sqrt(1.0 - c * rr) - 1.0 / std::sqrt(1.0 - rr);
      const double want = std::abs(h) * std::sqrt((1.0 - rr * rr) / mn);
      const double got = ratio_at(g, diag_point(d, rr), {unit(d, 0, 1)});
      CHECK(std::abs(got - want) < 1e-10 * want);
      CHECK(got > 0.1);
      CHECK(got > prev);
      prev = got;
    }
    CHECK(prev < std::sqrt(2.0) * (1.0 - 1.0 / std::sqrt(2.0)) / std::sqrt(mn));
  }
  CHECK(ratio_at(TestFunction::zero(d22), diag_point(d22, 0.5), {unit(d22, 0, 0)}) == 0.0);
  CHECK_THROWS_AS(ratio_at(TestFunction::zero(d22), diag_point(d22, 0.5), {CVec::Zero(4)}), Error);
}

TEST_CASE("the log case lower bound tends to its limit") {
  // sqrt(1/(3(m+n))) (1 - (1-r)c/(1-cr)) -> sqrt(1/(3(m+n))) a/(a+1).
  for (double mn : {4.0, 5.0}) {
    const double r = 1.0 - 1e-6, c = std::exp(-(1.0 - r));
    const double bound = std::sqrt(1.0 / (3.0 * mn)) * (1.0 - (1.0 - r) * c / (1.0 - c * r));
    CHECK(std::abs(bound / (std::sqrt(1.0 / (3.0 * mn)) * 0.5) - 1.0) < 0.02);
  }
}

TEST_CASE("decay on compact sets") {
  Rng rng(43);
  const Domain d = Domain::type_one(2, 3);
  for (TestCase tc : {TestCase::LogCase1, TestCase::RootCase2, TestCase::RootCase3}) {
    CAPTURE(test_case_name(tc));
    const CVec w = tc == TestCase::LogCase1 ? unit(d, 0, 0) : tc == TestCase::RootCase2 ? unit(d, 0, 1) : unit(d, 1, 1);
    double prev = std::numeric_limits<double>::infinity();
    for (double r : {0.9, 0.99, 0.999, 0.9999, 1.0 - 1e-6}) {
      Rng local(7);
      const double s = decay_on_compact(build_diagonal_case(d, r, {w}, 1.0, tc), 0.5, 300, local);
      CHECK(s < prev);
      prev = s;
    }
    CHECK(prev < 1e-2);
  }
  CHECK(decay_on_compact(TestFunction::zero(d), 0.5, 10, rng) == 0.0);
  // Fixed z11 = 0.5: |log((1 - c/2) / (1/2))| -> 0.
  CVec z = CVec::Zero(6);
  z(0) = 0.5;
  for (double r : {0.9, 0.999}) {
    const double c = std::exp(-(1.0 - r));
    const TestFunction f = build_diagonal(d, r, {unit(d, 0, 0)}, 1.0);
    CHECK(std::abs(f.evaluate({z})) == doctest::Approx(std::abs(std::log((1.0 - 0.5 * c) / 0.5))).epsilon(1e-12));
  }
}

TEST_CASE("seminorm stays bounded along r") {
  const Domain d = Domain::type_one(2, 3);
  const double mn = 5.0;
  for (TestCase tc : {TestCase::LogCase1, TestCase::RootCase2, TestCase::RootCase3}) {
    CAPTURE(test_case_name(tc));
    const CVec w = tc == TestCase::LogCase1 ? unit(d, 0, 0) : tc == TestCase::RootCase2 ? unit(d, 0, 1) : unit(d, 1, 1);
    std::vector<double> sup;
    for (double r : {0.9, 0.99, 0.999}) {
      const TestFunction f = build_diagonal_case(d, r, {w}, 1.0, tc);
      Rng rng(44);
      double s = sampled_seminorm(f, 1000, rng);
      // The sampled cloud rarely reaches the corner, so include the target.
      s = std::max(s, std::sqrt(rayleigh_sup(d, diag_point(d, r), f.gradient(diag_point(d, r)))));
      sup.push_back(s);
    }
    for (double s : sup) {
      CHECK(std::isfinite(s));
      if (tc == TestCase::LogCase1) CHECK(s <= 4.0 / std::sqrt(mn));
      CHECK(s < 10.0 * sup.front() + 1.0);
    }
  }
}

TEST_CASE("general construction at diagonal points") {
  const Domain d = Domain::type_one(2, 2);
  const TestFunction f = build_general(d, diag_point(d, 0.9), {unit(d, 0, 0)});
  CHECK(f.pre_maps().empty());
  CHECK(f.r() == 0.9);

  CVec a = CVec::Zero(4);
  a(0) = 0.9;
  a(3) = 0.5;
  const TestFunction g = build_general(d, {a}, {unit(d, 0, 0)});
  REQUIRE(g.pre_maps().size() == 1);
  const CVec image = g.pre_maps()[0].evaluate({a}).coords;
  CHECK(max_abs_diff(image, 0.9 * unit(d, 0, 0)) < 1e-9);
}

TEST_CASE("rotated targets keep the diagonal ratio") {
  Rng rng(45);
  const Domain d = Domain::type_one(2, 3);
  for (int t = 0; t < 20; ++t) {
    const CMat p = random_unitary(rng, 2), q = random_unitary(rng, 3);
    CMat base = CMat::Zero(2, 3);
    base(0, 0) = 0.9;
    const Point a{from_matrix(d, p.adjoint() * base * q.adjoint())};
    const Tangent w{complex_gaussian_vector(rng, 6)};
    const TestFunction f = build_general(d, a, w);
    CVec v = w.coords;
    Point cur = a;
    for (const auto& m : f.pre_maps()) {
      v = m.jacobian(cur) * v;
      cur = m.evaluate(cur);
    }
    CHECK(max_abs_diff(cur.coords, diag_point(d, 0.9).coords) < 1e-12);
    const TestFunction g = build_diagonal(d, 0.9, {v});
    CHECK(f.test_case() == g.test_case());
    CHECK(std::abs(ratio_at(f, a, w) - ratio_at(g, diag_point(d, 0.9), {v})) < 1e-9);

    // The singular vectors beyond the first are not unique, but the corner
    // entry of the transported direction is, so the log case agrees with
    // any rotation that diagonalises the target.
    const CVec vt = HoloMap::unitary_pair(d, p, q).jacobian(a) * w.coords;
    const TestFunction f1 = build_general(d, a, w, 1.0, TestCase::LogCase1);
    const TestFunction g1 = build_diagonal_case(d, 0.9, {vt}, 1.0, TestCase::LogCase1);
    CHECK(std::abs(ratio_at(f1, a, w) - ratio_at(g1, diag_point(d, 0.9), {vt})) < 1e-9);
  }
}

TEST_CASE("pullback seminorm density is invariant") {
  Rng rng(46);
  const Domain d = Domain::type_one(2, 3);
  for (int t = 0; t < 10; ++t) {
    const Point a = random_interior(d, rng, 0.99);
    const TestFunction g = build_general(d, a, {complex_gaussian_vector(rng, 6)});
    REQUIRE_FALSE(g.pre_maps().empty());
    const TestFunction f = TestFunction::diagonal(d, g.test_case(), g.r(), g.a_param(), g.phases());
    for (int k = 0; k < 10; ++k) {
      const Point z = random_interior(d, rng, 0.95);
      Point psi = z;
      for (const auto& m : g.pre_maps()) psi = m.evaluate(psi);
      const double qg = std::sqrt(rayleigh_sup(d, z, g.gradient(z)));
      const double qf = std::sqrt(rayleigh_sup(d, psi, f.gradient(psi)));
      CHECK(std::abs(qg - qf) <= 1e-8 * std::max(qf, 1.0));
    }
  }
}

TEST_CASE("general construction refuses boundary points") {
  const Domain d = Domain::type_one(2, 2);
  CHECK_THROWS_AS(build_general(d, diag_point(d, 1.0 - 1e-9), {unit(d, 0, 0)}), Error);
  CHECK_THROWS_AS(build_general(d, diag_point(d, 1.5), {unit(d, 0, 0)}), Error);
  CHECK_THROWS_AS(build_general(d, {CVec::Zero(4)}, {unit(d, 0, 0)}), Error);
}

TEST_CASE("lifted functions read one factor") {
  const Domain disc = Domain::type_one(1, 1);
  const Domain prod = Domain::product({Domain::type_four(2), disc});
  const TestFunction f = build_diagonal(disc, 0.9, {CVec::Ones(1)});
  const TestFunction g = f.lifted(prod, 1);
  CVec z(3);
  z << 0.1, 0.2, 0.6;
  CHECK(g.evaluate({z}) == f.evaluate({CVec::Constant(1, 0.6)}));
  const CVec grad = g.gradient({z});
  CHECK(grad.head(2).norm() == 0.0);
  CHECK(grad(2) == f.gradient({CVec::Constant(1, 0.6)})(0));
  CHECK_THROWS_AS(f.lifted(prod, 0), Error);
}

TEST_CASE("branches stay finite near the distinguished boundary point") {
  const Domain d = Domain::type_one(1, 2);
  for (TestCase tc : {TestCase::LogCase1, TestCase::RootCase2}) {
    const TestFunction f = build_diagonal_case(d, 0.99, {CVec::Ones(2)}, 1.0, tc);
    for (double ang : {0.0, 1e-3, -1e-3, 3.0}) {
      CVec z = CVec::Zero(2);
      z(0) = (1.0 - 1e-9) * std::polar(1.0, ang);
      CHECK(std::isfinite(std::abs(f.evaluate({z}))));
    }
  }
}
