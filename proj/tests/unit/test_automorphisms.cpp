#include <doctest.h>

#include "cartan/automorphisms.hpp"
#include "cartan/error.hpp"

using namespace cartan;

TEST_CASE("identity battery on I(2,3)") {
  Rng rng(30);
  const IdentityResiduals r = automorphism_battery(2, 3, 100, rng);
  CHECK(r.samples == 100);
  CHECK(r.involution < 1e-9);
  CHECK(r.exchange < 1e-9);
  CHECK(r.differential_at_p < 1e-10);
  CHECK(r.differential_at_0 < 1e-10);
  CHECK(r.alternate_form < 1e-9);
  CHECK(r.determinant_identity < 1e-9);
  CHECK(r.self_map_failures == 0);
}

TEST_CASE("identity battery on square and wide shapes") {
  Rng rng(31);
  for (auto [m, n] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{1, 4}, std::pair{3, 3}}) {
    const IdentityResiduals r = automorphism_battery(m, n, 30, rng);
    CHECK(std::max({r.involution, r.exchange, r.alternate_form, r.determinant_identity}) < 1e-9);
    CHECK(r.self_map_failures == 0);
  }
}

TEST_CASE("normal-form factors are consistent") {
  Rng rng(32);
  const Domain d = Domain::type_one(2, 3);
  for (int t = 0; t < 20; ++t) {
    const CMat p = to_matrix(d, random_interior(d, rng, 0.9).coords);
    const MobiusFactors f = mobius_factors(p);
    CHECK(max_abs_diff(f.q * f.q_inv, CMat::Identity(2, 2)) < 1e-12);
    CHECK(max_abs_diff(f.r * f.r_inv, CMat::Identity(3, 3)) < 1e-12);
    // Q^2 = (I - P P^H)^{-1}, R^2 = (I - P^H P)^{-1}.
    CHECK(max_abs_diff(f.q_inv * f.q_inv, CMat::Identity(2, 2) - p * p.adjoint()) < 1e-12);
    CHECK(max_abs_diff(f.r_inv * f.r_inv, CMat::Identity(3, 3) - p.adjoint() * p) < 1e-12);
  }
}

TEST_CASE("repeated singular values do not change the map") {
  // P = 0.5 U0 V0 has a doubly degenerate spectrum; any other SVD of it
  // gives the same automorphism.
  Rng rng(33);
  const CMat u0 = random_unitary(rng, 2);
  const CMat v0 = random_unitary(rng, 3);
  CMat diag = CMat::Zero(2, 3);
  diag(0, 0) = diag(1, 1) = 0.5;
  const CMat p = u0 * diag * v0;
  const MobiusFactors a = mobius_factors(p);
  const CMat w = random_unitary(rng, 2);  // rotates inside the degenerate block
  CMat wbig = CMat::Identity(3, 3);
  wbig.topLeftCorner(2, 2) = w.adjoint();
  RVec lambdas(2);
  lambdas << 0.5, 0.5;
  const MobiusFactors b = mobius_factors_from(u0 * w, lambdas, wbig * v0);
  REQUIRE(max_abs_diff(b.p, p) < 1e-14);
  const Domain d = Domain::type_one(2, 3);
  for (int t = 0; t < 10; ++t) {
    const CMat z = to_matrix(d, random_interior(d, rng, 0.9).coords);
    CHECK(max_abs_diff(mobius_apply(a, z), mobius_apply(b, z)) < 1e-12);
  }
}

TEST_CASE("singular values at or above one are refused") {
  RVec lambdas(1);
  lambdas << 1.0;
  CHECK_THROWS_AS(mobius_factors_from(CMat::Identity(1, 1), lambdas, CMat::Identity(2, 2)), Error);
  CHECK_THROWS_AS(mobius_factors(CMat::Constant(1, 1, 1.2)), Error);
}

TEST_CASE("collapse sends the diagonal to its first entry") {
  const Domain d = Domain::type_one(2, 2);
  RVec lambdas(2);
  lambdas << 0.9, 0.5;
  const HoloMap psi = collapse_map(d, lambdas, 0);
  CVec diag = CVec::Zero(4);
  diag(0) = 0.9;
  diag(3) = 0.5;
  const CVec out = psi.evaluate({diag}).coords;
  CVec want = CVec::Zero(4);
  want(0) = 0.9;
  CHECK(max_abs_diff(out, want) < 1e-9);

  RVec single(2);
  single << 0.7, 0.0;
  CHECK(collapse_map(d, single, 0).family() == MapFamily::Identity);
}

TEST_CASE("collapse first component closed form") {
  Rng rng(34);
  const Domain d = Domain::type_one(2, 2);
  for (int t = 0; t < 100; ++t) {
    const double l1 = 0.2 + 0.79 * uniform01(rng);
    const double l2 = l1 * uniform01(rng);
    RVec lambdas(2);
    lambdas << l1, l2;
    const HoloMap psi = collapse_map(d, lambdas, 0);
    const CVec z = random_interior(d, rng, 0.95).coords;
    const cplx want = z(0) + l2 * z(1) * z(2) / (1.0 - l2 * z(3));
    CHECK(std::abs(psi.evaluate({z}).coords(0) - want) < 1e-10);
  }
}

TEST_CASE("alternate form agrees off the battery") {
  Rng rng(35);
  const Domain d = Domain::type_one(3, 4);
  for (int t = 0; t < 20; ++t) {
    const MobiusFactors f = mobius_factors(to_matrix(d, random_interior(d, rng, 0.9).coords));
    const CMat z = to_matrix(d, random_interior(d, rng, 0.9).coords);
    CHECK(max_abs_diff(mobius_apply(f, z), mobius_apply_alt(f, z)) < 1e-11);
  }
}
