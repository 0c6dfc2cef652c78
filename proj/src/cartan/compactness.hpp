#pragma once

// Boundary diagnostics for composition operators: the distortion ratio as a
// generalized eigenvalue, sampled profiles of it against the image's
// boundary distance, decade-based verdicts and the test-function probe.
//
// Verdicts are evidence at the sampled scale only.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cartan/maps.hpp"
#include "cartan/testfns.hpp"

namespace cartan {

struct DistortionRatio {
  double ratio = 0.0;
  /// Unit-norm direction u achieving the ratio.
  Tangent direction;
};

/// sup_u H_{phi(z)}(J u, J u) / H_z(u, u): the top eigenvalue of the pair
/// (J^H G(phi(z)) J, G(z)) after Cholesky reduction of G(z).
DistortionRatio distortion_ratio(const HoloMap& m, const Point& z);

struct RatioSample {
  std::size_t index = 0;  // generation order; stable across worker counts
  Point z;
  double delta = 0.0;  // boundary distance of phi(z)
  double ratio = 0.0;
  Tangent direction;
};

enum class Verdict { EvidenceCompact, EvidenceNonCompact, ImageBoundedAway, Inconclusive };

const char* verdict_name(Verdict v);

struct SamplerSpec {
  int finest_exponent = 6;  // delta targets 10^-1 .. 10^-finest
  std::size_t rays = 32;
  std::size_t climbed_rays = 4;
  std::size_t uniform_samples = 64;
  int refine_iterations = 40;
  std::size_t workers = 1;
  std::vector<double> epsilons{0.1, 0.01};
};

struct RatioProfile {
  HoloMap map;
  std::vector<RatioSample> samples;  // delta descending, ties by index
  Verdict verdict = Verdict::Inconclusive;
};

/// Samples near-boundary points (ray shooting + bisection on the image's
/// boundary distance) and uniform interior points, records the ratio at
/// each. Deterministic in `seed` whatever sampler.workers is.
RatioProfile ratio_profile(const HoloMap& m, const SamplerSpec& sampler, std::uint64_t seed);

/// round(-log10 delta).
int delta_decade(double delta);

/// Decade rules:
///   no sample with delta < 1e-2           -> ImageBoundedAway
///   finest-decade max >= 0.5 overall max
///     and >= 1e-2                         -> EvidenceNonCompact
///   at least two decades, finest max <= the next one's and < every epsilon
///                                         -> EvidenceCompact
///   otherwise                             -> Inconclusive
Verdict compactness_verdict(const std::vector<RatioSample>& samples, const std::vector<double>& epsilons);

struct TestFamily {
  double a_param = 1.0;
  std::optional<TestCase> forced_case;
};

struct ProbePoint {
  double r = 0.0;
  Point z;             // source point whose image is ~ (1 - r) from the boundary
  double delta = 0.0;  // achieved image boundary distance
  std::size_t factor = 0;
  TestCase test_case = TestCase::LogCase1;
  double target_ratio = 0.0;  // Q_f at phi(z) along J u
  double estimate = 0.0;      // sampled sup of Q_{f o phi}
};

/// For each r, a test function aimed at phi(z_r) with boundary distance
/// ~ 1 - r and the worst distortion direction; estimates its pullback's Bloch
/// seminorm. Empty when no image point gets close enough.
std::vector<ProbePoint> sequence_probe(const HoloMap& m, const TestFamily& family, const std::vector<double>& r_grid,
                                       std::size_t samples, std::uint64_t seed, std::size_t workers = 1);

struct ProductDecomposition {
  std::vector<double> factor_terms;  // H^{k}_{phi_k(z)}(w_k, w_k)
  double total = 0.0;                // sum of factor forms
  double block_total = 0.0;          // the same through the block metric
  std::size_t argmax = 0;
  bool bound_holds = false;          // total <= n * max term
};

/// w = J phi(z) u; u defaults to the worst distortion direction.
ProductDecomposition product_ratio_decomposition(const HoloMap& m, const Point& z,
                                                 const std::optional<Tangent>& u = std::nullopt);

/// Largest distortion ratio over `samples` uniform interior points per map.
double empirical_ratio_bound(const std::vector<HoloMap>& maps, std::size_t samples, std::uint64_t seed,
                             std::size_t workers = 1);

}  // namespace cartan
