#include "cartan/compactness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Eigenvalues>

#include "cartan/error.hpp"
#include "cartan/metrics.hpp"
#include "cartan/parallel.hpp"

namespace cartan {

DistortionRatio distortion_ratio(const HoloMap& m, const Point& z) {
  const Domain& src = m.source();
  require_metric_point(src, z);
  const Point phi = m.evaluate(z);
  require_metric_point(m.target(), phi);
  const CMat jac = m.jacobian(z);
  const MetricFactor lz = metric_factor(src, z);
  const MetricFactor lphi = metric_factor(m.target(), phi);

  // M = L_phi^H J L_z^{-H}, formed as (L_z^{-1} J^H L_phi)^H so that the
  // identity map gives M = I up to a triangular solve.
  const CMat mh = lz.lower.triangularView<Eigen::Lower>().solve(jac.adjoint() * lphi.lower);
  const CMat c = mh * mh.adjoint();
  Eigen::SelfAdjointEigenSolver<CMat> eig(0.5 * (c + c.adjoint()));
  if (eig.info() != Eigen::Success) fail(ErrorKind::Conditioning, "distortion_ratio: eigensolver failed");
  const Eigen::Index top = eig.eigenvalues().size() - 1;
  const CVec y = eig.eigenvectors().col(top);
  CVec u = lz.lower.adjoint().triangularView<Eigen::Upper>().solve(y);
  u /= u.norm();
  return {std::max(0.0, eig.eigenvalues()(top)), Tangent{u}};
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::EvidenceCompact: return "EvidenceCompact";
    case Verdict::EvidenceNonCompact: return "EvidenceNonCompact";
    case Verdict::ImageBoundedAway: return "ImageBoundedAway";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

int delta_decade(double delta) { return static_cast<int>(std::lround(-std::log10(delta))); }

Verdict compactness_verdict(const std::vector<RatioSample>& samples, const std::vector<double>& epsilons) {
  require(!samples.empty(), "compactness_verdict: empty profile");
  const bool near = std::any_of(samples.begin(), samples.end(), [](const RatioSample& s) { return s.delta < 1e-2; });
  if (!near) return Verdict::ImageBoundedAway;

  std::map<int, double> decade_max;
  double overall = 0.0;
  for (const auto& s : samples) {
    auto [it, inserted] = decade_max.emplace(delta_decade(s.delta), s.ratio);
    if (!inserted) it->second = std::max(it->second, s.ratio);
    overall = std::max(overall, s.ratio);
  }
  const double finest = decade_max.rbegin()->second;
  if (finest >= 0.5 * overall && finest >= 1e-2) return Verdict::EvidenceNonCompact;
  if (decade_max.size() >= 2) {
    const double second = std::next(decade_max.rbegin())->second;
    const bool below = std::all_of(epsilons.begin(), epsilons.end(), [&](double e) { return finest < e; });
    if (finest <= second && below) return Verdict::EvidenceCompact;
  }
  return Verdict::Inconclusive;
}

namespace {

constexpr double kSampleFloor = kMetricBoundaryFloor;

struct Ray {
  CVec dir;
  double exit = 0.0;
};

Point on_ray(const Ray& ray, double s) { return {ray.exit * (1.0 - s) * ray.dir}; }

double image_delta(const HoloMap& m, const Point& z) {
  try {
    return boundary_surrogate(m.target(), m.evaluate(z));
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::optional<Ray> make_ray(const Domain& d, CVec dir) {
  const double n = dir.norm();
  if (!(n > 0.0)) return std::nullopt;
  dir /= n;
  const double exit = ray_exit(d, dir);
  if (!std::isfinite(exit) || exit <= 0.0) return std::nullopt;
  return Ray{dir, exit};
}

double ray_score(const HoloMap& m, const Ray& ray) {
  const double v = image_delta(m, on_ray(ray, 1e-7));
  return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
}

// Canonical axes, random directions, then hill-climbed copies of the rays
// whose images get closest to the boundary.
std::vector<Ray> shoot_rays(const HoloMap& m, const SamplerSpec& sampler, Rng& rng) {
  const Domain& d = m.source();
  std::vector<Ray> rays;
  const Eigen::Index dim = d.dimension();
  for (Eigen::Index k = 0; k < dim; ++k) {
    CVec e = CVec::Zero(dim);
    e(k) = 1.0;
    if (auto r = make_ray(d, e)) rays.push_back(*r);
  }
  while (rays.size() < std::max<std::size_t>(sampler.rays, static_cast<std::size_t>(dim))) {
    if (auto r = make_ray(d, random_direction(d, rng))) rays.push_back(*r);
  }

  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < rays.size(); ++i) scored.emplace_back(ray_score(m, rays[i]), i);
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  const std::size_t climbs = std::min(sampler.climbed_rays, scored.size());
  for (std::size_t c = 0; c < climbs; ++c) {
    Ray best = rays[scored[c].second];
    double best_score = scored[c].first;
    double sigma = 0.5;
    for (int it = 0; it < sampler.refine_iterations; ++it) {
      const auto cand = make_ray(d, best.dir + sigma * random_direction(d, rng));
      const double score = cand ? ray_score(m, *cand) : std::numeric_limits<double>::infinity();
      if (score < best_score) {
        best = *cand;
        best_score = score;
      } else {
        sigma *= 0.7;
      }
    }
    rays.push_back(best);
  }
  return rays;
}

// A point on the ray whose image boundary distance lies in [target/2,
// 2 target], found on a log grid in s = 1 - t/exit and refined by bisection.
std::optional<Point> hit_delta(const HoloMap& m, const Ray& ray, double target, int iterations) {
  constexpr int kGrid = 15;
  double prev_log_s = 0.0, prev_v = std::numeric_limits<double>::quiet_NaN();
  auto in_window = [&](double v) { return v >= 0.5 * target && v <= 2.0 * target; };
  for (int i = 0; i < kGrid; ++i) {
    const double log_s = -0.5 * i;
    const Point z = on_ray(ray, std::pow(10.0, log_s));
    const double v = image_delta(m, z);
    if (std::isnan(v)) return std::nullopt;
    if (in_window(v)) return z;
    if (i > 0 && (prev_v - target) * (v - target) < 0.0) {
      double lo = prev_log_s, hi = log_s;
      for (int k = 0; k < iterations; ++k) {
        const double mid = 0.5 * (lo + hi);
        const Point zm = on_ray(ray, std::pow(10.0, mid));
        const double vm = image_delta(m, zm);
        if (std::isnan(vm)) return std::nullopt;
        if (in_window(vm)) return zm;
        if ((prev_v - target) * (vm - target) < 0.0) hi = mid;
        else lo = mid;
      }
      return std::nullopt;
    }
    prev_log_s = log_s;
    prev_v = v;
  }
  return std::nullopt;
}

std::optional<RatioSample> measure(const HoloMap& m, const Point& z, std::size_t index) {
  try {
    if (boundary_surrogate(m.source(), z) < kSampleFloor) return std::nullopt;
    const double delta = boundary_surrogate(m.target(), m.evaluate(z));
    if (!(delta >= kSampleFloor)) return std::nullopt;
    const auto dr = distortion_ratio(m, z);
    return RatioSample{index, z, delta, dr.ratio, dr.direction};
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

RatioProfile ratio_profile(const HoloMap& m, const SamplerSpec& sampler, std::uint64_t seed) {
  require(sampler.finest_exponent >= 1, "ratio_profile: finest_exponent must be >= 1");
  Rng rng(seed);
  const auto rays = shoot_rays(m, sampler, rng);
  std::vector<Point> points;
  for (int e = 1; e <= sampler.finest_exponent; ++e) {
    const double target = std::pow(10.0, -e);
    for (const auto& ray : rays)
      if (auto z = hit_delta(m, ray, target, sampler.refine_iterations)) points.push_back(*z);
  }
  for (std::size_t i = 0; i < sampler.uniform_samples; ++i) points.push_back(random_interior(m.source(), rng));

  std::vector<std::optional<RatioSample>> slots(points.size());
  parallel_for(points.size(), sampler.workers, [&](std::size_t i) { slots[i] = measure(m, points[i], i); });

  RatioProfile out{m, {}, Verdict::ImageBoundedAway};
  for (auto& s : slots)
    if (s) out.samples.push_back(std::move(*s));
  std::stable_sort(out.samples.begin(), out.samples.end(),
                   [](const RatioSample& a, const RatioSample& b) { return a.delta > b.delta; });
  if (!out.samples.empty()) out.verdict = compactness_verdict(out.samples, sampler.epsilons);
  return out;
}

namespace {

std::vector<std::size_t> type_one_factors(const Domain& t) {
  std::vector<std::size_t> out;
  if (t.kind() == DomainKind::I) return {0};
  if (t.kind() == DomainKind::Product)
    for (std::size_t i = 0; i < t.factors().size(); ++i)
      if (t.factors()[i].kind() == DomainKind::I) out.push_back(i);
  return out;
}

}  // namespace

std::vector<ProbePoint> sequence_probe(const HoloMap& m, const TestFamily& family, const std::vector<double>& r_grid,
                                       std::size_t samples, std::uint64_t seed, std::size_t workers) {
  const Domain& src = m.source();
  const Domain& tgt = m.target();
  const auto candidates = type_one_factors(tgt);
  require(!candidates.empty(), "sequence_probe: target has no I(m,n) factor");
  require(family.a_param > 0.0, "sequence_probe: a_param must be positive");
  for (double r : r_grid) require(r > 0.0 && r < 1.0, "sequence_probe: r must lie in (0,1)");

  Rng rng(seed);
  const SamplerSpec sampler;
  const auto rays = shoot_rays(m, sampler, rng);
  std::vector<Point> cloud;
  for (std::size_t i = 0; i < samples; ++i) cloud.push_back(random_interior(src, rng));

  std::vector<ProbePoint> out;
  for (double r : r_grid) {
    const double target = 1.0 - r;
    std::optional<Point> best;
    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto& ray : rays) {
      auto z = hit_delta(m, ray, target, sampler.refine_iterations);
      if (!z) continue;
      const double gap = std::abs(std::log(image_delta(m, *z) / target));
      if (gap < best_gap) best = z, best_gap = gap;
    }
    if (!best) continue;

    ProbePoint pp;
    pp.r = r;
    pp.z = *best;
    std::optional<TestFunction> f;
    Point phi;
    Tangent w;
    try {
      phi = m.evaluate(pp.z);
      pp.delta = boundary_surrogate(tgt, phi);
      const auto dr = distortion_ratio(m, pp.z);
      w = Tangent{m.jacobian(pp.z) * dr.direction.coords};
      if (tgt.kind() == DomainKind::I) {
        f = build_general(tgt, phi, w, family.a_param, family.forced_case);
      } else {
        double best_term = 0.0;
        for (std::size_t k : candidates) {
          const Domain& fk = tgt.factors()[k];
          const double term = bergman_form(fk, {factor_slice(tgt, k, phi.coords)}, {factor_slice(tgt, k, w.coords)});
          if (term > best_term) best_term = term, pp.factor = k;
        }
        if (!(best_term > 0.0)) continue;
        const Domain& fk = tgt.factors()[pp.factor];
        f = build_general(fk, {factor_slice(tgt, pp.factor, phi.coords)}, {factor_slice(tgt, pp.factor, w.coords)},
                          family.a_param, family.forced_case)
                .lifted(tgt, pp.factor);
      }
      pp.test_case = f->test_case();
      pp.target_ratio = ratio_at(*f, phi, w);
    } catch (const Error&) {
      continue;
    }

    std::vector<Point> pts = cloud;
    pts.push_back(pp.z);
    std::vector<double> q(pts.size(), 0.0);
    parallel_for(pts.size(), workers, [&](std::size_t i) {
      try {
        const Point image = m.evaluate(pts[i]);
        const CVec grad = m.jacobian(pts[i]).transpose() * f->gradient(image);
        q[i] = std::sqrt(rayleigh_sup(src, pts[i], grad));
      } catch (const Error&) {
        q[i] = 0.0;
      }
    });
    pp.estimate = *std::max_element(q.begin(), q.end());
    out.push_back(pp);
  }
  return out;
}

ProductDecomposition product_ratio_decomposition(const HoloMap& m, const Point& z, const std::optional<Tangent>& u) {
  const Domain& tgt = m.target();
  require(m.source().kind() == DomainKind::Product && tgt.kind() == DomainKind::Product,
          "product_ratio_decomposition: map must act on a product domain");
  const Tangent dir = u ? *u : distortion_ratio(m, z).direction;
  check_length(m.source(), dir.coords, "product_ratio_decomposition");
  const Point phi = m.evaluate(z);
  const CVec w = m.jacobian(z) * dir.coords;

  ProductDecomposition out;
  double best = -1.0;
  for (std::size_t k = 0; k < tgt.factors().size(); ++k) {
    const double term = bergman_form(tgt.factors()[k], {factor_slice(tgt, k, phi.coords)}, {factor_slice(tgt, k, w)});
    out.factor_terms.push_back(term);
    out.total += term;
    if (term > best) best = term, out.argmax = k;
  }
  out.block_total = quadratic_form(metric_matrix(tgt, phi), Tangent{w});
  out.bound_holds = out.total <= static_cast<double>(tgt.factors().size()) * best;
  return out;
}

double empirical_ratio_bound(const std::vector<HoloMap>& maps, std::size_t samples, std::uint64_t seed,
                             std::size_t workers) {
  Rng rng(seed);
  double best = 0.0;
  for (const auto& m : maps) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < samples; ++i) pts.push_back(random_interior(m.source(), rng));
    std::vector<double> ratios(pts.size(), 0.0);
    parallel_for(pts.size(), workers, [&](std::size_t i) {
      if (auto s = measure(m, pts[i], i)) ratios[i] = s->ratio;
    });
    for (double r : ratios) best = std::max(best, r);
  }
  return best;
}

}  // namespace cartan
