#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "adamreg/geometry.hpp"

namespace adamreg {

struct ZoConfig {
  double mu_smooth = 1e-2;  // sampling radius, not the strong-convexity modulus
  std::size_t d = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Uniform sample from the unit sphere S^{d-1}, by normalizing a Gaussian.
Vec sample_unit_sphere(std::size_t d, std::mt19937_64& rng);

// Uniform sample from the unit ball, sphere sample scaled by U^{1/d}.
Vec sample_unit_ball(std::size_t d, std::mt19937_64& rng);

using PointEvaluator = std::function<double(const Vec&)>;

// Two-point estimator (d/mu) [f(x + mu u) - f(x)] u with one fresh u shared
// between both evaluations. The evaluator must close over the round's noise
// so both calls see the same realization.
Vec estimate_gradient(const PointEvaluator& loss_at, const Vec& x,
                      const ZoConfig& cfg, std::mt19937_64& rng);

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
};

// Monte-Carlo estimate of the ball-smoothed value E_{u ~ U_B}[f(x + mu u)].
McEstimate smoothed_value_mc(const PointEvaluator& loss_at, const Vec& x,
                             const ZoConfig& cfg, std::int64_t n_samples,
                             std::mt19937_64& rng);

}  // namespace adamreg
