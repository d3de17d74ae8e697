#include "adamreg/zeroth_order.hpp"

#include <cmath>
#include <stdexcept>

namespace adamreg {

void ZoConfig::validate() const {
  if (!(mu_smooth > 0.0) || !std::isfinite(mu_smooth)) {
    throw std::invalid_argument("mu_smooth must be positive and finite");
  }
  if (d == 0) throw std::invalid_argument("dimension must be >= 1");
}

Vec sample_unit_sphere(std::size_t d, std::mt19937_64& rng) {
  if (d == 0) throw std::invalid_argument("dimension must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec u(d);
  double norm_sq = 0.0;
  do {
    norm_sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      u[i] = gauss(rng);
      norm_sq += u[i] * u[i];
    }
  } while (norm_sq == 0.0);
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& ui : u) ui *= inv;
  return u;
}

Vec sample_unit_ball(std::size_t d, std::mt19937_64& rng) {
  Vec u = sample_unit_sphere(d, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double r = std::pow(unif(rng), 1.0 / static_cast<double>(d));
  for (double& ui : u) ui *= r;
  return u;
}

Vec estimate_gradient(const PointEvaluator& loss_at, const Vec& x,
                      const ZoConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  if (x.size() != cfg.d) throw std::invalid_argument("point dimension mismatch");
  const Vec u = sample_unit_sphere(cfg.d, rng);
  Vec shifted(cfg.d);
  for (std::size_t i = 0; i < cfg.d; ++i) shifted[i] = x[i] + cfg.mu_smooth * u[i];
  const double f_base = loss_at(x);
  const double f_shift = loss_at(shifted);
  if (!std::isfinite(f_base) || !std::isfinite(f_shift)) {
    throw std::invalid_argument("loss evaluator returned a nonfinite value");
  }
  const double scale =
      static_cast<double>(cfg.d) / cfg.mu_smooth * (f_shift - f_base);
  Vec g(cfg.d);
  for (std::size_t i = 0; i < cfg.d; ++i) g[i] = scale * u[i];
  return g;
}

McEstimate smoothed_value_mc(const PointEvaluator& loss_at, const Vec& x,
                             const ZoConfig& cfg, std::int64_t n_samples,
                             std::mt19937_64& rng) {
  cfg.validate();
  if (x.size() != cfg.d) throw std::invalid_argument("point dimension mismatch");
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  // Welford running mean/variance.
  double mean = 0.0, m2 = 0.0;
  Vec shifted(cfg.d);
  for (std::int64_t n = 1; n <= n_samples; ++n) {
    const Vec u = sample_unit_ball(cfg.d, rng);
    for (std::size_t i = 0; i < cfg.d; ++i) shifted[i] = x[i] + cfg.mu_smooth * u[i];
    const double f = loss_at(shifted);
    if (!std::isfinite(f)) {
      throw std::invalid_argument("loss evaluator returned a nonfinite value");
    }
    const double delta = f - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (f - mean);
  }
  McEstimate out;
  out.mean = mean;
  if (n_samples > 1) {
    const double var = m2 / static_cast<double>(n_samples - 1);
    out.std_err = std::sqrt(var / static_cast<double>(n_samples));
  }
  return out;
}

}  // namespace adamreg
