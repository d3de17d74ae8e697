#include "adamreg/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adamreg {

void AdamHyper::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be positive and finite");
  }
  if (!(beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("beta2 must lie in [0, 1)");
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be nonnegative and finite");
  }
}

double gamma_of(double beta1, double beta2) {
  if (beta2 == 0.0) {
    return beta1 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return beta1 * beta1 / beta2;
}

namespace {

void kahan_add(Vec& sum, Vec& comp, std::size_t i, double term) {
  const double y = term - comp[i];
  const double t = sum[i] + y;
  comp[i] = (t - sum[i]) - y;
  sum[i] = t;
}

}  // namespace

Optimizer::Optimizer(Algorithm alg, AdamHyper hyper, Beta1Schedule beta1,
                     std::optional<FeasibleSet> set, Vec x1)
    : alg_(alg),
      hyper_(hyper),
      beta1_(std::move(beta1)),
      set_(std::move(set)),
      x_(std::move(x1)) {
  hyper_.validate();
  const std::size_t d = x_.size();
  if (d == 0) throw std::invalid_argument("dimension must be >= 1");
  if (alg_ == Algorithm::AmsGradUnconstrained) {
    if (set_) throw std::invalid_argument("unconstrained AMSGrad takes no feasible set");
  } else {
    if (!set_) throw std::invalid_argument("constrained algorithm needs a feasible set");
    if (set_->dim() != d) throw std::invalid_argument("feasible set dimension mismatch");
    if (!(hyper_.epsilon > 0.0)) {
      // The projection weights must be strictly positive; epsilon = 0 is only
      // legal in the unconstrained mode.
      throw std::invalid_argument("constrained algorithms require epsilon > 0");
    }
    if (!set_->contains(x_)) throw std::invalid_argument("x1 must lie in the feasible set");
  }
  for (double xi : x_) {
    if (!std::isfinite(xi)) throw std::invalid_argument("x1 must be finite");
  }
  m_.assign(d, 0.0);
  v_.assign(d, 0.0);
  // AMSGrad starts with v_hat = epsilon * 1.
  const bool ams = alg_ == Algorithm::AmsGrad || alg_ == Algorithm::AmsGradUnconstrained;
  v_hat_.assign(d, ams ? hyper_.epsilon : 0.0);
  if (alg_ == Algorithm::AdamNC || alg_ == Algorithm::SAdam) {
    sq_sum_.assign(d, 0.0);
    sq_comp_.assign(d, 0.0);
  }
}

StepInfo Optimizer::step(const Vec& g) {
  const std::size_t d = x_.size();
  if (g.size() != d) throw std::invalid_argument("gradient dimension mismatch");
  for (double gi : g) {
    if (!std::isfinite(gi)) throw std::invalid_argument("gradient must be finite");
  }

  const std::int64_t t = t_;
  const double td = static_cast<double>(t);
  const double b1t = beta1_.at(t);
  const double a_t = step_size(step_schedule(), hyper_.alpha, t);

  for (std::size_t i = 0; i < d; ++i) {
    m_[i] = b1t * m_[i] + (1.0 - b1t) * g[i];
  }

  Vec y(d);
  switch (alg_) {
    case Algorithm::AmsGrad:
    case Algorithm::AmsGradUnconstrained: {
      for (std::size_t i = 0; i < d; ++i) {
        v_[i] = hyper_.beta2 * v_[i] + (1.0 - hyper_.beta2) * g[i] * g[i];
        v_hat_[i] = std::max(v_hat_[i], v_[i]);
        // 0/0 convention: the coordinate update is skipped when v_hat is 0.
        y[i] = v_hat_[i] == 0.0 ? x_[i] : x_[i] - a_t * m_[i] / std::sqrt(v_hat_[i]);
      }
      if (set_) {
        Vec wv(d);
        for (std::size_t i = 0; i < d; ++i) wv[i] = std::sqrt(v_hat_[i]);
        x_ = project(*set_, WeightVector(std::move(wv)), y);
      } else {
        x_ = std::move(y);
      }
      break;
    }
    case Algorithm::AdamNC: {
      // v_t * t = sum_{j<=t} g_j^2 + epsilon, with the sum kept exactly.
      for (std::size_t i = 0; i < d; ++i) {
        kahan_add(sq_sum_, sq_comp_, i, g[i] * g[i]);
        v_[i] = (sq_sum_[i] + hyper_.epsilon) / td;
        y[i] = v_[i] == 0.0 ? x_[i] : x_[i] - a_t * m_[i] / std::sqrt(v_[i]);
      }
      Vec wv(d);
      for (std::size_t i = 0; i < d; ++i) wv[i] = std::sqrt(v_[i]);
      x_ = project(*set_, WeightVector(std::move(wv)), y);
      break;
    }
    case Algorithm::SAdam: {
      // beta_2t = 1 - 1/t, which makes v_t the running average of g^2;
      // v_hat adds epsilon/t and the projection uses the first power of v_hat.
      for (std::size_t i = 0; i < d; ++i) {
        kahan_add(sq_sum_, sq_comp_, i, g[i] * g[i]);
        v_[i] = sq_sum_[i] / td;
        v_hat_[i] = (sq_sum_[i] + hyper_.epsilon) / td;
        y[i] = x_[i] - a_t * m_[i] / v_hat_[i];
      }
      x_ = project(*set_, WeightVector(v_hat_), y);
      break;
    }
  }

  ++t_;
  return StepInfo{t, a_t, b1t};
}

}  // namespace adamreg
