#pragma once

#include <cstdint>
#include <optional>

#include "adamreg/geometry.hpp"
#include "adamreg/schedules.hpp"

namespace adamreg {

struct AdamHyper {
  double alpha = 0.1;    // base step size
  double beta2 = 0.999;  // second-moment EMA parameter (AMSGrad only)
  double epsilon = 1e-8;

  void validate() const;
};

enum class Algorithm {
  AmsGrad,
  AdamNC,
  SAdam,
  AmsGradUnconstrained,
};

// gamma = beta1^2 / beta2; the AMSGrad-family bounds need gamma < 1.
double gamma_of(double beta1, double beta2);

struct StepInfo {
  std::int64_t t = 0;
  double alpha_t = 0.0;
  double beta1_t = 0.0;
};

// One optimizer run: state in, gradient in, state advanced. All arithmetic
// is plain double; AdamNC and SAdam keep their sum of squared gradients in
// compensated form since it grows with T.
class Optimizer {
 public:
  Optimizer(Algorithm alg, AdamHyper hyper, Beta1Schedule beta1,
            std::optional<FeasibleSet> set, Vec x1);

  StepInfo step(const Vec& g);

  Algorithm algorithm() const { return alg_; }
  std::int64_t t() const { return t_; }  // index of the next step, starts at 1
  const Vec& x() const { return x_; }
  const Vec& m() const { return m_; }
  const Vec& v() const { return v_; }
  const Vec& v_hat() const { return v_hat_; }
  const AdamHyper& hyper() const { return hyper_; }
  const Beta1Schedule& beta1_schedule() const { return beta1_; }
  bool constrained() const { return set_.has_value(); }
  StepSchedule step_schedule() const {
    return alg_ == Algorithm::SAdam ? StepSchedule::Linear : StepSchedule::Sqrt;
  }

 private:
  Algorithm alg_;
  AdamHyper hyper_;
  Beta1Schedule beta1_;
  std::optional<FeasibleSet> set_;
  std::int64_t t_ = 1;
  Vec x_, m_, v_, v_hat_;
  Vec sq_sum_, sq_comp_;  // compensated sum of g^2 (AdamNC, SAdam)
};

}  // namespace adamreg
