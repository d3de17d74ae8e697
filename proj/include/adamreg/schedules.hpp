#pragma once

#include <cstdint>
#include <vector>

namespace adamreg {

// Non-increasing schedule for the first-moment parameter beta1_t.
class Beta1Schedule {
 public:
  enum class Kind { Constant, ExpDecay, Harmonic, Piecewise };

  static Beta1Schedule constant(double beta1);
  static Beta1Schedule exp_decay(double beta1, double lambda);  // beta1 * lambda^(t-1)
  static Beta1Schedule harmonic(double beta1);                  // beta1 / t
  // Explicit values for t = 1..values.size(); the last value persists beyond.
  static Beta1Schedule piecewise(std::vector<double> values);

  double at(std::int64_t t) const;
  Kind kind() const { return kind_; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  double base() const { return beta1_; }

 private:
  Beta1Schedule() = default;

  Kind kind_ = Kind::Constant;
  double beta1_ = 0.0;
  double lambda_ = 1.0;
  std::vector<double> values_;
};

// alpha/sqrt(t) for AMSGrad and AdamNC, alpha/t for SAdam.
enum class StepSchedule { Sqrt, Linear };

double step_size(StepSchedule sched, double alpha, std::int64_t t);

}  // namespace adamreg
