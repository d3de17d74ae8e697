#include "adamreg/schedules.hpp"

#include <cmath>
#include <stdexcept>

namespace adamreg {

namespace {

void check_beta1(double b) {
  if (!(b >= 0.0 && b < 1.0)) {
    throw std::invalid_argument("beta1 must lie in [0, 1)");
  }
}

}  // namespace

Beta1Schedule Beta1Schedule::constant(double beta1) {
  check_beta1(beta1);
  Beta1Schedule s;
  s.kind_ = Kind::Constant;
  s.beta1_ = beta1;
  return s;
}

Beta1Schedule Beta1Schedule::exp_decay(double beta1, double lambda) {
  check_beta1(beta1);
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw std::invalid_argument("exp_decay requires lambda in (0, 1)");
  }
  Beta1Schedule s;
  s.kind_ = Kind::ExpDecay;
  s.beta1_ = beta1;
  s.lambda_ = lambda;
  return s;
}

Beta1Schedule Beta1Schedule::harmonic(double beta1) {
  check_beta1(beta1);
  Beta1Schedule s;
  s.kind_ = Kind::Harmonic;
  s.beta1_ = beta1;
  return s;
}

Beta1Schedule Beta1Schedule::piecewise(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("piecewise schedule needs at least one value");
  for (double v : values) check_beta1(v);
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1]) {
      throw std::invalid_argument("beta1 schedule must be non-increasing");
    }
  }
  Beta1Schedule s;
  s.kind_ = Kind::Piecewise;
  s.beta1_ = values.front();
  s.values_ = std::move(values);
  return s;
}

double Beta1Schedule::at(std::int64_t t) const {
  if (t < 1) throw std::invalid_argument("schedule index t must be >= 1");
  switch (kind_) {
    case Kind::Constant:
      return beta1_;
    case Kind::ExpDecay:
      return beta1_ * std::pow(lambda_, static_cast<double>(t - 1));
    case Kind::Harmonic:
      return beta1_ / static_cast<double>(t);
    case Kind::Piecewise: {
      const std::size_t idx = static_cast<std::size_t>(t - 1);
      return idx < values_.size() ? values_[idx] : values_.back();
    }
  }
  return beta1_;
}

double step_size(StepSchedule sched, double alpha, std::int64_t t) {
  if (t < 1) throw std::invalid_argument("step index t must be >= 1");
  return sched == StepSchedule::Sqrt ? alpha / std::sqrt(static_cast<double>(t))
                                     : alpha / static_cast<double>(t);
}

}  // namespace adamreg
