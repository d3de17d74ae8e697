#include "adamreg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adamreg {

namespace {

void require_finite(const Vec& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string(what) + " must be finite");
    }
  }
}

double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

WeightVector::WeightVector(Vec weights) : w(std::move(weights)) {
  if (w.empty()) throw std::invalid_argument("weight vector must be nonempty");
  for (double wi : w) {
    if (!std::isfinite(wi) || wi <= 0.0) {
      throw std::invalid_argument("weights must be finite and strictly positive");
    }
  }
}

FeasibleSet FeasibleSet::box(Vec lower, Vec upper) {
  if (lower.empty() || lower.size() != upper.size()) {
    throw std::invalid_argument("box bounds must be nonempty and of equal dimension");
  }
  require_finite(lower, "box lower bound");
  require_finite(upper, "box upper bound");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (lower[i] > upper[i]) {
      throw std::invalid_argument("box requires lower <= upper coordinate-wise");
    }
  }
  FeasibleSet s;
  s.kind_ = Kind::Box;
  s.dim_ = lower.size();
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  return s;
}

FeasibleSet FeasibleSet::ball(Vec center, double radius) {
  if (center.empty()) throw std::invalid_argument("ball center must be nonempty");
  require_finite(center, "ball center");
  if (!std::isfinite(radius) || radius <= 0.0) {
    throw std::invalid_argument("ball radius must be finite and positive");
  }
  FeasibleSet s;
  s.kind_ = Kind::Ball;
  s.dim_ = center.size();
  s.center_ = std::move(center);
  s.radius_ = radius;
  return s;
}

bool FeasibleSet::contains(const Vec& x, double tol) const {
  if (x.size() != dim_) return false;
  if (kind_ == Kind::Box) {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) return false;
    }
    return true;
  }
  Vec z(dim_);
  for (std::size_t i = 0; i < dim_; ++i) z[i] = x[i] - center_[i];
  return norm2(z) <= radius_ + tol;
}

double FeasibleSet::infinity_diameter() const {
  if (kind_ == Kind::Box) {
    double d = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) d = std::max(d, upper_[i] - lower_[i]);
    return d;
  }
  return 2.0 * radius_;
}

double weighted_norm_sq(const Vec& x, const WeightVector& w) {
  if (x.size() != w.dim()) {
    throw std::invalid_argument("dimension mismatch in weighted_norm_sq");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w.w[i] * x[i] * x[i];
  return s;
}

namespace {

// Weighted projection onto the ball, in coordinates shifted by the center.
// The KKT system gives p_i = w_i z_i / (w_i + lambda) with lambda >= 0 chosen
// so that ||p|| = r; phi below is strictly decreasing in lambda.
Vec project_ball(const FeasibleSet& set, const WeightVector& w, const Vec& y) {
  const std::size_t d = set.dim();
  const double r = set.radius();
  Vec z(d);
  for (std::size_t i = 0; i < d; ++i) z[i] = y[i] - set.center()[i];
  if (norm2(z) <= r) return y;  // already feasible, short-circuit

  auto phi = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double pi = w.w[i] * z[i] / (w.w[i] + lambda);
      s += pi * pi;
    }
    return s - r * r;
  };

  // Grow the upper end geometrically until the constraint flips sign.
  double lo = 0.0;
  double hi = 1.0;
  int guard = 0;
  while (phi(hi) > 0.0) {
    hi *= 2.0;
    if (++guard > 200) throw std::runtime_error("ball projection failed to bracket multiplier");
  }

  // Bisection with a Newton refinement inside the bracket.
  double lambda = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = phi(lambda);
    if (std::abs(f) < 1e-15 || hi - lo < 1e-12 * (1.0 + lambda)) break;
    if (f > 0.0) lo = lambda; else hi = lambda;
    double fp = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double wi = w.w[i];
      const double pi = wi * z[i] / (wi + lambda);
      fp += -2.0 * pi * pi / (wi + lambda);
    }
    double next = (fp != 0.0) ? lambda - f / fp : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    lambda = next;
  }

  Vec p(d);
  for (std::size_t i = 0; i < d; ++i) {
    p[i] = set.center()[i] + w.w[i] * z[i] / (w.w[i] + lambda);
  }
  // Snap exactly onto the sphere to keep feasibility within tolerance.
  Vec q(d);
  for (std::size_t i = 0; i < d; ++i) q[i] = p[i] - set.center()[i];
  const double n = norm2(q);
  if (n > r) {
    for (std::size_t i = 0; i < d; ++i) p[i] = set.center()[i] + q[i] * (r / n);
  }
  return p;
}

}  // namespace

Vec project(const FeasibleSet& set, const WeightVector& w, const Vec& y) {
  if (y.size() != set.dim() || w.dim() != set.dim()) {
    throw std::invalid_argument("dimension mismatch in project");
  }
  require_finite(y, "projection input");
  if (set.kind() == FeasibleSet::Kind::Box) {
    Vec p(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      p[i] = std::clamp(y[i], set.lower()[i], set.upper()[i]);
    }
    return p;
  }
  return project_ball(set, w, y);
}

}  // namespace adamreg
