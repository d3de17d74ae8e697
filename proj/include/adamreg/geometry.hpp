#pragma once

#include <cstddef>
#include <vector>

namespace adamreg {

using Vec = std::vector<double>;

// Per-coordinate positive weights defining the diagonal metric
// ||x||_w^2 = sum_i w_i x_i^2.
struct WeightVector {
  Vec w;

  explicit WeightVector(Vec weights);
  std::size_t dim() const { return w.size(); }
};

// Compact convex feasible set: an axis-aligned box or a Euclidean ball.
class FeasibleSet {
 public:
  enum class Kind { Box, Ball };

  static FeasibleSet box(Vec lower, Vec upper);
  static FeasibleSet ball(Vec center, double radius);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  const Vec& center() const { return center_; }
  double radius() const { return radius_; }

  bool contains(const Vec& x, double tol = 1e-12) const;

  // max_i (upper_i - lower_i) for boxes, 2r for balls.
  double infinity_diameter() const;

 private:
  FeasibleSet() = default;

  Kind kind_ = Kind::Box;
  std::size_t dim_ = 0;
  Vec lower_, upper_;   // Box
  Vec center_;          // Ball
  double radius_ = 0.0; // Ball
};

double weighted_norm_sq(const Vec& x, const WeightVector& w);

// Nearest point of `set` to `y` in the metric of `w`. Boxes project
// coordinate-wise (the weighted objective is separable); balls solve the
// KKT system for the Lagrange multiplier by safeguarded root-finding.
Vec project(const FeasibleSet& set, const WeightVector& w, const Vec& y);

}  // namespace adamreg
