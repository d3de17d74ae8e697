#include "adamreg/streams.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace adamreg {

void TraceRecord::append(Vec xt, Vec gt, double at, double b1t, double ft) {
  if (d == 0) d = gt.size();
  if (xt.size() != d || gt.size() != d) {
    throw std::invalid_argument("trace append dimension mismatch");
  }
  x.push_back(std::move(xt));
  g.push_back(std::move(gt));
  alpha_t.push_back(at);
  beta1_t.push_back(b1t);
  loss.push_back(ft);
}

double max_abs_gradient(const TraceRecord& trace) {
  double G = 0.0;
  for (const Vec& gt : trace.g) {
    for (double gi : gt) G = std::max(G, std::abs(gi));
  }
  return G;
}

namespace {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_round(std::int64_t t, std::int64_t revealed) {
  if (t < 1 || t > revealed) {
    throw std::out_of_range("round " + std::to_string(t) + " not revealed");
  }
}

Vec draw_uniform_box(std::mt19937_64& rng, const FeasibleSet& box) {
  Vec p(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    std::uniform_real_distribution<double> u(box.lower()[i], box.upper()[i]);
    p[i] = u(rng);
  }
  return p;
}

class AdversarialLinearStream : public LossStream {
 public:
  AdversarialLinearStream(std::size_t d, double G, AdversarialMode::Kind mode,
                          Vec center, std::uint64_t seed)
      : d_(d), G_(G), mode_(mode), center_(std::move(center)), rng_(seed) {
    if (d == 0) throw std::invalid_argument("dimension must be >= 1");
    if (!(G > 0.0)) throw std::invalid_argument("G must be positive");
    if (center_.empty()) center_.assign(d_, 0.0);
    if (center_.size() != d_) throw std::invalid_argument("center dimension mismatch");
  }

  std::size_t dim() const override { return d_; }
  double declared_G() const override { return G_; }
  std::int64_t revealed() const override { return static_cast<std::int64_t>(g_.size()); }

  Vec subgradient(std::int64_t t, const Vec& x) override {
    if (t == revealed() + 1) reveal_next(x);
    check_round(t, revealed());
    return g_[static_cast<std::size_t>(t - 1)];
  }

  double value(std::int64_t t, const Vec& x) const override {
    check_round(t, revealed());
    return dot(g_[static_cast<std::size_t>(t - 1)], x);
  }

  std::optional<Vec> analytic_comparator(const FeasibleSet& set,
                                         std::int64_t T) const override {
    check_round(T, revealed());
    Vec S(d_, 0.0);
    for (std::int64_t t = 0; t < T; ++t) {
      for (std::size_t i = 0; i < d_; ++i) S[i] += g_[static_cast<std::size_t>(t)][i];
    }
    if (set.kind() == FeasibleSet::Kind::Box) {
      // Linear over a box: pick the corner coordinate-wise.
      Vec p(d_);
      for (std::size_t i = 0; i < d_; ++i) {
        p[i] = S[i] > 0.0 ? set.lower()[i] : set.upper()[i];
      }
      return p;
    }
    double n = std::sqrt(dot(S, S));
    Vec p = set.center();
    if (n > 0.0) {
      for (std::size_t i = 0; i < d_; ++i) p[i] -= set.radius() * S[i] / n;
    }
    return p;
  }

 private:
  void reveal_next(const Vec& x) {
    Vec g(d_);
    if (mode_ == AdversarialMode::Iid) {
      std::uniform_real_distribution<double> u(-G_, G_);
      for (std::size_t i = 0; i < d_; ++i) g[i] = u(rng_);
    } else {
      // State-dependent adversary: pushes the iterate away from the center
      // so the projection stays active.
      for (std::size_t i = 0; i < d_; ++i) {
        g[i] = x[i] - center_[i] >= 0.0 ? -G_ : G_;
      }
    }
    g_.push_back(std::move(g));
  }

  std::size_t d_;
  double G_;
  AdversarialMode::Kind mode_;
  Vec center_;
  std::mt19937_64 rng_;
  std::vector<Vec> g_;
};

class QuadraticScStream : public LossStream {
 public:
  QuadraticScStream(double mu, double G, const FeasibleSet& center_box,
                    std::optional<Vec> fixed_center, std::uint64_t seed)
      : mu_(mu), G_(G), center_box_(center_box),
        fixed_center_(std::move(fixed_center)), rng_(seed) {
    if (!(mu > 0.0)) throw std::invalid_argument("mu_sc must be positive");
    if (!(G > 0.0)) throw std::invalid_argument("G must be positive");
    if (fixed_center_ && fixed_center_->size() != center_box_.dim()) {
      throw std::invalid_argument("fixed center dimension mismatch");
    }
  }

  std::size_t dim() const override { return center_box_.dim(); }
  double declared_G() const override { return G_; }
  std::optional<double> mu_sc() const override { return mu_; }
  std::optional<double> smoothness_L() const override { return mu_; }
  std::int64_t revealed() const override { return static_cast<std::int64_t>(c_.size()); }

  Vec subgradient(std::int64_t t, const Vec& x) override {
    reveal_up_to(t);
    check_round(t, revealed());
    const Vec& c = c_[static_cast<std::size_t>(t - 1)];
    Vec g(dim());
    for (std::size_t i = 0; i < dim(); ++i) g[i] = mu_ * (x[i] - c[i]);
    return g;
  }

  double value(std::int64_t t, const Vec& x) const override {
    check_round(t, revealed());
    const Vec& c = c_[static_cast<std::size_t>(t - 1)];
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
    return 0.5 * mu_ * s;
  }

  std::optional<Vec> analytic_comparator(const FeasibleSet& set,
                                         std::int64_t T) const override {
    check_round(T, revealed());
    // Sum of quadratics is minimized at the mean of centers; project it.
    Vec mean(dim(), 0.0);
    for (std::int64_t t = 0; t < T; ++t) {
      for (std::size_t i = 0; i < dim(); ++i) mean[i] += c_[static_cast<std::size_t>(t)][i];
    }
    for (double& m : mean) m /= static_cast<double>(T);
    return project(set, WeightVector(Vec(dim(), 1.0)), mean);
  }

 private:
  void reveal_up_to(std::int64_t t) {
    while (revealed() < t) {
      c_.push_back(fixed_center_ ? *fixed_center_ : draw_uniform_box(rng_, center_box_));
    }
  }

  double mu_;
  double G_;
  FeasibleSet center_box_;
  std::optional<Vec> fixed_center_;
  std::mt19937_64 rng_;
  std::vector<Vec> c_;
};

class PiecewiseLinearStream : public LossStream {
 public:
  PiecewiseLinearStream(Vec weights, const FeasibleSet& anchor_box, std::uint64_t seed)
      : w_(std::move(weights)), anchor_box_(anchor_box), rng_(seed) {
    if (w_.size() != anchor_box_.dim()) throw std::invalid_argument("weights dimension mismatch");
    for (double wi : w_) {
      if (!(wi > 0.0)) throw std::invalid_argument("piecewise weights must be positive");
    }
  }

  std::size_t dim() const override { return w_.size(); }
  double declared_G() const override { return *std::max_element(w_.begin(), w_.end()); }
  std::int64_t revealed() const override { return static_cast<std::int64_t>(a_.size()); }

  Vec subgradient(std::int64_t t, const Vec& x) override {
    while (revealed() < t) a_.push_back(draw_uniform_box(rng_, anchor_box_));
    check_round(t, revealed());
    const Vec& a = a_[static_cast<std::size_t>(t - 1)];
    Vec g(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      // At a kink the subdifferential contains 0; return it.
      const double u = x[i] - a[i];
      g[i] = u > 0.0 ? w_[i] : (u < 0.0 ? -w_[i] : 0.0);
    }
    return g;
  }

  double value(std::int64_t t, const Vec& x) const override {
    check_round(t, revealed());
    const Vec& a = a_[static_cast<std::size_t>(t - 1)];
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) s += w_[i] * std::abs(x[i] - a[i]);
    return s;
  }

  std::optional<Vec> analytic_comparator(const FeasibleSet& set,
                                         std::int64_t T) const override {
    if (set.kind() != FeasibleSet::Kind::Box) return std::nullopt;
    check_round(T, revealed());
    // Separable: per coordinate the minimizer is a median of the anchors.
    Vec p(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      Vec col(static_cast<std::size_t>(T));
      for (std::int64_t t = 0; t < T; ++t) col[static_cast<std::size_t>(t)] = a_[static_cast<std::size_t>(t)][i];
      std::sort(col.begin(), col.end());
      const double med = col[(col.size() - 1) / 2];
      p[i] = std::clamp(med, set.lower()[i], set.upper()[i]);
    }
    return p;
  }

 private:
  Vec w_;
  FeasibleSet anchor_box_;
  std::mt19937_64 rng_;
  std::vector<Vec> a_;
};

}  // namespace

std::unique_ptr<LossStream> make_adversarial_linear(std::size_t d, double G,
                                                    AdversarialMode::Kind mode,
                                                    Vec center, std::uint64_t seed) {
  return std::make_unique<AdversarialLinearStream>(d, G, mode, std::move(center), seed);
}

std::unique_ptr<LossStream> make_quadratic_sc(double mu, double G,
                                              const FeasibleSet& center_box,
                                              std::optional<Vec> fixed_center,
                                              std::uint64_t seed) {
  return std::make_unique<QuadraticScStream>(mu, G, center_box, std::move(fixed_center), seed);
}

std::unique_ptr<LossStream> make_piecewise_linear(Vec weights,
                                                  const FeasibleSet& anchor_box,
                                                  std::uint64_t seed) {
  return std::make_unique<PiecewiseLinearStream>(std::move(weights), anchor_box, seed);
}

StochasticSmoothStream::StochasticSmoothStream(Vec anchors, double sigma,
                                               std::uint64_t seed)
    : anchors_(std::move(anchors)), sigma_(sigma), rng_(seed) {
  if (anchors_.empty()) throw std::invalid_argument("anchors must be nonempty");
  if (!(sigma_ >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
}

void StochasticSmoothStream::reveal_up_to(std::int64_t t) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (revealed() < t) {
    Vec xi(dim());
    for (double& v : xi) v = u(rng_);
    xi_.push_back(std::move(xi));
  }
}

Vec StochasticSmoothStream::subgradient(std::int64_t t, const Vec& x) {
  reveal_up_to(t);
  check_round(t, revealed());
  const Vec& xi = xi_[static_cast<std::size_t>(t - 1)];
  Vec g(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    g[i] = std::tanh(x[i] - anchors_[i]) + sigma_ * xi[i];
  }
  return g;
}

double StochasticSmoothStream::value(std::int64_t t, const Vec& x) const {
  check_round(t, revealed());
  const Vec& xi = xi_[static_cast<std::size_t>(t - 1)];
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    s += std::log(std::cosh(x[i] - anchors_[i])) + sigma_ * xi[i] * x[i];
  }
  return s;
}

Vec StochasticSmoothStream::true_gradient(const Vec& x) const {
  Vec g(dim());
  for (std::size_t i = 0; i < dim(); ++i) g[i] = std::tanh(x[i] - anchors_[i]);
  return g;
}

double StochasticSmoothStream::expected_value(const Vec& x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) s += std::log(std::cosh(x[i] - anchors_[i]));
  return s;
}

double total_loss(const LossStream& stream, std::int64_t T, const Vec& x) {
  double s = 0.0;
  for (std::int64_t t = 1; t <= T; ++t) s += stream.value(t, x);
  return s;
}

namespace {

// Nelder-Mead over the set; infeasible trial points are clamped by projection.
Vec nelder_mead_polish(const LossStream& stream, const FeasibleSet& set,
                       std::int64_t T, Vec x0, double scale) {
  const std::size_t d = set.dim();
  const WeightVector unit(Vec(d, 1.0));
  auto F = [&](const Vec& p) { return total_loss(stream, T, project(set, unit, p)); };

  std::vector<Vec> simplex(d + 1, x0);
  for (std::size_t i = 0; i < d; ++i) simplex[i + 1][i] += scale;
  std::vector<double> fv(d + 1);
  for (std::size_t i = 0; i <= d; ++i) fv[i] = F(simplex[i]);

  for (int it = 0; it < 200 * static_cast<int>(d); ++it) {
    std::vector<std::size_t> order(d + 1);
    for (std::size_t i = 0; i <= d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    const std::size_t best = order[0], worst = order[d], second = order[d - 1];
    if (fv[worst] - fv[best] < 1e-14 * (1.0 + std::abs(fv[best]))) break;

    Vec centroid(d, 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i][k];
    }
    for (double& c : centroid) c /= static_cast<double>(d);

    auto blend = [&](double coef) {
      Vec p(d);
      for (std::size_t k = 0; k < d; ++k) {
        p[k] = centroid[k] + coef * (centroid[k] - simplex[worst][k]);
      }
      return p;
    };

    Vec refl = blend(1.0);
    double frefl = F(refl);
    if (frefl < fv[best]) {
      Vec exp_ = blend(2.0);
      double fexp = F(exp_);
      if (fexp < frefl) { simplex[worst] = exp_; fv[worst] = fexp; }
      else { simplex[worst] = refl; fv[worst] = frefl; }
    } else if (frefl < fv[second]) {
      simplex[worst] = refl; fv[worst] = frefl;
    } else {
      Vec contr = blend(0.5);
      double fcontr = F(contr);
      if (fcontr < fv[worst]) { simplex[worst] = contr; fv[worst] = fcontr; }
      else {
        for (std::size_t i = 0; i <= d; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < d; ++k) {
            simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
          }
          fv[i] = F(simplex[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= d; ++i) {
    if (fv[i] < fv[best]) best = i;
  }
  return project(set, unit, simplex[best]);
}

}  // namespace

std::pair<Vec, double> best_comparator(const LossStream& stream,
                                       const FeasibleSet& set, std::int64_t T,
                                       double grid_resolution) {
  if (T < 1) throw std::invalid_argument("comparator needs T >= 1");
  if (auto p = stream.analytic_comparator(set, T)) {
    return {*p, total_loss(stream, T, *p)};
  }

  // Grid fallback. Only tractable for small dimension at the declared
  // resolution; refuse otherwise instead of silently coarsening.
  const std::size_t d = set.dim();
  if (set.kind() != FeasibleSet::Kind::Box) {
    throw std::invalid_argument("grid comparator fallback supports boxes only");
  }
  double cells = 1.0;
  std::vector<std::int64_t> n(d);
  for (std::size_t i = 0; i < d; ++i) {
    n[i] = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil((set.upper()[i] - set.lower()[i]) / grid_resolution)));
    cells *= static_cast<double>(n[i] + 1);
  }
  if (cells > 5e7) {
    throw std::invalid_argument("grid comparator fallback infeasible at this dimension/resolution");
  }

  Vec best_x;
  double best_f = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> idx(d, 0);
  while (true) {
    Vec p(d);
    for (std::size_t i = 0; i < d; ++i) {
      p[i] = n[i] == 0 ? set.lower()[i]
                       : set.lower()[i] + (set.upper()[i] - set.lower()[i]) *
                                              static_cast<double>(idx[i]) / static_cast<double>(n[i]);
    }
    const double f = total_loss(stream, T, p);
    if (f < best_f) { best_f = f; best_x = p; }
    std::size_t k = 0;
    while (k < d && ++idx[k] > n[k]) { idx[k] = 0; ++k; }
    if (k == d) break;
  }

  Vec polished = nelder_mead_polish(stream, set, T, best_x, grid_resolution);
  const double fp = total_loss(stream, T, polished);
  if (fp < best_f) return {polished, fp};
  return {best_x, best_f};
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void csv_field(std::ostream& os, const std::string& s, bool last) {
  // RFC-4180 quoting; numeric fields never need it but keep the writer honest.
  if (s.find_first_of(",\"\n") != std::string::npos) {
    os << '"';
    for (char c : s) {
      if (c == '"') os << '"';
      os << c;
    }
    os << '"';
  } else {
    os << s;
  }
  os << (last ? "\n" : ",");
}

}  // namespace

void write_trace_csv(std::ostream& os, const TraceRecord& trace,
                     const Vec& cum_regret, const Vec& bound_prefix,
                     bool include_gradients) {
  const std::int64_t T = trace.T();
  if (static_cast<std::int64_t>(cum_regret.size()) != T ||
      static_cast<std::int64_t>(bound_prefix.size()) != T) {
    throw std::invalid_argument("csv column length mismatch");
  }
  os << "t,loss,cum_regret,bound_prefix";
  if (include_gradients) {
    for (std::size_t i = 0; i < trace.d; ++i) os << ",g" << i;
  }
  os << "\n";
  for (std::int64_t t = 0; t < T; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    csv_field(os, std::to_string(t + 1), false);
    csv_field(os, fmt_double(trace.loss[ti]), false);
    csv_field(os, fmt_double(cum_regret[ti]), false);
    csv_field(os, fmt_double(bound_prefix[ti]), !include_gradients);
    if (include_gradients) {
      for (std::size_t i = 0; i < trace.d; ++i) {
        csv_field(os, fmt_double(trace.g[ti][i]), i + 1 == trace.d);
      }
    }
  }
}

}  // namespace adamreg
