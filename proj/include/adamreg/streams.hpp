#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <random>

#include "adamreg/geometry.hpp"

namespace adamreg {

// Per-step log of a run. Everything the bound evaluators and lemma oracles
// consume is a function of this record plus the hyperparameters.
struct TraceRecord {
  std::size_t d = 0;
  std::vector<Vec> x;   // decision x_t
  std::vector<Vec> g;   // subgradient (or ZO estimate) observed at x_t
  Vec alpha_t;
  Vec beta1_t;
  Vec loss;             // f_t(x_t)
  Vec v_second_final;   // v_hat_T (AMSGrad/SAdam) or v_T (AdamNC)

  std::int64_t T() const { return static_cast<std::int64_t>(g.size()); }
  void append(Vec xt, Vec gt, double at, double b1t, double ft);
};

struct RegretLedger {
  double algorithm_loss = 0.0;
  Vec comparator;
  double comparator_loss = 0.0;

  double regret() const { return algorithm_loss - comparator_loss; }
};

// A sequence of loss oracles f_t with value and subgradient access. Rounds
// are revealed in order; once round t is revealed, f_t is fixed and may be
// evaluated at any point (comparator search relies on this).
class LossStream {
 public:
  virtual ~LossStream() = default;

  virtual std::size_t dim() const = 0;
  virtual double declared_G() const = 0;
  virtual std::optional<double> mu_sc() const { return std::nullopt; }
  virtual std::optional<double> smoothness_L() const { return std::nullopt; }

  // Reveals round t if it is the next one (adversaries may look at x), then
  // returns a subgradient of f_t at x with infinity norm <= declared_G().
  virtual Vec subgradient(std::int64_t t, const Vec& x) = 0;

  // f_t(x); requires round t revealed.
  virtual double value(std::int64_t t, const Vec& x) const = 0;

  virtual std::int64_t revealed() const = 0;

  // Exact hindsight minimizer of sum_{t<=T} f_t over `set`, when the family
  // admits one in closed form.
  virtual std::optional<Vec> analytic_comparator(const FeasibleSet& set,
                                                 std::int64_t T) const {
    return std::nullopt;
  }
};

struct AdversarialMode {
  enum Kind { Iid, SignFlip };
};

std::unique_ptr<LossStream> make_adversarial_linear(std::size_t d, double G,
                                                    AdversarialMode::Kind mode,
                                                    Vec center, std::uint64_t seed);

// f_t(x) = (mu/2) ||x - c_t||^2 with centers drawn uniformly from
// center_box (or all equal to fixed_center when given).
std::unique_ptr<LossStream> make_quadratic_sc(double mu, double G,
                                              const FeasibleSet& center_box,
                                              std::optional<Vec> fixed_center,
                                              std::uint64_t seed);

// f_t(x) = sum_i w_i |x_i - a_{t,i}| with anchors uniform in anchor_box.
std::unique_ptr<LossStream> make_piecewise_linear(Vec weights,
                                                  const FeasibleSet& anchor_box,
                                                  std::uint64_t seed);

// Smooth separable test function with optional linear noise:
// f_t(x) = sum_i log cosh(x_i - a_i) + sigma <xi_t, x>, xi_t ~ U[-1,1]^d.
// The expected objective is sum_i log cosh(x_i - a_i): 1-smooth, minimum 0
// at x = a, true gradient tanh(x - a).
class StochasticSmoothStream : public LossStream {
 public:
  StochasticSmoothStream(Vec anchors, double sigma, std::uint64_t seed);

  std::size_t dim() const override { return anchors_.size(); }
  double declared_G() const override { return 1.0 + sigma_; }
  std::optional<double> smoothness_L() const override { return 1.0; }
  Vec subgradient(std::int64_t t, const Vec& x) override;
  double value(std::int64_t t, const Vec& x) const override;
  std::int64_t revealed() const override { return static_cast<std::int64_t>(xi_.size()); }

  Vec true_gradient(const Vec& x) const;
  double expected_value(const Vec& x) const;
  const Vec& minimizer() const { return anchors_; }

 private:
  void reveal_up_to(std::int64_t t);

  Vec anchors_;
  double sigma_;
  std::mt19937_64 rng_;
  std::vector<Vec> xi_;
};

// argmin and min of sum_{t<=T} f_t over `set`: exact for analytic families,
// otherwise grid search plus a Nelder-Mead polish (small dimensions only).
std::pair<Vec, double> best_comparator(const LossStream& stream,
                                       const FeasibleSet& set, std::int64_t T,
                                       double grid_resolution = 1e-3);

double total_loss(const LossStream& stream, std::int64_t T, const Vec& x);

// CSV export: t, loss, cum_regret, bound_prefix [, g_0..g_{d-1}].
void write_trace_csv(std::ostream& os, const TraceRecord& trace,
                     const Vec& cum_regret, const Vec& bound_prefix,
                     bool include_gradients);

double max_abs_gradient(const TraceRecord& trace);

}  // namespace adamreg
