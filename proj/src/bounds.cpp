#include "adamreg/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace adamreg {

bool inequality_passes(double lhs, double rhs, const Tolerances& tol) {
  return rhs - lhs >= -(tol.inequality_rel * std::abs(rhs) + tol.inequality_abs);
}

namespace {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void require_constant_beta1(double beta1) {
  if (!(beta1 >= 0.0 && beta1 < 1.0)) {
    throw std::invalid_argument("beta1 must lie in [0, 1)");
  }
}

double require_gamma(double beta1, double beta2) {
  const double gamma = gamma_of(beta1, beta2);
  if (!(gamma < 1.0)) {
    throw precondition_error("requires gamma = beta1^2/beta2 < 1");
  }
  return gamma;
}

// Per-coordinate sum of squared gradients over the trace, compensated.
Vec squared_sums(const TraceRecord& trace) {
  Vec sum(trace.d, 0.0), comp(trace.d, 0.0);
  for (const Vec& g : trace.g) {
    for (std::size_t i = 0; i < trace.d; ++i) {
      const double y = g[i] * g[i] - comp[i];
      const double t = sum[i] + y;
      comp[i] = (t - sum[i]) - y;
      sum[i] = t;
    }
  }
  return sum;
}

Vec abs_sums(const TraceRecord& trace) {
  Vec sum(trace.d, 0.0);
  for (const Vec& g : trace.g) {
    for (std::size_t i = 0; i < trace.d; ++i) sum[i] += std::abs(g[i]);
  }
  return sum;
}

// Final AMSGrad v_hat recomputed from the gradient trace.
Vec amsgrad_v_hat_final(const TraceRecord& trace, const AdamHyper& hyper) {
  Vec v(trace.d, 0.0), v_hat(trace.d, hyper.epsilon);
  for (const Vec& g : trace.g) {
    for (std::size_t i = 0; i < trace.d; ++i) {
      v[i] = hyper.beta2 * v[i] + (1.0 - hyper.beta2) * g[i] * g[i];
      v_hat[i] = std::max(v_hat[i], v[i]);
    }
  }
  return v_hat;
}

BoundReport finish(BoundReport r) {
  r.value = 0.0;
  for (const BoundTerm& t : r.terms) r.value += t.value;
  return r;
}

BoundReport sqrtT_style_bound(const char* tag, const TraceRecord& trace,
                              const AdamHyper& hyper, double beta1, double D,
                              const Vec& second_moment_final) {
  require_constant_beta1(beta1);
  const double gamma = require_gamma(beta1, hyper.beta2);
  if (!(hyper.epsilon > 0.0)) throw precondition_error("requires epsilon > 0");
  const auto T = trace.T();

  BoundReport r;
  r.theorem = tag;
  r.inputs = {{"D", D},          {"alpha", hyper.alpha}, {"beta1", beta1},
              {"beta2", hyper.beta2}, {"epsilon", hyper.epsilon},
              {"gamma", gamma},  {"T", static_cast<double>(T)},
              {"d", static_cast<double>(trace.d)}};
  if (T == 0) return r;

  double vhat_sum = 0.0;
  for (double v : second_moment_final) vhat_sum += std::sqrt(v);
  const double Td = static_cast<double>(T);
  r.terms.push_back({"diameter_term",
                     D * D * std::sqrt(Td) / (2.0 * hyper.alpha * (1.0 - beta1)) * vhat_sum});

  const Vec sq = squared_sums(trace);
  double grad_sum = 0.0;
  for (double s : sq) grad_sum += std::sqrt(s);
  r.terms.push_back({"gradient_term",
                     hyper.alpha * std::sqrt(1.0 + std::log(Td)) /
                         std::sqrt((1.0 - hyper.beta2) * (1.0 - gamma)) * grad_sum});
  return finish(r);
}

}  // namespace

BoundReport amsgrad_bound(const TraceRecord& trace, const AdamHyper& hyper,
                          double beta1, double D) {
  return sqrtT_style_bound("theorem1", trace, hyper, beta1, D,
                           amsgrad_v_hat_final(trace, hyper));
}

BoundReport zo_bound(const TraceRecord& trace, const AdamHyper& hyper,
                     double beta1, double D) {
  // Same form as the max-tracked bound, evaluated on the estimated-gradient
  // trace (the per-trace, pre-expectation guarantee).
  return sqrtT_style_bound("proposition1", trace, hyper, beta1, D,
                           amsgrad_v_hat_final(trace, hyper));
}

BoundReport amsgrad_bound_cor(const TraceRecord& trace, const AdamHyper& hyper,
                              double beta1, double D, double G) {
  require_constant_beta1(beta1);
  const double gamma = require_gamma(beta1, hyper.beta2);
  if (!(hyper.epsilon > 0.0)) throw precondition_error("requires epsilon > 0");
  const auto T = trace.T();

  BoundReport r;
  r.theorem = "corollary1";
  r.inputs = {{"D", D},          {"G", G},           {"alpha", hyper.alpha},
              {"beta1", beta1},  {"beta2", hyper.beta2}, {"epsilon", hyper.epsilon},
              {"gamma", gamma},  {"T", static_cast<double>(T)},
              {"d", static_cast<double>(trace.d)}};
  if (T == 0) return r;

  const Vec v_hat = amsgrad_v_hat_final(trace, hyper);
  double vhat_sum = 0.0;
  for (double v : v_hat) vhat_sum += std::sqrt(v);
  const double Td = static_cast<double>(T);
  r.terms.push_back({"diameter_term",
                     D * D * std::sqrt(Td) / (2.0 * hyper.alpha * (1.0 - beta1)) * vhat_sum});

  const Vec asum = abs_sums(trace);
  double grad_sum = 0.0;
  for (double s : asum) grad_sum += std::sqrt(s);
  // Note: the denominator carries (1 - gamma) unrooted here.
  r.terms.push_back({"gradient_term",
                     hyper.alpha * std::sqrt(G) /
                         (std::sqrt(1.0 - hyper.beta2) * (1.0 - gamma)) * grad_sum});
  return finish(r);
}

BoundReport adamnc_bound(const TraceRecord& trace, const AdamHyper& hyper,
                         double beta1, double D) {
  require_constant_beta1(beta1);
  if (!(hyper.epsilon > 0.0)) throw precondition_error("requires epsilon > 0");
  const auto T = trace.T();

  BoundReport r;
  r.theorem = "theorem2";
  r.inputs = {{"D", D},         {"alpha", hyper.alpha},
              {"beta1", beta1}, {"epsilon", hyper.epsilon},
              {"T", static_cast<double>(T)}, {"d", static_cast<double>(trace.d)}};
  if (T == 0) return r;

  const Vec sq = squared_sums(trace);
  const double Td = static_cast<double>(T);
  double vT_sum = 0.0, grad_sum = 0.0;
  for (double s : sq) {
    vT_sum += std::sqrt((s + hyper.epsilon) / Td);
    grad_sum += std::sqrt(s);
  }
  r.terms.push_back({"diameter_term",
                     D * D * std::sqrt(Td) / (2.0 * hyper.alpha * (1.0 - beta1)) * vT_sum});
  r.terms.push_back({"gradient_term", 2.0 * hyper.alpha / (1.0 - beta1) * grad_sum});
  return finish(r);
}

BoundReport sadam_bound(const TraceRecord& trace, const AdamHyper& hyper,
                        double beta1, double D, double G, double mu_sc) {
  require_constant_beta1(beta1);
  if (!(hyper.epsilon > 0.0)) throw precondition_error("requires epsilon > 0");
  if (!(mu_sc > 0.0)) throw std::invalid_argument("mu_sc must be positive");
  if (hyper.alpha < G * G / mu_sc) {
    throw precondition_error("requires alpha >= G^2/mu = " +
                             std::to_string(G * G / mu_sc) + ", got " +
                             std::to_string(hyper.alpha));
  }
  const auto T = trace.T();

  BoundReport r;
  r.theorem = "theorem3";
  r.inputs = {{"D", D},         {"G", G},
              {"alpha", hyper.alpha}, {"beta1", beta1},
              {"epsilon", hyper.epsilon}, {"mu_sc", mu_sc},
              {"T", static_cast<double>(T)}, {"d", static_cast<double>(trace.d)}};
  if (T == 0) return r;

  r.terms.push_back({"momentum_term",
                     beta1 * static_cast<double>(trace.d) * G * D / (1.0 - beta1)});
  const Vec sq = squared_sums(trace);
  double log_sum = 0.0;
  for (double s : sq) log_sum += std::log(s / hyper.epsilon + 1.0);
  r.terms.push_back({"log_term", hyper.alpha / (1.0 - beta1) * log_sum});
  return finish(r);
}

BoundReport nonconvex_bound(const AdamHyper& hyper, double beta1, double f_gap,
                            double G, double L, std::size_t d, std::int64_t T,
                            bool appendix_log_coefficient) {
  require_constant_beta1(beta1);
  const double gamma = require_gamma(beta1, hyper.beta2);
  if (!(hyper.epsilon > 0.0)) {
    throw precondition_error("requires epsilon > 0 (v_hat_0^{-1/2} undefined)");
  }
  if (!(L > 0.0)) throw std::invalid_argument("L must be positive");

  BoundReport r;
  r.theorem = "theorem4";
  r.inputs = {{"alpha", hyper.alpha}, {"beta1", beta1}, {"beta2", hyper.beta2},
              {"epsilon", hyper.epsilon}, {"gamma", gamma},
              {"G", G}, {"L", L}, {"f_gap", f_gap},
              {"T", static_cast<double>(T)}, {"d", static_cast<double>(d)},
              {"log_coefficient", appendix_log_coefficient ? 1.0 : 2.0}};
  if (T == 0) return r;

  const double Td = static_cast<double>(T);
  const double inv_sqrtT = 1.0 / std::sqrt(Td);
  const double dd = static_cast<double>(d);
  const double v0_inv_l1 = dd / std::sqrt(hyper.epsilon);  // ||v_hat_0^{-1/2}||_1
  const double coef = appendix_log_coefficient ? 1.0 : 2.0;

  r.terms.push_back({"initial_gap_term", inv_sqrtT * G / hyper.alpha * f_gap});
  r.terms.push_back({"v0_term", inv_sqrtT * G * G * G / (1.0 - beta1) * v0_inv_l1});
  r.terms.push_back({"curvature_term",
                     inv_sqrtT * G * G * G * dd / (4.0 * L * hyper.alpha * (1.0 - beta1))});
  r.terms.push_back({"log_term",
                     inv_sqrtT * coef * G * L * dd * hyper.alpha * (1.0 - beta1) *
                         (1.0 + std::log(Td)) / ((1.0 - hyper.beta2) * (1.0 - gamma))});
  return finish(r);
}

// ---- Prefix evaluator ------------------------------------------------------

BoundPrefixEvaluator::BoundPrefixEvaluator(Theorem which, std::size_t d,
                                           const AdamHyper& hyper, double beta1,
                                           double D, double mu_sc, double f_gap,
                                           double L)
    : which_(which), hyper_(hyper), beta1_(beta1), D_(D), mu_sc_(mu_sc),
      f_gap_(f_gap), L_(L) {
  require_constant_beta1(beta1);
  v_.assign(d, 0.0);
  v_hat_.assign(d, hyper.epsilon);
  sq_sum_.assign(d, 0.0);
  sq_comp_.assign(d, 0.0);
  abs_sum_.assign(d, 0.0);
}

double BoundPrefixEvaluator::push(const Vec& g) {
  const std::size_t d = v_.size();
  if (g.size() != d) throw std::invalid_argument("prefix evaluator dimension mismatch");
  ++t_;
  for (std::size_t i = 0; i < d; ++i) {
    G_obs_ = std::max(G_obs_, std::abs(g[i]));
    v_[i] = hyper_.beta2 * v_[i] + (1.0 - hyper_.beta2) * g[i] * g[i];
    v_hat_[i] = std::max(v_hat_[i], v_[i]);
    const double y = g[i] * g[i] - sq_comp_[i];
    const double s = sq_sum_[i] + y;
    sq_comp_[i] = (s - sq_sum_[i]) - y;
    sq_sum_[i] = s;
    abs_sum_[i] += std::abs(g[i]);
  }

  const double Td = static_cast<double>(t_);
  const double a = hyper_.alpha;
  const double dd = static_cast<double>(d);
  switch (which_) {
    case Theorem::AmsGrad:
    case Theorem::Zo: {
      const double gamma = gamma_of(beta1_, hyper_.beta2);
      double vhat_sum = 0.0, grad_sum = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        vhat_sum += std::sqrt(v_hat_[i]);
        grad_sum += std::sqrt(sq_sum_[i]);
      }
      return D_ * D_ * std::sqrt(Td) / (2.0 * a * (1.0 - beta1_)) * vhat_sum +
             a * std::sqrt(1.0 + std::log(Td)) /
                 std::sqrt((1.0 - hyper_.beta2) * (1.0 - gamma)) * grad_sum;
    }
    case Theorem::Corollary1: {
      const double gamma = gamma_of(beta1_, hyper_.beta2);
      double vhat_sum = 0.0, grad_sum = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        vhat_sum += std::sqrt(v_hat_[i]);
        grad_sum += std::sqrt(abs_sum_[i]);
      }
      return D_ * D_ * std::sqrt(Td) / (2.0 * a * (1.0 - beta1_)) * vhat_sum +
             a * std::sqrt(G_obs_) / (std::sqrt(1.0 - hyper_.beta2) * (1.0 - gamma)) *
                 grad_sum;
    }
    case Theorem::AdamNC: {
      double vT_sum = 0.0, grad_sum = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        vT_sum += std::sqrt((sq_sum_[i] + hyper_.epsilon) / Td);
        grad_sum += std::sqrt(sq_sum_[i]);
      }
      return D_ * D_ * std::sqrt(Td) / (2.0 * a * (1.0 - beta1_)) * vT_sum +
             2.0 * a / (1.0 - beta1_) * grad_sum;
    }
    case Theorem::SAdam: {
      double log_sum = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        log_sum += std::log(sq_sum_[i] / hyper_.epsilon + 1.0);
      }
      return beta1_ * dd * G_obs_ * D_ / (1.0 - beta1_) +
             a / (1.0 - beta1_) * log_sum;
    }
    case Theorem::Nonconvex: {
      const double gamma = gamma_of(beta1_, hyper_.beta2);
      const double inv_sqrtT = 1.0 / std::sqrt(Td);
      const double G = G_obs_;
      return inv_sqrtT *
             (G / a * f_gap_ + G * G * G / (1.0 - beta1_) * dd / std::sqrt(hyper_.epsilon) +
              G * G * G * dd / (4.0 * L_ * a * (1.0 - beta1_)) +
              2.0 * G * L_ * dd * a * (1.0 - beta1_) * (1.0 + std::log(Td)) /
                  ((1.0 - hyper_.beta2) * (1.0 - gamma)));
    }
  }
  return 0.0;
}

// ---- Oracles ---------------------------------------------------------------

OracleVerdict check_decomposition(const Vec& m_prev, const Vec& g,
                                  const Vec& x_prev, const Vec& x_cur,
                                  const Vec& x_ref, double beta1,
                                  const Tolerances& tol) {
  if (beta1 >= 1.0 || beta1 < 0.0) throw std::invalid_argument("beta1 must lie in [0, 1)");
  const std::size_t d = g.size();
  if (m_prev.size() != d || x_prev.size() != d || x_cur.size() != d || x_ref.size() != d) {
    throw std::invalid_argument("dimension mismatch in check_decomposition");
  }
  Vec m(d), dcur(d), dprev(d), dstep(d);
  for (std::size_t i = 0; i < d; ++i) {
    m[i] = beta1 * m_prev[i] + (1.0 - beta1) * g[i];
    dcur[i] = x_cur[i] - x_ref[i];
    dprev[i] = x_prev[i] - x_ref[i];
    dstep[i] = x_cur[i] - x_prev[i];
  }
  const double lhs = dot(g, dcur);
  const double rhs = dot(m_prev, dprev) -
                     beta1 / (1.0 - beta1) * dot(m_prev, dstep) +
                     1.0 / (1.0 - beta1) * (dot(m, dcur) - dot(m_prev, dprev));
  OracleVerdict v{"lemma1_decomposition", lhs, rhs, rhs - lhs, false};
  v.pass = std::abs(v.margin) <= tol.identity_abs;
  return v;
}

OracleVerdict check_general_decomposition(const std::vector<Vec>& A_seq,
                                          const std::vector<Vec>& m_seq,
                                          const std::vector<Vec>& g_seq,
                                          double beta1, const Tolerances& tol) {
  if (beta1 >= 1.0 || beta1 < 0.0) throw std::invalid_argument("beta1 must lie in [0, 1)");
  const std::size_t T = g_seq.size();
  if (A_seq.size() != T + 1 || m_seq.size() != T + 1) {
    throw std::invalid_argument("sequence length mismatch: need A_0..A_T, m_0..m_T, g_1..g_T");
  }
  double worst = 0.0;
  for (std::size_t t = 1; t <= T; ++t) {
    const double lhs = dot(A_seq[t], g_seq[t - 1]);
    const double rhs =
        1.0 / (1.0 - beta1) * (dot(A_seq[t], m_seq[t]) - dot(A_seq[t - 1], m_seq[t - 1])) +
        dot(A_seq[t - 1], m_seq[t - 1]);
    Vec diff(A_seq[t].size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = A_seq[t - 1][i] - A_seq[t][i];
    const double rhs_full = rhs + beta1 / (1.0 - beta1) * dot(diff, m_seq[t - 1]);
    worst = std::max(worst, std::abs(rhs_full - lhs));
  }
  OracleVerdict v{"general_decomposition", 0.0, 0.0, worst, worst <= tol.identity_abs};
  return v;
}

OracleVerdict check_generalized_holder(const Vec& x, const Vec& y, const Vec& z,
                                       double p, double q, double r,
                                       const Tolerances& tol) {
  const std::size_t n = x.size();
  if (y.size() != n || z.size() != n) {
    throw std::invalid_argument("dimension mismatch in check_generalized_holder");
  }
  if (std::abs(1.0 / p + 1.0 / q + 1.0 / r - 1.0) > 1e-12) {
    throw std::invalid_argument("exponents must satisfy 1/p + 1/q + 1/r = 1");
  }
  auto pnorm = [&](const Vec& v, double e) {
    double s = 0.0;
    for (double vi : v) {
      if (vi < 0.0) throw std::invalid_argument("holder oracle needs nonnegative vectors");
      s += std::pow(vi, e);
    }
    return std::pow(s, 1.0 / e);
  };
  double lhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) lhs += x[i] * y[i] * z[i];
  const double rhs = pnorm(x, p) * pnorm(y, q) * pnorm(z, r);
  OracleVerdict v{"generalized_holder", lhs, rhs, rhs - lhs, false};
  v.pass = inequality_passes(lhs, rhs, tol);
  return v;
}

namespace {

struct MomentSequences {
  std::vector<Vec> m;       // m_1..m_T
  std::vector<Vec> weight;  // the per-t second-moment weight the lemma uses
};

// Recomputes m_t and the algorithm's second-moment weight from the gradient
// trace via the definitional recurrences (exact sums for AdamNC/SAdam).
MomentSequences recompute(const TraceRecord& trace, const AdamHyper& hyper,
                          double beta1, LemmaAlgorithm alg) {
  const std::size_t d = trace.d;
  const auto T = static_cast<std::size_t>(trace.T());
  MomentSequences out;
  out.m.reserve(T);
  out.weight.reserve(T);
  Vec m(d, 0.0), v(d, 0.0), vh(d, hyper.epsilon), sq(d, 0.0), comp(d, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    const Vec& g = trace.g[t];
    const double td = static_cast<double>(t + 1);
    Vec w(d);
    for (std::size_t i = 0; i < d; ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
      const double y = g[i] * g[i] - comp[i];
      const double s = sq[i] + y;
      comp[i] = (s - sq[i]) - y;
      sq[i] = s;
      switch (alg) {
        case LemmaAlgorithm::AmsGrad:
        case LemmaAlgorithm::NonconvexAmsGrad:
          v[i] = hyper.beta2 * v[i] + (1.0 - hyper.beta2) * g[i] * g[i];
          vh[i] = std::max(vh[i], v[i]);
          w[i] = vh[i];
          break;
        case LemmaAlgorithm::AdamNC:
          w[i] = (sq[i] + hyper.epsilon) / td;
          break;
        case LemmaAlgorithm::SAdam:
          w[i] = (sq[i] + hyper.epsilon) / td;
          break;
      }
    }
    out.m.push_back(m);
    out.weight.push_back(std::move(w));
  }
  return out;
}

// ||m||^2 weighted by weight^{-power}, with the 0/0 := 0 convention.
double weighted_msq(const Vec& m, const Vec& w, double power) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (w[i] == 0.0) continue;
    s += m[i] * m[i] / std::pow(w[i], power);
  }
  return s;
}

}  // namespace

std::vector<OracleVerdict> check_mt_bounds(const TraceRecord& trace,
                                           const AdamHyper& hyper, double beta1,
                                           LemmaAlgorithm alg,
                                           const Tolerances& tol) {
  require_constant_beta1(beta1);
  if (alg == LemmaAlgorithm::NonconvexAmsGrad) {
    throw std::invalid_argument("the nonconvex lemma is a sum bound; use check_sum_bounds");
  }
  const std::size_t d = trace.d;
  const auto T = static_cast<std::size_t>(trace.T());
  const MomentSequences seq = recompute(trace, hyper, beta1, alg);

  std::vector<OracleVerdict> out;
  out.reserve(T);
  Vec run(d, 0.0);      // AMSGrad: running sum_j beta1^{t-j} |g_j|
  Vec sq(d, 0.0);       // prefix sum of g^2
  for (std::size_t t = 0; t < T; ++t) {
    const Vec& g = trace.g[t];
    const double td = static_cast<double>(t + 1);
    double lhs = 0.0, rhs = 0.0;
    switch (alg) {
      case LemmaAlgorithm::AmsGrad: {
        const double gamma = require_gamma(beta1, hyper.beta2);
        double run_sum = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          run[i] = beta1 * run[i] + std::abs(g[i]);
          run_sum += run[i];
        }
        lhs = weighted_msq(seq.m[t], seq.weight[t], 0.5);
        rhs = (1.0 - beta1) * (1.0 - beta1) /
              std::sqrt((1.0 - hyper.beta2) * (1.0 - gamma)) * run_sum;
        break;
      }
      case LemmaAlgorithm::AdamNC: {
        double run_sum = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          sq[i] += g[i] * g[i];
          const double term = sq[i] == 0.0 ? 0.0 : g[i] * g[i] / std::sqrt(sq[i]);
          run[i] = beta1 * run[i] + term;
          run_sum += run[i];
        }
        lhs = weighted_msq(seq.m[t], seq.weight[t], 0.5);
        rhs = std::sqrt(td) * (1.0 - beta1) * run_sum;
        break;
      }
      case LemmaAlgorithm::SAdam: {
        double run_sum = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          sq[i] += g[i] * g[i];
          run[i] = beta1 * run[i] + g[i] * g[i] / (sq[i] + hyper.epsilon);
          run_sum += run[i];
        }
        lhs = weighted_msq(seq.m[t], seq.weight[t], 1.0);
        rhs = td * (1.0 - beta1) * run_sum;
        break;
      }
      default:
        break;
    }
    OracleVerdict v{"mt_bound_t" + std::to_string(t + 1), lhs, rhs, rhs - lhs, false};
    v.pass = inequality_passes(lhs, rhs, tol);
    out.push_back(std::move(v));
  }
  return out;
}

OracleVerdict check_sum_bounds(const TraceRecord& trace, const AdamHyper& hyper,
                               double beta1, LemmaAlgorithm alg,
                               const Tolerances& tol) {
  require_constant_beta1(beta1);
  const std::size_t d = trace.d;
  const auto T = static_cast<std::size_t>(trace.T());
  const MomentSequences seq = recompute(trace, hyper, beta1, alg);
  const Vec sq = squared_sums(trace);
  const double Td = static_cast<double>(T);

  double lhs = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    const double td = static_cast<double>(t + 1);
    switch (alg) {
      case LemmaAlgorithm::AmsGrad:
      case LemmaAlgorithm::AdamNC:
        lhs += hyper.alpha / std::sqrt(td) * weighted_msq(seq.m[t], seq.weight[t], 0.5);
        break;
      case LemmaAlgorithm::SAdam:
        lhs += hyper.alpha / td * weighted_msq(seq.m[t], seq.weight[t], 1.0);
        break;
      case LemmaAlgorithm::NonconvexAmsGrad: {
        const double at = hyper.alpha / std::sqrt(td);
        lhs += at * at * weighted_msq(seq.m[t], seq.weight[t], 1.0);
        break;
      }
    }
  }

  double rhs = 0.0;
  std::string name;
  switch (alg) {
    case LemmaAlgorithm::AmsGrad: {
      const double gamma = require_gamma(beta1, hyper.beta2);
      double grad_sum = 0.0;
      for (double s : sq) grad_sum += std::sqrt(s);
      rhs = (1.0 - beta1) * hyper.alpha * std::sqrt(1.0 + std::log(Td)) /
            std::sqrt((1.0 - hyper.beta2) * (1.0 - gamma)) * grad_sum;
      name = "sum_bound_amsgrad";
      break;
    }
    case LemmaAlgorithm::AdamNC: {
      double grad_sum = 0.0;
      for (double s : sq) grad_sum += std::sqrt(s);
      rhs = 2.0 * hyper.alpha * grad_sum;
      name = "sum_bound_adamnc";
      break;
    }
    case LemmaAlgorithm::SAdam: {
      if (!(hyper.epsilon > 0.0)) throw precondition_error("requires epsilon > 0");
      double log_sum = 0.0;
      for (double s : sq) log_sum += std::log(s / hyper.epsilon + 1.0);
      rhs = hyper.alpha * log_sum;
      name = "sum_bound_sadam";
      break;
    }
    case LemmaAlgorithm::NonconvexAmsGrad: {
      const double gamma = require_gamma(beta1, hyper.beta2);
      rhs = static_cast<double>(d) * (1.0 - beta1) * (1.0 - beta1) * hyper.alpha *
            hyper.alpha * (1.0 + std::log(Td)) /
            ((1.0 - hyper.beta2) * (1.0 - gamma));
      name = "sum_bound_nonconvex";
      break;
    }
  }
  OracleVerdict v{name, lhs, rhs, rhs - lhs, false};
  v.pass = T == 0 || inequality_passes(lhs, rhs, tol);
  return v;
}

std::vector<OracleVerdict> check_sequence_inequalities(const Vec& a, double epsilon,
                                                       const Tolerances& tol) {
  for (double ai : a) {
    if (ai < 0.0) throw std::invalid_argument("sequence entries must be nonnegative");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive for the log form");

  double prefix = 0.0, lhs_sqrt = 0.0, lhs_log = 0.0;
  for (double ai : a) {
    prefix += ai;
    if (prefix > 0.0) lhs_sqrt += ai / std::sqrt(prefix);
    lhs_log += ai / (prefix + epsilon);
  }
  const double rhs_sqrt = 2.0 * std::sqrt(prefix);
  const double rhs_log = std::log(prefix / epsilon + 1.0);

  std::vector<OracleVerdict> out;
  OracleVerdict v1{"sequence_sqrt", lhs_sqrt, rhs_sqrt, rhs_sqrt - lhs_sqrt, false};
  v1.pass = v1.margin >= -tol.identity_abs ||
            inequality_passes(lhs_sqrt, rhs_sqrt, tol);
  OracleVerdict v2{"sequence_log", lhs_log, rhs_log, rhs_log - lhs_log, false};
  v2.pass = v2.margin >= -tol.identity_abs ||
            inequality_passes(lhs_log, rhs_log, tol);
  out.push_back(v1);
  out.push_back(v2);
  return out;
}

OracleVerdict check_flexible_beta_identity(const TraceRecord& trace, const Vec& x_ref,
                                           const Tolerances& tol) {
  const std::size_t d = trace.d;
  const auto T = static_cast<std::size_t>(trace.T());
  if (x_ref.size() != d) throw std::invalid_argument("x_ref dimension mismatch");
  for (std::size_t t = 0; t < T; ++t) {
    const double b = trace.beta1_t[t];
    if (!(b >= 0.0 && b < 1.0)) throw std::invalid_argument("beta1_t must lie in [0, 1)");
    if (t > 0 && b > trace.beta1_t[t - 1] + 1e-15) {
      throw std::invalid_argument("beta1 schedule must be non-increasing");
    }
  }

  Vec m(d, 0.0), m_prev(d, 0.0);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    const double b1t = trace.beta1_t[t];
    const Vec& g = trace.g[t];
    const Vec& xt = trace.x[t];
    const Vec& xprev = t == 0 ? trace.x[0] : trace.x[t - 1];
    m_prev = m;
    for (std::size_t i = 0; i < d; ++i) m[i] = b1t * m[i] + (1.0 - b1t) * g[i];

    Vec dt(d), dprev(d), step(d);
    for (std::size_t i = 0; i < d; ++i) {
      dt[i] = xt[i] - x_ref[i];
      dprev[i] = xprev[i] - x_ref[i];
      step[i] = xt[i] - xprev[i];
    }
    lhs += dot(g, dt);
    rhs += dot(m_prev, dprev) +
           1.0 / (1.0 - b1t) * (dot(m, dt) - dot(m_prev, dprev)) -
           b1t / (1.0 - b1t) * dot(m_prev, step);
  }
  OracleVerdict v{"flexible_beta_identity", lhs, rhs, rhs - lhs, false};
  v.pass = std::abs(v.margin) <= tol.identity_abs;
  return v;
}

}  // namespace adamreg
