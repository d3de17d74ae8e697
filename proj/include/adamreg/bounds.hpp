#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "adamreg/optimizer.hpp"
#include "adamreg/streams.hpp"

namespace adamreg {

// Thrown when a theorem's stated precondition is violated (distinct from
// plain argument errors so the CLI can report the exact clause).
class precondition_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundTerm {
  std::string name;
  double value = 0.0;
};

struct BoundReport {
  std::string theorem;
  double value = 0.0;
  std::vector<BoundTerm> terms;
  std::map<std::string, double> inputs;
};

struct OracleVerdict {
  std::string oracle;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool pass = false;
};

struct Tolerances {
  double identity_abs = 1e-10;
  double inequality_rel = 1e-9;
  double inequality_abs = 1e-12;
};

bool inequality_passes(double lhs, double rhs, const Tolerances& tol);

// ---- Theorem bound evaluators ----------------------------------------------
// Each returns the displayed bound with a per-term breakdown; the value is the
// exact sum of the terms. D comes from the feasible set and G from the
// observed trace maximum, never from user declarations.

BoundReport amsgrad_bound(const TraceRecord& trace, const AdamHyper& hyper,
                          double beta1, double D);
BoundReport amsgrad_bound_cor(const TraceRecord& trace, const AdamHyper& hyper,
                              double beta1, double D, double G);
BoundReport adamnc_bound(const TraceRecord& trace, const AdamHyper& hyper,
                         double beta1, double D);
BoundReport sadam_bound(const TraceRecord& trace, const AdamHyper& hyper,
                        double beta1, double D, double G, double mu_sc);
// The main text carries coefficient 2 on the log term; the appendix
// restatement carries 1. The conservative main-text form is the default.
BoundReport nonconvex_bound(const AdamHyper& hyper, double beta1, double f_gap,
                            double G, double L, std::size_t d, std::int64_t T,
                            bool appendix_log_coefficient = false);
BoundReport zo_bound(const TraceRecord& trace, const AdamHyper& hyper,
                     double beta1, double D);

// Incremental prefix evaluation of a theorem bound along a run (O(d) per
// step), used for the bound_prefix CSV column.
class BoundPrefixEvaluator {
 public:
  enum class Theorem { AmsGrad, Corollary1, AdamNC, SAdam, Nonconvex, Zo };

  BoundPrefixEvaluator(Theorem which, std::size_t d, const AdamHyper& hyper,
                       double beta1, double D, double mu_sc = 0.0,
                       double f_gap = 0.0, double L = 0.0);

  // Feed g_t, get the bound evaluated on the length-t prefix.
  double push(const Vec& g);

 private:
  Theorem which_;
  AdamHyper hyper_;
  double beta1_, D_, mu_sc_, f_gap_, L_;
  std::int64_t t_ = 0;
  double G_obs_ = 0.0;
  Vec v_, v_hat_, sq_sum_, sq_comp_, abs_sum_;
};

// ---- Lemma and inequality oracles ------------------------------------------

OracleVerdict check_decomposition(const Vec& m_prev, const Vec& g,
                                  const Vec& x_prev, const Vec& x_cur,
                                  const Vec& x_ref, double beta1,
                                  const Tolerances& tol = {});

// A_seq and m_seq are indexed 0..T (A_0, m_0 included); g_seq is g_1..g_T.
OracleVerdict check_general_decomposition(const std::vector<Vec>& A_seq,
                                          const std::vector<Vec>& m_seq,
                                          const std::vector<Vec>& g_seq,
                                          double beta1,
                                          const Tolerances& tol = {});

OracleVerdict check_generalized_holder(const Vec& x, const Vec& y, const Vec& z,
                                       double p, double q, double r,
                                       const Tolerances& tol = {});

enum class LemmaAlgorithm { AmsGrad, AdamNC, SAdam, NonconvexAmsGrad };

std::vector<OracleVerdict> check_mt_bounds(const TraceRecord& trace,
                                           const AdamHyper& hyper, double beta1,
                                           LemmaAlgorithm alg,
                                           const Tolerances& tol = {});

OracleVerdict check_sum_bounds(const TraceRecord& trace, const AdamHyper& hyper,
                               double beta1, LemmaAlgorithm alg,
                               const Tolerances& tol = {});

std::vector<OracleVerdict> check_sequence_inequalities(const Vec& a, double epsilon,
                                                       const Tolerances& tol = {});

// Verifies the summed decomposition identity for a non-increasing beta1_t
// schedule recorded in the trace.
OracleVerdict check_flexible_beta_identity(const TraceRecord& trace, const Vec& x_ref,
                                           const Tolerances& tol = {});

}  // namespace adamreg
