#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "adamreg/bounds.hpp"
#include "adamreg/optimizer.hpp"
#include "adamreg/streams.hpp"

namespace adamreg {

struct SetSpec {
  std::string kind;  // "box" or "ball"
  Vec lower, upper;  // box
  Vec center;        // ball
  double radius = 0.0;

  FeasibleSet build() const;
};

struct StreamSpec {
  std::string kind;  // adversarial_linear | quadratic_sc | piecewise_linear | smooth_stochastic
  std::size_t d = 0;
  double G = 1.0;
  std::string mode = "iid";  // adversarial_linear: "iid" or "sign_flip"
  Vec center;                // adversarial_linear sign-flip pivot
  double mu_sc = 0.0;        // quadratic_sc
  std::optional<Vec> fixed_center;
  Vec weights;               // piecewise_linear
  Vec anchors;               // smooth_stochastic
  double sigma = 0.0;

  std::size_t dim() const;
};

struct ScheduleSpec {
  std::string kind = "constant";  // constant | exp_decay | harmonic | piecewise
  double beta1 = 0.9;
  double lambda = 1.0;
  std::vector<double> values;

  Beta1Schedule build() const;
  std::string label() const;
};

struct OutputSpec {
  std::string trace_csv;
  std::string summary_json;
  bool include_gradients = false;
};

struct ExperimentConfig {
  int schema_version = 1;
  std::string algorithm;  // amsgrad | adamnc | sadam | zo_adamm | amsgrad_unconstrained
  std::int64_t T = 0;
  std::uint64_t seed = 0;
  AdamHyper hyper;
  ScheduleSpec beta1_schedule;
  std::optional<SetSpec> feasible_set;
  std::optional<Vec> x1;
  StreamSpec stream;
  double mu_smooth = 1e-2;  // zo_adamm sampling radius
  OutputSpec output;

  std::size_t dim() const;
  // Schema checks plus the theorem precondition cross-checks; throws
  // invalid_argument / precondition_error with the violated clause.
  void validate() const;
};

ExperimentConfig parse_config(const std::string& json_text);
std::string serialize_config(const ExperimentConfig& cfg);

// Standalone optimizer construction (no stream), for stepping an optimizer
// against externally supplied gradients.
struct OptimizerSpec {
  std::string algorithm;
  AdamHyper hyper;
  ScheduleSpec beta1_schedule;
  std::optional<SetSpec> feasible_set;
  Vec x1;
};

OptimizerSpec parse_optimizer_spec(const std::string& json_text);
Optimizer build_optimizer(const OptimizerSpec& spec);

struct RunResult {
  TraceRecord trace;
  RegretLedger ledger;
  BoundReport bound;
  Vec cum_regret;    // constrained: prefix regret vs the full-horizon comparator;
                     // unconstrained: running mean of ||grad f||^2
  Vec bound_prefix;
  std::string summary_json;
  std::string trace_csv;
};

// Executes the configured run; writes output files when paths are set.
RunResult run_experiment(const ExperimentConfig& cfg);

struct VerifyResult {
  int status = 0;  // 0 all pass, 1 oracle failure, 2 unknown suite / bad config
  std::string report_json;
};

VerifyResult run_verify(const std::string& suite);

struct CompareResult {
  std::string report_json;
  std::string plot_csv;  // t, then one cumulative-regret column per schedule
};

// Same stream and seed under each schedule; schedules run concurrently.
CompareResult compare_schedules(const ExperimentConfig& cfg,
                                const std::vector<ScheduleSpec>& schedules);

// Deterministic seed splitting for the stream / optimizer / estimator
// sub-streams of a single run.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace adamreg
