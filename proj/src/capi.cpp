#include "adamreg.h"

#include <cstring>
#include <string>

#include "adamreg/experiment.hpp"
#include "json.hpp"

using namespace adamreg;

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
ar_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const precondition_error& e) {
    g_last_error = e.what();
    return AR_ERR_PRECONDITION;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return AR_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AR_ERR_RUNTIME;
  }
}

}  // namespace

struct ar_optimizer {
  Optimizer opt;
};

extern "C" {

ar_status ar_optimizer_create(const char* config_json, ar_optimizer** out) {
  if (!config_json || !out) return AR_ERR_NULL_POINTER;
  return guarded([&] {
    const OptimizerSpec spec = parse_optimizer_spec(config_json);
    *out = new ar_optimizer{build_optimizer(spec)};
    return AR_OK;
  });
}

ar_status ar_optimizer_step(ar_optimizer* opt, const double* g, size_t d) {
  if (!opt || !g) return AR_ERR_NULL_POINTER;
  return guarded([&] {
    opt->opt.step(Vec(g, g + d));
    return AR_OK;
  });
}

ar_status ar_optimizer_state(const ar_optimizer* opt, char** out_json) {
  if (!opt || !out_json) return AR_ERR_NULL_POINTER;
  return guarded([&] {
    nlohmann::json j;
    j["t"] = opt->opt.t();
    j["x"] = opt->opt.x();
    j["m"] = opt->opt.m();
    j["v"] = opt->opt.v();
    j["v_hat"] = opt->opt.v_hat();
    *out_json = dup_string(j.dump(2));
    return AR_OK;
  });
}

void ar_optimizer_destroy(ar_optimizer* opt) { delete opt; }

ar_status ar_run_experiment(const char* config_json, char** out_summary_json) {
  if (!config_json || !out_summary_json) return AR_ERR_NULL_POINTER;
  return guarded([&] {
    const ExperimentConfig cfg = parse_config(config_json);
    RunResult result = run_experiment(cfg);
    *out_summary_json = dup_string(result.summary_json);
    return AR_OK;
  });
}

ar_status ar_verify(const char* suite, int* exit_status, char** out_report_json) {
  if (!suite || !exit_status || !out_report_json) return AR_ERR_NULL_POINTER;
  return guarded([&] {
    const VerifyResult r = run_verify(suite);
    *exit_status = r.status;
    *out_report_json = dup_string(r.report_json);
    return AR_OK;
  });
}

ar_status ar_compare_schedules(const char* config_json, const char* schedules_json,
                               char** out_report_json, char** out_plot_csv) {
  if (!config_json || !schedules_json || !out_report_json || !out_plot_csv) {
    return AR_ERR_NULL_POINTER;
  }
  return guarded([&] {
    const ExperimentConfig cfg = parse_config(config_json);
    nlohmann::json arr;
    try {
      arr = nlohmann::json::parse(schedules_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument(std::string("schedules are not valid JSON: ") + e.what());
    }
    if (!arr.is_array()) throw std::invalid_argument("schedules must be a JSON array");
    std::vector<ScheduleSpec> schedules;
    for (const auto& js : arr) {
      ScheduleSpec s;
      s.kind = js.at("kind").get<std::string>();
      if (js.contains("beta1")) s.beta1 = js.at("beta1").get<double>();
      if (js.contains("lambda")) s.lambda = js.at("lambda").get<double>();
      if (js.contains("values")) s.values = js.at("values").get<Vec>();
      schedules.push_back(std::move(s));
    }
    const CompareResult r = compare_schedules(cfg, schedules);
    *out_report_json = dup_string(r.report_json);
    *out_plot_csv = dup_string(r.plot_csv);
    return AR_OK;
  });
}

const char* ar_last_error(void) { return g_last_error.c_str(); }

void ar_string_free(char* s) { delete[] s; }

}  // extern "C"
