#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "adamreg.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CLI::ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const char* content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CLI::ValidationError("cannot write " + path);
  f << content;
}

int report_error(ar_status st) {
  std::cerr << "error";
  if (st == AR_ERR_PRECONDITION) std::cerr << " (precondition)";
  std::cerr << ": " << ar_last_error() << "\n";
  return st == AR_ERR_INVALID_ARGUMENT || st == AR_ERR_PRECONDITION ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive online optimizers with regret-bound auditing"};
  app.require_subcommand(1);

  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "Execute a configured experiment");
  run->add_option("--config", run_config, "Experiment config JSON path")
      ->required()
      ->check(CLI::ExistingFile);

  std::string suite = "all";
  CLI::App* verify = app.add_subcommand("verify", "Run oracle suites");
  verify->add_option("suite", suite, "Suite name (default: all)");

  std::string cmp_config, cmp_schedules, cmp_report, cmp_csv;
  CLI::App* compare = app.add_subcommand("compare", "Compare beta1 schedules on one stream");
  compare->add_option("--config", cmp_config, "Experiment config JSON path")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("--schedules", cmp_schedules, "JSON array of schedule specs")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("--out-report", cmp_report, "Write the comparison report here");
  compare->add_option("--out-csv", cmp_csv, "Write the per-step regret CSV here");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    char* summary = nullptr;
    const ar_status st = ar_run_experiment(read_file(run_config).c_str(), &summary);
    if (st != AR_OK) return report_error(st);
    std::cout << summary << "\n";
    ar_string_free(summary);
    return 0;
  }

  if (verify->parsed()) {
    char* report = nullptr;
    int exit_status = 0;
    const ar_status st = ar_verify(suite.c_str(), &exit_status, &report);
    if (st != AR_OK) return report_error(st);
    std::cout << report << "\n";
    ar_string_free(report);
    return exit_status;
  }

  char* report = nullptr;
  char* plot = nullptr;
  const ar_status st = ar_compare_schedules(read_file(cmp_config).c_str(),
                                            read_file(cmp_schedules).c_str(),
                                            &report, &plot);
  if (st != AR_OK) return report_error(st);
  std::cout << report << "\n";
  if (!cmp_report.empty()) write_file(cmp_report, report);
  if (!cmp_csv.empty()) write_file(cmp_csv, plot);
  ar_string_free(report);
  ar_string_free(plot);
  return 0;
}
