#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "report.hpp"

namespace gevrey_kit {

struct RunConfig {
  std::string command;
  std::optional<std::string> problem_path;
  std::optional<std::string> builtin;
  std::vector<std::complex<double>> eps;
  std::vector<std::complex<double>> z;
  std::optional<int> K;
  std::optional<int> Kz;
  std::optional<int> I;
  double theta = 0.0;
  std::optional<double> gamma;
  double E = 0.2;
  std::optional<std::string> norms_path;
  std::string out;
  std::string format = "json";
  std::string precision = "double";
  bool timestamp = false;
};

struct Outcome {
  json report;               // {"meta", "verdict", "data"}
  std::vector<Csv> tables;   // CSV rendering; the first is the main table
  int exit_code = kOk;
};

/// "0.1", "-2e-3", "0.1+0.02i", "0.3-1i"
std::complex<double> parse_complex(const std::string& text);
std::vector<std::complex<double>> parse_list(const std::string& text);

json meta_block(const RunConfig& cfg);
Outcome run_command(const RunConfig& cfg);

/// Structured error report for failures raised while running a command.
json error_report(const RunConfig& cfg, const std::exception& e);

}  // namespace gevrey_kit
