#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "boinit/engine.hpp"
#include "boinit/stats.hpp"

namespace boinit {

/// Aggregated means of the two arms of one comparison cell.
struct PairedCell {
  std::string objective_id;
  int initial_count = 0;  // n0 of the random arm
  int budget = 0;
  double mu_conv_default = 0.0;
  double mu_conv_random = 0.0;
  double mu_metric_default = 0.0;
  double mu_metric_random = 0.0;
  int runs_default = 0;
  int runs_random = 0;
  double delta_conv = 0.0;
  double delta_metric = 0.0;
  Outcome conv = Outcome::tie;
  Outcome metric = Outcome::tie;
};

struct ComparisonRow {
  std::string label;     // e.g. "S vs. R Convergence"
  std::string arm;       // "S" or "D"
  std::string quantity;  // "conv" or "metric"
  BinomialResult result;
};

struct ComparisonReport {
  Thresholds thresholds;
  std::vector<ComparisonRow> rows;
  std::vector<PairedCell> sample_cells;
  std::vector<PairedCell> default_cells;
  std::map<std::string, double> spreads;  // per objective
  std::vector<std::string> warnings;
};

/// Pairs Sample (truncated Gaussian, pooled over lambda) and Default arms with
/// uniform arms of equal objective and budget, classifies each cell and runs
/// the four binomial tests. With `tau_metric_from_spread`, tau_metric becomes
/// the smallest per-objective spread.
ComparisonReport compare_traces(std::span<const Trace> traces, Thresholds thresholds,
                                bool tau_metric_from_spread = false);

/// Per-iteration mean running best of every arm, keyed by arm label.
std::map<std::string, std::vector<double>> arm_curves(std::span<const Trace> traces);

struct SensitivityResult {
  std::string objective_id;
  SensitivityReport report;
  /// Mean min-max normalised running best per iteration, keyed by lambda.
  std::map<double, std::vector<double>> curves;
};

/// Sweeps truncated-Gaussian runs per objective (all objectives when
/// `objective` is empty). Throws std::invalid_argument when fewer than three
/// distinct lambdas are available.
std::vector<SensitivityResult> sensitivity_from_traces(std::span<const Trace> traces, double split,
                                                       const std::string& objective = {});

enum class ReportFormat { text, delimited, structured };

ReportFormat parse_report_format(const std::string& name);

std::string format_comparison(const ComparisonReport& report, ReportFormat format);
std::string format_sensitivity(const std::vector<SensitivityResult>& results, ReportFormat format);
std::string format_curves(const std::map<std::string, std::vector<double>>& curves);
std::string format_sensitivity_curves(const SensitivityResult& result);

}  // namespace boinit
