#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "boinit/acquisition.hpp"
#include "boinit/initialization.hpp"
#include "boinit/objectives.hpp"
#include "boinit/rng.hpp"
#include "boinit/surrogate.hpp"

namespace boinit {

struct Evaluation {
  Configuration config;
  double value = 0.0;
};

/// Identity of a run within an experiment.
struct TraceMeta {
  std::string run_id;
  std::string objective_id;
  std::string strategy_kind;  // uniform | truncated_gaussian | default
  std::string strategy_tag;
  int initial_count = 0;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  int budget = 0;  // nominal budget used to pair arms
  int total = 0;   // evaluations actually performed
  int repetition = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> parameter_names;
};

/// Every evaluation of one BO run in order, plus r(t) = max_{s<=t} y_s.
struct Trace {
  TraceMeta meta;
  std::vector<Evaluation> evaluations;
  std::vector<double> running_best;

  std::size_t size() const noexcept { return evaluations.size(); }
  std::vector<double> values() const;
};

struct RunSummary {
  int convergence_index = 1;
  double best_metric = 0.0;
};

struct EngineOptions {
  FitPolicy fit;
  AcquisitionOptions acquisition;
};

std::vector<double> running_best(std::span<const double> values);

/// Executes the BO loop until `total` evaluations exist: evaluate the initial
/// design, then repeatedly refit the GP on all data, maximize EI and evaluate
/// the chosen point. Throws ConfigError when total < initial_count(strategy);
/// objective failures propagate unchanged.
Trace run_bo(Objective& objective, const InitStrategy& strategy, int total, Rng& rng,
             const EngineOptions& options = {});

/// First 1-based iteration whose running best reaches the final running best
/// (relative tolerance 1e-12, absolute 1e-15). Accepts objective values or
/// an already-accumulated running best.
int convergence_index(std::span<const double> values);
int convergence_index(const Trace& trace);

double best_metric(std::span<const double> values);
double best_metric(const Trace& trace);

RunSummary summarize(const Trace& trace);

}  // namespace boinit
