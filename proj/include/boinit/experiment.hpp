#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "boinit/engine.hpp"
#include "boinit/initialization.hpp"
#include "boinit/objectives.hpp"
#include "boinit/stats.hpp"

namespace boinit {

enum class ObjectiveKind { synthetic, external };

/// Declarative objective entry of an experiment config. instantiate() builds a
/// fresh evaluator per run, so external endpoints are never shared.
struct ObjectiveDefinition {
  std::string id;
  ObjectiveKind kind = ObjectiveKind::synthetic;
  SyntheticSpec synthetic;
  std::optional<SearchSpace> space;
  Orientation orientation = Orientation::maximize;
  int folds = 0;  // 0 disables the CV wrapper
  double noise_scale = 0.0;
  std::uint64_t fold_seed = 0;
  std::string command;
  std::chrono::milliseconds timeout{60000};

  std::unique_ptr<Objective> instantiate(const std::string& run_id) const;
};

/// A family of arms: one InitStrategy per (count, lambda) combination.
struct ArmDefinition {
  std::string strategy;  // uniform | truncated_gaussian | default
  std::vector<int> counts;
  std::vector<double> lambdas;
  int budget = 30;
  std::vector<std::string> objectives;  // empty: every objective

  std::vector<InitStrategy> expand() const;
};

/// inclusive: the budget counts every evaluation. additive: the budget counts
/// BO iterations after the initial design.
enum class BudgetMode { inclusive, additive };

struct ExperimentConfig {
  std::vector<ObjectiveDefinition> objectives;
  std::vector<ArmDefinition> arms;
  int repetitions = 10;
  std::uint64_t base_seed = 0;
  BudgetMode budget_mode = BudgetMode::inclusive;
  Thresholds thresholds;
  bool tau_metric_from_spread = false;
  std::filesystem::path output_dir = "results";
  /// EI candidates per search dimension.
  std::size_t candidates_per_dimension = 1000;
  EngineOptions engine;
};

/// Relative paths inside the document (search-space files) resolve against
/// `base_dir`. Throws ConfigError naming the offending entry.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct RunPlan {
  std::string run_id;
  std::size_t objective_index = 0;
  InitStrategy strategy;
  int budget = 0;
  int total = 0;
  int repetition = 0;
  std::uint64_t seed = 0;
};

/// Every (objective x arm x repetition) cell, sorted by run id, duplicates removed.
std::vector<RunPlan> plan_runs(const ExperimentConfig& config);

Trace execute_run(const ExperimentConfig& config, const RunPlan& plan);

struct RunFailure {
  std::string run_id;
  std::string message;
};

struct ExecutionResult {
  std::vector<Trace> traces;  // ordered as the plan
  std::vector<RunFailure> failures;
};

/// Runs the plan on `jobs` worker threads. `on_trace` is invoked (serialized)
/// for each finished run. A failing run does not stop the others.
ExecutionResult execute_plan(const ExperimentConfig& config, const std::vector<RunPlan>& plan,
                             int jobs, const std::function<void(const Trace&)>& on_trace = {});

}  // namespace boinit
