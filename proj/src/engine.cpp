#include "boinit/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "boinit/errors.hpp"

namespace boinit {
namespace {

double evaluate_checked(Objective& objective, const Configuration& x) {
  const double y = objective.evaluate(x);
  if (!std::isfinite(y))
    throw EvaluationError("objective '" + objective.id() + "' returned a non-finite value",
                          describe(objective.space(), x));
  return y;
}

}  // namespace

std::vector<double> Trace::values() const {
  std::vector<double> y;
  y.reserve(evaluations.size());
  for (const auto& e : evaluations) y.push_back(e.value);
  return y;
}

std::vector<double> running_best(std::span<const double> values) {
  std::vector<double> r;
  r.reserve(values.size());
  for (double v : values) r.push_back(r.empty() ? v : std::max(r.back(), v));
  return r;
}

Trace run_bo(Objective& objective, const InitStrategy& strategy, int total, Rng& rng,
             const EngineOptions& options) {
  check_strategy(strategy);
  const int n0 = initial_count(strategy);
  if (total < n0)
    throw ConfigError("budget " + std::to_string(total) + " is smaller than the initial design (" +
                      std::to_string(n0) + ")");
  const SearchSpace& space = objective.space();
  const auto d = static_cast<Eigen::Index>(space.dimension());

  Trace trace;
  trace.meta.objective_id = objective.id();
  trace.meta.strategy_kind = strategy_kind(strategy);
  trace.meta.strategy_tag = strategy_tag(strategy);
  trace.meta.initial_count = n0;
  if (const auto* tg = std::get_if<TruncatedGaussianInit>(&strategy)) trace.meta.lambda = tg->lambda;
  trace.meta.total = total;
  trace.meta.budget = total;
  for (const auto& p : space.parameters()) trace.meta.parameter_names.push_back(p.name);
  trace.evaluations.reserve(static_cast<std::size_t>(total));

  Eigen::MatrixXd inputs(total, d);
  std::vector<double> targets;
  targets.reserve(static_cast<std::size_t>(total));
  const auto record = [&](Configuration x) {
    const double y = evaluate_checked(objective, x);
    inputs.row(static_cast<Eigen::Index>(targets.size())) = to_unit(space, x).transpose();
    targets.push_back(y);
    trace.evaluations.push_back({std::move(x), y});
  };

  for (auto& x : generate_initial(space, strategy, rng)) record(std::move(x));

  while (static_cast<int>(targets.size()) < total) {
    const auto n = static_cast<Eigen::Index>(targets.size());
    const GpModel model = fit(inputs.topRows(n), targets, options.fit);
    const double incumbent = *std::max_element(targets.begin(), targets.end());
    const AcquisitionResult next = maximize_unit(model, incumbent, rng, options.acquisition);
    record(from_unit(space, next.unit.cwiseMax(0.0).cwiseMin(1.0)));
  }

  trace.running_best = running_best(targets);
  return trace;
}

int convergence_index(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("convergence_index: empty trace");
  const std::vector<double> best = running_best(values);
  const double final_best = best.back();
  const double threshold = final_best - std::abs(final_best) * 1e-12 - 1e-15;
  for (std::size_t t = 0; t < best.size(); ++t)
    if (best[t] >= threshold) return static_cast<int>(t) + 1;
  return static_cast<int>(best.size());
}

int convergence_index(const Trace& trace) { return convergence_index(trace.running_best); }

double best_metric(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("best_metric: empty trace");
  return *std::max_element(values.begin(), values.end());
}

double best_metric(const Trace& trace) { return best_metric(trace.values()); }

RunSummary summarize(const Trace& trace) { return {convergence_index(trace), best_metric(trace)}; }

}  // namespace boinit
