#include "boinit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "boinit/errors.hpp"

namespace boinit {
namespace {

using nlohmann::json;

bool valid_identifier(const std::string& id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}

std::vector<double> doubles(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(what + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

ObjectiveDefinition parse_objective(const json& j, const std::filesystem::path& base_dir) {
  ObjectiveDefinition def;
  def.id = j.at("id").get<std::string>();
  if (!valid_identifier(def.id))
    throw ConfigError("objective id '" + def.id + "' may only contain letters, digits, '_', '-' and '.'");
  const auto kind = j.value("kind", std::string("synthetic"));
  const auto where = "objective '" + def.id + "'";

  if (j.contains("space")) {
    const auto& s = j.at("space");
    if (s.is_string()) {
      std::filesystem::path path = s.get<std::string>();
      if (path.is_relative()) path = base_dir / path;
      if (!std::filesystem::exists(path))
        throw ConfigError(where + ": search space '" + s.get<std::string>() + "' not found");
      def.space = load_search_space(path);
    } else {
      def.space = parse_search_space(s);
    }
  }
  const auto orientation = j.value("orientation", std::string("maximize"));
  if (orientation == "maximize") def.orientation = Orientation::maximize;
  else if (orientation == "minimize") def.orientation = Orientation::minimize;
  else throw ConfigError(where + ": orientation must be 'maximize' or 'minimize'");

  if (kind == "synthetic") {
    def.kind = ObjectiveKind::synthetic;
    def.synthetic.function = parse_synthetic_function(j.at("function").get<std::string>());
    def.synthetic.optimum = doubles(j.at("optimum"), where + " optimum");
    if (j.contains("default")) def.synthetic.default_location = doubles(j.at("default"), where + " default");
    else if (!def.space) throw ConfigError(where + ": synthetic objective needs 'default' or 'space'");
    def.synthetic.gap = j.value("gap", 0.0);
    if (j.contains("cv")) {
      const auto& cv = j.at("cv");
      def.folds = cv.value("folds", 3);
      def.noise_scale = cv.value("noise", 0.0);
      def.fold_seed = cv.value("seed", std::uint64_t{0});
      if (def.folds < 1) throw ConfigError(where + ": cv folds must be >= 1");
    }
  } else if (kind == "external") {
    def.kind = ObjectiveKind::external;
    def.command = j.at("command").get<std::string>();
    if (!def.space) throw ConfigError(where + ": external objective needs a 'space'");
    def.timeout = std::chrono::milliseconds(j.value("timeout_ms", 60000));
  } else {
    throw ConfigError(where + ": unknown kind '" + kind + "'");
  }
  // Surface landscape errors at load time rather than mid-run.
  if (def.kind == ObjectiveKind::synthetic) (void)def.instantiate("check");
  return def;
}

ArmDefinition parse_arm(const json& j) {
  ArmDefinition arm;
  arm.strategy = j.at("strategy").get<std::string>();
  arm.budget = j.at("budget").get<int>();
  if (arm.strategy == "uniform" || arm.strategy == "truncated_gaussian") {
    const auto& c = j.contains("counts") ? j.at("counts") : j.at("count");
    if (c.is_array()) arm.counts = c.get<std::vector<int>>();
    else arm.counts = {c.get<int>()};
    if (arm.counts.empty()) throw ConfigError(arm.strategy + " arm needs at least one count");
  } else if (arm.strategy != "default") {
    throw ConfigError("unknown strategy '" + arm.strategy + "'");
  }
  if (arm.strategy == "truncated_gaussian") {
    const auto& l = j.contains("lambdas") ? j.at("lambdas") : j.at("lambda");
    if (l.is_string() && l.get<std::string>() == "grid") arm.lambdas = lambda_grid();
    else if (l.is_array()) arm.lambdas = doubles(l, "lambdas");
    else if (l.is_number()) arm.lambdas = {l.get<double>()};
    else throw ConfigError("lambdas must be \"grid\", a number or an array");
  }
  if (j.contains("objectives")) arm.objectives = j.at("objectives").get<std::vector<std::string>>();
  return arm;
}

}  // namespace

std::unique_ptr<Objective> ObjectiveDefinition::instantiate(const std::string& run_id) const {
  if (kind == ObjectiveKind::external)
    return std::make_unique<ExternalObjective>(id, *space, command, run_id, orientation, timeout);
  std::unique_ptr<Objective> obj = space ? std::make_unique<SyntheticObjective>(id, synthetic, *space)
                                         : std::make_unique<SyntheticObjective>(id, synthetic);
  if (orientation == Orientation::minimize) obj = std::make_unique<NegatedObjective>(std::move(obj));
  if (folds > 0) obj = cv_wrap(std::move(obj), folds, noise_scale, fold_seed);
  return obj;
}

std::vector<InitStrategy> ArmDefinition::expand() const {
  std::vector<InitStrategy> out;
  if (strategy == "default") {
    out.emplace_back(DefaultPointInit{});
  } else if (strategy == "uniform") {
    for (int c : counts) out.emplace_back(UniformInit{c});
  } else {
    for (int c : counts)
      for (double l : lambdas) out.emplace_back(TruncatedGaussianInit{c, l});
  }
  for (const auto& s : out) check_strategy(s);
  return out;
}

ExperimentConfig parse_experiment_config(const json& doc, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  try {
    if (!doc.is_object()) throw ConfigError("experiment config must be a JSON object");
    cfg.repetitions = doc.value("repetitions", 10);
    cfg.base_seed = doc.value("base_seed", std::uint64_t{0});
    const auto mode = doc.value("budget_mode", std::string("inclusive"));
    if (mode == "inclusive") cfg.budget_mode = BudgetMode::inclusive;
    else if (mode == "additive") cfg.budget_mode = BudgetMode::additive;
    else throw ConfigError("budget_mode must be 'inclusive' or 'additive'");
    cfg.output_dir = doc.value("output_dir", std::string("results"));
    if (doc.contains("thresholds")) {
      const auto& t = doc.at("thresholds");
      cfg.thresholds.tau_conv = t.value("tau_conv", cfg.thresholds.tau_conv);
      cfg.thresholds.tau_metric = t.value("tau_metric", cfg.thresholds.tau_metric);
      cfg.tau_metric_from_spread = t.value("tau_metric_from_spread", false);
      if (cfg.thresholds.tau_conv < 0.0 || cfg.thresholds.tau_metric < 0.0)
        throw ConfigError("thresholds must be >= 0");
    }
    if (doc.contains("acquisition")) {
      const auto& a = doc.at("acquisition");
      cfg.candidates_per_dimension = a.value("candidates_per_dimension", cfg.candidates_per_dimension);
      cfg.engine.acquisition.starts = a.value("starts", cfg.engine.acquisition.starts);
      cfg.engine.acquisition.refine_iterations = a.value("refine_iterations", cfg.engine.acquisition.refine_iterations);
    }
    if (cfg.repetitions < 1) throw ConfigError("repetitions must be >= 1");

    std::set<std::string> ids;
    for (const auto& o : doc.at("objectives")) {
      cfg.objectives.push_back(parse_objective(o, base_dir));
      if (!ids.insert(cfg.objectives.back().id).second)
        throw ConfigError("duplicate objective id '" + cfg.objectives.back().id + "'");
    }
    if (cfg.objectives.empty()) throw ConfigError("no objectives configured");
    for (const auto& a : doc.at("arms")) cfg.arms.push_back(parse_arm(a));
    if (cfg.arms.empty()) throw ConfigError("no arms configured");

    for (const auto& arm : cfg.arms) {
      for (const auto& id : arm.objectives)
        if (!ids.contains(id)) throw ConfigError("unknown objective id '" + id + "'");
      for (const auto& s : arm.expand()) {
        if (cfg.budget_mode == BudgetMode::inclusive && arm.budget < initial_count(s))
          throw ConfigError("arm '" + strategy_tag(s) + "' has budget " + std::to_string(arm.budget) +
                            " below its initial design");
        if (arm.budget < 1) throw ConfigError("budgets must be >= 1");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_experiment_config(doc, path.parent_path());
}

std::vector<RunPlan> plan_runs(const ExperimentConfig& config) {
  std::vector<RunPlan> plan;
  for (std::size_t oi = 0; oi < config.objectives.size(); ++oi) {
    const auto& objective = config.objectives[oi];
    for (const auto& arm : config.arms) {
      if (!arm.objectives.empty() &&
          std::find(arm.objectives.begin(), arm.objectives.end(), objective.id) == arm.objectives.end())
        continue;
      for (const auto& strategy : arm.expand()) {
        const std::string tag = strategy_tag(strategy);
        const std::string cell = tag + "__T" + std::to_string(arm.budget);
        for (int rep = 0; rep < config.repetitions; ++rep) {
          char rep_buf[16];
          std::snprintf(rep_buf, sizeof rep_buf, "r%02d", rep);
          RunPlan p;
          p.run_id = objective.id + "__" + cell + "__" + rep_buf;
          p.objective_index = oi;
          p.strategy = strategy;
          p.budget = arm.budget;
          p.total = config.budget_mode == BudgetMode::inclusive ? arm.budget : arm.budget + initial_count(strategy);
          p.repetition = rep;
          p.seed = derive_seed(config.base_seed, objective.id, cell, static_cast<std::uint64_t>(rep));
          plan.push_back(std::move(p));
        }
      }
    }
  }
  std::sort(plan.begin(), plan.end(), [](const RunPlan& a, const RunPlan& b) { return a.run_id < b.run_id; });
  plan.erase(std::unique(plan.begin(), plan.end(),
                         [](const RunPlan& a, const RunPlan& b) { return a.run_id == b.run_id; }),
             plan.end());
  return plan;
}

Trace execute_run(const ExperimentConfig& config, const RunPlan& plan) {
  const auto& def = config.objectives.at(plan.objective_index);
  auto objective = def.instantiate(plan.run_id);
  EngineOptions options = config.engine;
  options.acquisition.candidates = config.candidates_per_dimension * objective->space().dimension();
  Rng rng(plan.seed);
  Trace trace = run_bo(*objective, plan.strategy, plan.total, rng, options);
  trace.meta.run_id = plan.run_id;
  trace.meta.budget = plan.budget;
  trace.meta.repetition = plan.repetition;
  trace.meta.seed = plan.seed;
  return trace;
}

ExecutionResult execute_plan(const ExperimentConfig& config, const std::vector<RunPlan>& plan, int jobs,
                             const std::function<void(const Trace&)>& on_trace) {
  std::vector<std::optional<Trace>> done(plan.size());
  std::vector<std::optional<std::string>> errors(plan.size());
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;

  const auto worker = [&] {
    for (std::size_t i = next++; i < plan.size(); i = next++) {
      try {
        Trace t = execute_run(config, plan[i]);
        if (on_trace) {
          std::lock_guard lock(callback_mutex);
          on_trace(t);
        }
        done[i] = std::move(t);
      } catch (const EvaluationError& e) {
        errors[i] = std::string(e.what()) + " at " + e.configuration();
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };

  const int threads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(plan.size(), 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  ExecutionResult result;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (done[i]) result.traces.push_back(std::move(*done[i]));
    else result.failures.push_back({plan[i].run_id, errors[i].value_or("unknown failure")});
  }
  return result;
}

}  // namespace boinit
