#include "boinit/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "boinit/analysis.hpp"
#include "boinit/errors.hpp"
#include "boinit/experiment.hpp"
#include "boinit/trace_io.hpp"

namespace boinit::cli {
namespace {

namespace fs = std::filesystem;

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

const char* extension(ReportFormat f) {
  switch (f) {
    case ReportFormat::text: return ".txt";
    case ReportFormat::delimited: return ".csv";
    case ReportFormat::structured: return ".json";
  }
  return ".txt";
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << content;
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string output;
};

struct CompareArgs {
  std::string dir;
  double tau_conv = Thresholds{}.tau_conv;
  double tau_metric = Thresholds{}.tau_metric;
  bool tau_from_spread = false;
  std::string format = "text";
};

struct SensitivityArgs {
  std::string dir;
  double split = 0.5;
  std::string objective;
  std::string format = "text";
};

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig config = load_experiment_config(args.config);
  if (args.seed) config.base_seed = *args.seed;
  if (auto dir = env("BOINIT_OUTPUT_DIR")) config.output_dir = *dir;
  if (!args.output.empty()) config.output_dir = args.output;

  int jobs = 1;
  if (auto j = env("BOINIT_JOBS")) {
    try {
      jobs = std::stoi(*j);
    } catch (const std::exception&) {
      throw ConfigError("BOINIT_JOBS must be an integer, got '" + *j + "'");
    }
  }
  if (args.jobs) jobs = *args.jobs;
  if (jobs < 1) throw ConfigError("jobs must be at least 1");

  const auto plan = plan_runs(config);
  fs::create_directories(config.output_dir);

  const auto result = execute_plan(config, plan, jobs, [&](const Trace& t) {
    write_trace(config.output_dir / trace_file_name(t.meta.run_id), t);
  });

  nlohmann::ordered_json manifest;
  manifest["config"] = fs::absolute(args.config).string();
  manifest["base_seed"] = config.base_seed;
  manifest["planned"] = plan.size();
  manifest["completed"] = nlohmann::ordered_json::array();
  for (const auto& t : result.traces) manifest["completed"].push_back(t.meta.run_id);
  manifest["failed"] = nlohmann::ordered_json::array();
  for (const auto& f : result.failures) manifest["failed"].push_back({{"run", f.run_id}, {"error", f.message}});
  write_file(config.output_dir / "manifest.json", manifest.dump(2) + "\n");

  out << result.traces.size() << " of " << plan.size() << " runs completed; traces in "
      << config.output_dir.string() << '\n';
  if (!result.failures.empty()) {
    for (const auto& f : result.failures) err << "run " << f.run_id << " failed: " << f.message << '\n';
    return kExitRunFailure;
  }
  return kExitOk;
}

int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
  const ReportFormat format = parse_report_format(args.format);
  const auto traces = read_trace_directory(args.dir);
  if (traces.empty()) {
    err << "no trace files in " << args.dir << '\n';
    return kExitRunFailure;
  }
  const auto report = compare_traces(traces, {args.tau_conv, args.tau_metric}, args.tau_from_spread);
  const std::string text = format_comparison(report, format);
  write_file(fs::path(args.dir) / (std::string("comparison") + extension(format)), text);
  write_file(fs::path(args.dir) / "curves.csv", format_curves(arm_curves(traces)));
  out << text;
  if (format != ReportFormat::text)
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  return kExitOk;
}

int cmd_sensitivity(const SensitivityArgs& args, std::ostream& out, std::ostream&) {
  const ReportFormat format = parse_report_format(args.format);
  const auto traces = read_trace_directory(args.dir);
  const auto results = sensitivity_from_traces(traces, args.split, args.objective);
  const std::string text = format_sensitivity(results, format);
  write_file(fs::path(args.dir) / (std::string("sensitivity") + extension(format)), text);
  for (const auto& r : results)
    write_file(fs::path(args.dir) / ("sensitivity_curves_" + r.objective_id + ".csv"), format_sensitivity_curves(r));
  out << text;
  return kExitOk;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian optimization initialization experiments"};
  app.name("boinit");
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Execute every run of an experiment config and write trace files");
  run->add_option("-c,--config", run_args.config, "Experiment config (JSON)")->required();
  run->add_option("--seed", run_args.seed, "Override the base seed");
  run->add_option("-j,--jobs", run_args.jobs, "Worker threads (default 1, or BOINIT_JOBS)");
  run->add_option("-o,--output", run_args.output, "Output directory (overrides config and BOINIT_OUTPUT_DIR)");

  CompareArgs cmp_args;
  auto* cmp = app.add_subcommand("compare", "Paired sign tests of Sample/Default arms against Random");
  cmp->add_option("-d,--dir", cmp_args.dir, "Directory of trace files")->required();
  cmp->add_option("--tau-conv", cmp_args.tau_conv, "Relative tie band for the convergence index");
  cmp->add_option("--tau-metric", cmp_args.tau_metric, "Tie band for the best metric");
  cmp->add_flag("--tau-from-spread", cmp_args.tau_from_spread, "Use the smallest per-objective spread as tau_metric");
  cmp->add_option("--format", cmp_args.format, "text, delimited or structured")
      ->check(CLI::IsMember({"text", "delimited", "structured", "csv", "json"}));

  SensitivityArgs sens_args;
  auto* sens = app.add_subcommand("sensitivity", "Correlate lambda with performance metrics");
  sens->add_option("-d,--dir", sens_args.dir, "Directory of trace files")->required();
  sens->add_option("--split", sens_args.split, "Early window fraction")->check(CLI::Range(0.0, 1.0));
  sens->add_option("--objective", sens_args.objective, "Restrict to one objective id");
  sens->add_option("--format", sens_args.format, "text, delimited or structured")
      ->check(CLI::IsMember({"text", "delimited", "structured", "csv", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(run_args, out, err);
    if (cmp->parsed()) return cmd_compare(cmp_args, out, err);
    return cmd_sensitivity(sens_args, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitRunFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRunFailure;
  }
}

}  // namespace boinit::cli
