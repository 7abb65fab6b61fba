#include "boinit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace boinit {
namespace {

struct ArmKey {
  std::string objective;
  std::string kind;
  int n0 = 0;
  int budget = 0;
  auto operator<=>(const ArmKey&) const = default;
};

struct ArmStats {
  double mu_conv = 0.0;
  double mu_metric = 0.0;
  int runs = 0;
};

ArmStats arm_stats(const std::vector<const Trace*>& runs) {
  ArmStats s;
  for (const Trace* t : runs) {
    s.mu_conv += convergence_index(*t);
    s.mu_metric += best_metric(*t);
  }
  s.runs = static_cast<int>(runs.size());
  s.mu_conv /= s.runs;
  s.mu_metric /= s.runs;
  return s;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string fmt_p(double p) { return p < 1e-3 ? fmt("%.3e", p) : fmt("%.3f", p); }

std::string pad(std::string s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

std::string decision_text(const ComparisonRow& row) {
  const std::string h = row.quantity == "conv" ? "H0_conv" : "H0_metric";
  return (row.result.reject ? "Reject " : "Fail to reject ") + h;
}

nlohmann::ordered_json cell_json(const PairedCell& c) {
  return {{"objective", c.objective_id},     {"n0", c.initial_count},
          {"budget", c.budget},              {"mu_conv_default", c.mu_conv_default},
          {"mu_conv_random", c.mu_conv_random}, {"mu_metric_default", c.mu_metric_default},
          {"mu_metric_random", c.mu_metric_random}, {"runs_default", c.runs_default},
          {"runs_random", c.runs_random},    {"delta_conv", c.delta_conv},
          {"delta_metric", c.delta_metric},  {"conv", to_string(c.conv)},
          {"metric", to_string(c.metric)}};
}

}  // namespace

std::map<std::string, std::vector<double>> arm_curves(std::span<const Trace> traces) {
  std::map<std::string, std::vector<double>> sums;
  std::map<std::string, std::vector<int>> counts;
  for (const auto& t : traces) {
    const std::string label = t.meta.objective_id + "/" + t.meta.strategy_tag + "/T" + std::to_string(t.meta.budget);
    auto& s = sums[label];
    auto& c = counts[label];
    if (s.size() < t.running_best.size()) {
      s.resize(t.running_best.size(), 0.0);
      c.resize(t.running_best.size(), 0);
    }
    for (std::size_t i = 0; i < t.running_best.size(); ++i) {
      s[i] += t.running_best[i];
      ++c[i];
    }
  }
  for (auto& [label, s] : sums)
    for (std::size_t i = 0; i < s.size(); ++i) s[i] /= counts[label][i];
  return sums;
}

ComparisonReport compare_traces(std::span<const Trace> traces, Thresholds thresholds, bool tau_metric_from_spread) {
  ComparisonReport report;

  std::map<ArmKey, std::vector<const Trace*>> arms;
  std::set<std::string> objectives;
  for (const auto& t : traces) {
    arms[{t.meta.objective_id, t.meta.strategy_kind, t.meta.initial_count, t.meta.budget}].push_back(&t);
    objectives.insert(t.meta.objective_id);
  }

  for (const auto& obj : objectives) {
    std::vector<Trace> subset;
    for (const auto& t : traces)
      if (t.meta.objective_id == obj) subset.push_back(t);
    std::vector<std::vector<double>> curves;
    for (auto& [label, curve] : arm_curves(subset)) curves.push_back(curve);
    try {
      report.spreads[obj] = spread(curves);
    } catch (const std::invalid_argument&) {
      report.warnings.push_back("spread undefined for objective '" + obj + "' (non-positive running best)");
    }
  }
  if (tau_metric_from_spread) {
    if (report.spreads.empty()) {
      report.warnings.push_back("no spread available; keeping tau_metric = " + fmt("%g", thresholds.tau_metric));
    } else {
      double lo = std::numeric_limits<double>::infinity();
      for (const auto& [obj, s] : report.spreads) lo = std::min(lo, s);
      thresholds.tau_metric = lo;
    }
  }
  report.thresholds = thresholds;

  const auto make_cell = [&](const ArmKey& def_key, const ArmKey& rnd_key) {
    const ArmStats d = arm_stats(arms.at(def_key));
    const ArmStats r = arm_stats(arms.at(rnd_key));
    PairedCell c;
    c.objective_id = rnd_key.objective;
    c.initial_count = rnd_key.n0;
    c.budget = rnd_key.budget;
    c.mu_conv_default = d.mu_conv;
    c.mu_conv_random = r.mu_conv;
    c.mu_metric_default = d.mu_metric;
    c.mu_metric_random = r.mu_metric;
    c.runs_default = d.runs;
    c.runs_random = r.runs;
    c.delta_conv = delta_conv(r.mu_conv, d.mu_conv);
    c.delta_metric = delta_metric(r.mu_metric, d.mu_metric);
    c.conv = classify(c.delta_conv, thresholds.tau_conv);
    c.metric = classify(c.delta_metric, thresholds.tau_metric);
    return c;
  };

  for (const auto& [key, runs] : arms) {
    if (key.kind == "truncated_gaussian") {
      const ArmKey rnd{key.objective, "uniform", key.n0, key.budget};
      if (!arms.contains(rnd)) {
        report.warnings.push_back("missing uniform arm for sample arm " + key.objective + "/n" +
                                  std::to_string(key.n0) + "/T" + std::to_string(key.budget) + "; cell skipped");
        continue;
      }
      report.sample_cells.push_back(make_cell(key, rnd));
    } else if (key.kind == "default") {
      bool paired = false;
      for (const auto& [other, other_runs] : arms) {
        if (other.kind == "uniform" && other.objective == key.objective && other.budget == key.budget) {
          report.default_cells.push_back(make_cell(key, other));
          paired = true;
        }
      }
      if (!paired)
        report.warnings.push_back("missing uniform arm for default arm " + key.objective + "/T" +
                                  std::to_string(key.budget) + "; cell skipped");
    }
  }

  const auto add_rows = [&](const std::vector<PairedCell>& cells, const std::string& arm, const std::string& name) {
    if (cells.empty()) {
      report.warnings.push_back(name + " vs. Random: no paired cells; comparison skipped");
      return;
    }
    for (const std::string quantity : {"conv", "metric"}) {
      int wins = 0, losses = 0, ties = 0;
      for (const auto& c : cells) {
        const Outcome o = quantity == "conv" ? c.conv : c.metric;
        if (o == Outcome::win) ++wins;
        else if (o == Outcome::loss) ++losses;
        else ++ties;
      }
      const std::string label = arm + " vs. R " + (quantity == "conv" ? "Convergence" : "Metric");
      if (wins + losses == 0) {
        report.warnings.push_back(label + ": every cell tied; comparison skipped");
        continue;
      }
      ComparisonRow row{label, arm, quantity, binomial_test(wins, losses)};
      row.result.ties = ties;
      report.rows.push_back(std::move(row));
    }
  };
  add_rows(report.sample_cells, "S", "Sample");
  add_rows(report.default_cells, "D", "Default");
  return report;
}

std::vector<SensitivityResult> sensitivity_from_traces(std::span<const Trace> traces, double split,
                                                       const std::string& objective) {
  std::map<std::string, std::vector<const Trace*>> by_objective;
  for (const auto& t : traces)
    if (t.meta.strategy_kind == "truncated_gaussian" && (objective.empty() || t.meta.objective_id == objective))
      by_objective[t.meta.objective_id].push_back(&t);
  if (by_objective.empty())
    throw std::invalid_argument(objective.empty() ? "no truncated-Gaussian traces found"
                                                  : "no truncated-Gaussian traces for objective '" + objective + "'");

  std::vector<SensitivityResult> results;
  for (const auto& [obj, runs] : by_objective) {
    std::vector<SweepRun> sweep;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Trace* t : runs) {
      sweep.push_back({t->meta.lambda, t->running_best});
      for (double v : t->running_best) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    SensitivityResult res;
    res.objective_id = obj;
    try {
      res.report = sensitivity_sweep(sweep, split);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("objective '" + obj + "': insufficient lambda coverage (" + e.what() + ")");
    }

    std::map<double, std::vector<double>> sums;
    std::map<double, std::vector<int>> counts;
    for (const auto& run : sweep) {
      auto& s = sums[run.lambda];
      auto& c = counts[run.lambda];
      if (s.size() < run.running_best.size()) {
        s.resize(run.running_best.size(), 0.0);
        c.resize(run.running_best.size(), 0);
      }
      for (std::size_t i = 0; i < run.running_best.size(); ++i) {
        s[i] += hi > lo ? (run.running_best[i] - lo) / (hi - lo) : 0.0;
        ++c[i];
      }
    }
    for (auto& [lambda, s] : sums)
      for (std::size_t i = 0; i < s.size(); ++i) s[i] /= counts[lambda][i];
    res.curves = std::move(sums);
    results.push_back(std::move(res));
  }
  return results;
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "text") return ReportFormat::text;
  if (name == "delimited" || name == "csv") return ReportFormat::delimited;
  if (name == "structured" || name == "json") return ReportFormat::structured;
  throw std::invalid_argument("unknown report format '" + name + "'");
}

std::string format_comparison(const ComparisonReport& report, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::text: {
      out << pad("Comparison", 22, true) << pad("S/D", 5) << pad("R", 5) << pad("Ties", 6) << pad("p-value", 10)
          << "  Decision\n";
      for (const auto& row : report.rows) {
        out << pad(row.label, 22, true) << pad(std::to_string(row.result.wins), 5)
            << pad(std::to_string(row.result.losses), 5) << pad(std::to_string(row.result.ties), 6)
            << pad(fmt_p(row.result.p_value), 10) << "  " << decision_text(row) << '\n';
      }
      out << "\nthresholds: tau_conv=" << fmt("%g", report.thresholds.tau_conv)
          << " tau_metric=" << fmt("%g", report.thresholds.tau_metric) << '\n';
      for (const auto& [obj, s] : report.spreads) out << "spread " << obj << ": " << fmt("%.4f", s) << '\n';
      for (const auto& w : report.warnings) out << "warning: " << w << '\n';
      break;
    }
    case ReportFormat::delimited: {
      out << "comparison,sd_wins,r_wins,ties,n_total,p_value,decision\n";
      for (const auto& row : report.rows)
        out << row.label << ',' << row.result.wins << ',' << row.result.losses << ',' << row.result.ties << ','
            << row.result.n_total << ',' << fmt("%.10g", row.result.p_value) << ',' << decision_text(row) << '\n';
      break;
    }
    case ReportFormat::structured: {
      nlohmann::ordered_json doc;
      doc["thresholds"] = {{"tau_conv", report.thresholds.tau_conv}, {"tau_metric", report.thresholds.tau_metric}};
      doc["rows"] = nlohmann::ordered_json::array();
      for (const auto& row : report.rows)
        doc["rows"].push_back({{"comparison", row.label},
                               {"sd_wins", row.result.wins},
                               {"r_wins", row.result.losses},
                               {"ties", row.result.ties},
                               {"n_total", row.result.n_total},
                               {"p_value", row.result.p_value},
                               {"decision", decision_text(row)}});
      doc["sample_cells"] = nlohmann::ordered_json::array();
      for (const auto& c : report.sample_cells) doc["sample_cells"].push_back(cell_json(c));
      doc["default_cells"] = nlohmann::ordered_json::array();
      for (const auto& c : report.default_cells) doc["default_cells"].push_back(cell_json(c));
      doc["spreads"] = nlohmann::ordered_json::object();
      for (const auto& [obj, s] : report.spreads) doc["spreads"][obj] = s;
      doc["warnings"] = report.warnings;
      out << doc.dump(2) << '\n';
      break;
    }
  }
  return out.str();
}

std::string format_sensitivity(const std::vector<SensitivityResult>& results, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::text:
      for (const auto& res : results) {
        out << "Objective: " << res.objective_id << " (" << res.report.runs << " runs; lambda:";
        for (double l : res.report.lambdas) out << ' ' << fmt("%g", l);
        out << ")\n";
        out << pad("Metric", 20, true) << pad("Pearson r", 11) << pad("p-value", 12) << '\n';
        for (const auto& row : res.report.rows) {
          out << pad(row.metric, 20, true);
          if (row.result) out << pad(fmt("%.3f", row.result->r), 11) << pad(fmt_p(row.result->p_value), 12);
          else out << pad("undefined", 11) << pad("undefined", 12);
          out << '\n';
        }
        out << '\n';
      }
      break;
    case ReportFormat::delimited:
      out << "objective,metric,pearson_r,p_value,runs\n";
      for (const auto& res : results)
        for (const auto& row : res.report.rows) {
          out << res.objective_id << ',' << row.metric << ',';
          if (row.result) out << fmt("%.10g", row.result->r) << ',' << fmt("%.10g", row.result->p_value);
          else out << ",";
          out << ',' << res.report.runs << '\n';
        }
      break;
    case ReportFormat::structured: {
      nlohmann::ordered_json doc = nlohmann::ordered_json::array();
      for (const auto& res : results) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : res.report.rows) {
          nlohmann::ordered_json r{{"metric", row.metric}};
          if (row.result) {
            r["pearson_r"] = row.result->r;
            r["p_value"] = row.result->p_value;
          } else {
            r["pearson_r"] = nullptr;
            r["p_value"] = nullptr;
          }
          rows.push_back(std::move(r));
        }
        doc.push_back({{"objective", res.objective_id},
                       {"runs", res.report.runs},
                       {"lambdas", res.report.lambdas},
                       {"rows", std::move(rows)}});
      }
      out << doc.dump(2) << '\n';
      break;
    }
  }
  return out.str();
}

std::string format_curves(const std::map<std::string, std::vector<double>>& curves) {
  std::ostringstream out;
  out << "arm,iteration,mean_running_best\n";
  for (const auto& [label, curve] : curves)
    for (std::size_t i = 0; i < curve.size(); ++i) out << label << ',' << i + 1 << ',' << fmt("%.10g", curve[i]) << '\n';
  return out.str();
}

std::string format_sensitivity_curves(const SensitivityResult& result) {
  std::ostringstream out;
  out << "objective,lambda,iteration,normalized_running_best\n";
  for (const auto& [lambda, curve] : result.curves)
    for (std::size_t i = 0; i < curve.size(); ++i)
      out << result.objective_id << ',' << fmt("%g", lambda) << ',' << i + 1 << ',' << fmt("%.10g", curve[i]) << '\n';
  return out.str();
}

}  // namespace boinit
