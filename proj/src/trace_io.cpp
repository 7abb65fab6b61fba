#include "boinit/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "boinit/errors.hpp"

namespace boinit {

std::string trace_file_name(const std::string& run_id) { return run_id + ".jsonl"; }

nlohmann::ordered_json trace_record(const Trace& trace, std::size_t index) {
  const auto& m = trace.meta;
  const auto& e = trace.evaluations.at(index);
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < e.config.size(); ++i) {
    const std::string name = i < m.parameter_names.size() ? m.parameter_names[i] : "x" + std::to_string(i + 1);
    config[name] = e.config[i];
  }
  nlohmann::ordered_json rec;
  rec["run"] = m.run_id;
  rec["objective"] = m.objective_id;
  rec["strategy"] = m.strategy_kind;
  rec["tag"] = m.strategy_tag;
  rec["n0"] = m.initial_count;
  rec["lambda"] = std::isnan(m.lambda) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(m.lambda);
  rec["budget"] = m.budget;
  rec["total"] = m.total;
  rec["rep"] = m.repetition;
  rec["seed"] = m.seed;
  rec["iter"] = index + 1;
  rec["config"] = std::move(config);
  rec["y"] = e.value;
  rec["best"] = trace.running_best.at(index);
  return rec;
}

std::string trace_to_string(const Trace& trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += trace_record(trace, i).dump();
    out += '\n';
  }
  return out;
}

void write_trace(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write trace file " + path.string());
  out << trace_to_string(trace);
  if (!out) throw Error("failed writing trace file " + path.string());
}

Trace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open trace file " + path.string());
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto where = path.string() + ":" + std::to_string(line_no);
    try {
      const auto rec = nlohmann::ordered_json::parse(line);
      const auto iter = rec.at("iter").get<std::size_t>();
      if (iter != trace.evaluations.size() + 1) throw ConfigError(where + ": iterations out of order");
      const auto& config = rec.at("config");
      if (trace.evaluations.empty()) {
        auto& m = trace.meta;
        m.run_id = rec.at("run").get<std::string>();
        m.objective_id = rec.at("objective").get<std::string>();
        m.strategy_kind = rec.at("strategy").get<std::string>();
        m.strategy_tag = rec.at("tag").get<std::string>();
        m.initial_count = rec.at("n0").get<int>();
        m.lambda = rec.at("lambda").is_null() ? std::nan("") : rec.at("lambda").get<double>();
        m.budget = rec.at("budget").get<int>();
        m.total = rec.at("total").get<int>();
        m.repetition = rec.at("rep").get<int>();
        m.seed = rec.at("seed").get<std::uint64_t>();
        for (const auto& item : config.items()) m.parameter_names.push_back(item.key());
      } else if (rec.at("run").get<std::string>() != trace.meta.run_id) {
        throw ConfigError(where + ": mixed run ids in one file");
      }
      Evaluation e;
      for (const auto& item : config.items()) e.config.values.push_back(item.value().get<double>());
      if (e.config.size() != trace.meta.parameter_names.size()) throw ConfigError(where + ": configuration width changed");
      e.value = rec.at("y").get<double>();
      values.push_back(e.value);
      trace.evaluations.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw ConfigError(where + ": " + ex.what());
    }
  }
  if (trace.evaluations.empty()) throw ConfigError(path.string() + ": empty trace file");
  trace.running_best = running_best(values);
  return trace;
}

std::vector<Trace> read_trace_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("trace directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<Trace> traces;
  traces.reserve(files.size());
  for (const auto& f : files) traces.push_back(read_trace(f));
  std::sort(traces.begin(), traces.end(),
            [](const Trace& a, const Trace& b) { return a.meta.run_id < b.meta.run_id; });
  return traces;
}

}  // namespace boinit
