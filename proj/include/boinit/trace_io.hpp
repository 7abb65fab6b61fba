#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "boinit/engine.hpp"

namespace boinit {

// Trace files are JSON Lines, one record per evaluation:
//
//   {"run":"sphere__uniform-n3__T30__r00","objective":"sphere","strategy":"uniform",
//    "tag":"uniform-n3","n0":3,"lambda":null,"budget":30,"total":30,"rep":0,
//    "seed":1234,"iter":1,"config":{"x1":0.25,"x2":0.5},"y":0.91,"best":0.91}
//
// Records are written in iteration order; every record repeats the run
// metadata so a single line is self-describing.

nlohmann::ordered_json trace_record(const Trace& trace, std::size_t index);

void write_trace(const std::filesystem::path& path, const Trace& trace);
std::string trace_to_string(const Trace& trace);

/// Throws ConfigError on malformed records or inconsistent metadata.
Trace read_trace(const std::filesystem::path& path);

/// Every *.jsonl file in `dir`, sorted by run id.
std::vector<Trace> read_trace_directory(const std::filesystem::path& dir);

std::string trace_file_name(const std::string& run_id);

}  // namespace boinit
