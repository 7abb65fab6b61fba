// Reference evaluator for the line protocol. By default it answers with the
// first configuration value; other modes misbehave on purpose.
//
//   echo_evaluator [first|quadratic|nan|sleep|garbage|crash]

#include <chrono>
#include <cmath>
#include <iostream>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "first";
  std::string line;
  while (std::getline(std::cin, line)) {
    const auto req = nlohmann::ordered_json::parse(line, nullptr, false);
    if (req.is_discarded()) return 3;
    nlohmann::ordered_json resp;
    resp["index"] = req.value("index", -1);

    double first = 0.0;
    double sq = 0.0;
    bool seen = false;
    for (const auto& [name, v] : req["config"].items()) {
      const double x = v.get<double>();
      if (!seen) first = x;
      seen = true;
      sq += (x - 0.3) * (x - 0.3);
    }

    if (mode == "nan") {
      resp["value"] = "nan";
    } else if (mode == "sleep") {
      std::this_thread::sleep_for(std::chrono::seconds(30));
      resp["value"] = first;
    } else if (mode == "garbage") {
      std::cout << "this is not json" << std::endl;
      continue;
    } else if (mode == "crash") {
      return 1;
    } else if (mode == "quadratic") {
      resp["value"] = sq;
    } else {
      resp["value"] = first;
    }
    std::cout << resp.dump() << std::endl;
  }
  return 0;
}
