#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <vector>

#include "boinit/engine.hpp"
#include "boinit/errors.hpp"
#include "boinit/objectives.hpp"
#include "boinit/rng.hpp"
#include "boinit/trace_io.hpp"
#include "support.hpp"

using namespace boinit;

namespace {

class Constant : public Objective {
 public:
  const std::string& id() const noexcept override { return id_; }
  const SearchSpace& space() const noexcept override { return space_; }
  double evaluate(const Configuration&) override { return 0.25; }

 private:
  std::string id_ = "flat";
  SearchSpace space_ = SearchSpace::unit_cube({0.5, 0.5});
};

class Failing : public Objective {
 public:
  const std::string& id() const noexcept override { return id_; }
  const SearchSpace& space() const noexcept override { return space_; }
  double evaluate(const Configuration& x) override {
    if (++calls_ == 3) throw EvaluationError("boom", describe(space_, x));
    return x[0];
  }

 private:
  std::string id_ = "failing";
  SearchSpace space_ = SearchSpace::unit_cube({0.5});
  int calls_ = 0;
};

EngineOptions fast() {
  EngineOptions o;
  o.acquisition.candidates = 300;
  return o;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("boinit_engine_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("convergence index and best metric by hand") {
  CHECK(convergence_index(std::vector<double>{0.5, 0.7, 0.7, 0.9, 0.9}) == 4);
  CHECK(convergence_index(std::vector<double>{0.1, 0.2, 0.3, 0.4}) == 4);
  CHECK(convergence_index(std::vector<double>{0.9, 0.1, 0.2}) == 1);
  CHECK(best_metric(std::vector<double>{0.5, 0.7, 0.6}) == 0.7);
  CHECK(best_metric(std::vector<double>{-3.0}) == -3.0);
  CHECK(best_metric(std::vector<double>{2.0, 2.0, 2.0}) == 2.0);
  // Differences below the relative tolerance count as reaching the optimum.
  CHECK(convergence_index(std::vector<double>{1.0, 1.0 + 1e-14}) == 1);
}

TEST_CASE("budget equal to the initial design skips BO") {
  auto f = SyntheticObjective("s", {SyntheticFunction::sphere_bowl, {0.3, 0.3}, {0.8, 0.8}, 0.2});
  Rng a(4), b(4);
  const auto trace = run_bo(f, UniformInit{4}, 4, a);
  const auto design = generate_initial(f.space(), UniformInit{4}, b);
  REQUIRE(trace.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(trace.evaluations[i].config == design[i]);
}

TEST_CASE("flat objective converges at iteration one") {
  Constant f;
  Rng rng(1);
  const auto t = run_bo(f, UniformInit{2}, 6, rng, fast());
  CHECK(t.running_best == std::vector<double>(6, 0.25));
  CHECK(convergence_index(t) == 1);
}

TEST_CASE("budget below the initial count is rejected") {
  Constant f;
  Rng rng(1);
  CHECK_THROWS_AS(run_bo(f, UniformInit{5}, 3, rng), ConfigError);
}

TEST_CASE("objective failure propagates with the configuration") {
  Failing f;
  Rng rng(1);
  try {
    run_bo(f, UniformInit{2}, 5, rng, fast());
    FAIL("expected failure");
  } catch (const EvaluationError& e) {
    CHECK(e.configuration().find("x1") != std::string::npos);
  }
}

TEST_CASE("BO on the 1-D quadratic beats random search") {
  oracle::Quadratic f;
  int hits = 0;
  std::vector<double> bo_best, random_best;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(derive_seed(seed, "quadratic", "uniform-n3", 0));
    const auto t = run_bo(f, UniformInit{3}, 20, rng);
    bo_best.push_back(best_metric(t));
    if (best_metric(t) >= -0.01) ++hits;

    Rng rs(1000 + seed);
    double b = -1e300;
    for (int i = 0; i < 20; ++i) b = std::max(b, f.evaluate({{rs.uniform()}}));
    random_best.push_back(b);
  }
  CHECK(hits >= 18);
  std::sort(random_best.begin(), random_best.end());
  const double median = 0.5 * (random_best[9] + random_best[10]);
  for (double b : bo_best) CHECK(b >= median);
}

TEST_CASE("trace invariants and determinism") {
  auto f = SyntheticObjective("tb", {SyntheticFunction::two_basin, {0.8, 0.2}, {0.25, 0.7}, 0.1});
  for (const InitStrategy s : {InitStrategy{UniformInit{3}}, InitStrategy{TruncatedGaussianInit{4, 0.1125}},
                               InitStrategy{DefaultPointInit{}}}) {
    Rng r1(9), r2(9);
    const auto a = run_bo(f, s, 10, r1, fast());
    const auto b = run_bo(f, s, 10, r2, fast());
    CHECK(trace_to_string(a) == trace_to_string(b));
    REQUIRE(a.size() == 10);
    for (std::size_t t = 0; t < a.size(); ++t) {
      const auto y = a.values();
      CHECK(a.running_best[t] == *std::max_element(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(t) + 1));
      if (t > 0) CHECK(a.running_best[t] >= a.running_best[t - 1]);
      CHECK(validate(f.space(), a.evaluations[t].config).empty());
    }
    const int ci = convergence_index(a);
    CHECK(ci >= 1);
    CHECK(ci <= 10);
    CHECK(convergence_index(std::span(a.running_best).first(static_cast<std::size_t>(ci))) == ci);
    CHECK(summarize(a).best_metric == a.running_best.back());
  }
  Rng rng(3);
  const auto d = run_bo(f, DefaultPointInit{}, 4, rng, fast());
  CHECK(d.evaluations[0].config == default_configuration(f.space()));
}

TEST_CASE("trace files round-trip and are byte-stable") {
  auto f = SyntheticObjective("rt", {SyntheticFunction::ridged_multimodal, {0.6, 0.4}, {0.1, 0.1}, 0.3});
  Rng rng(21);
  auto t = run_bo(f, TruncatedGaussianInit{3, 0.05}, 6, rng, fast());
  t.meta.run_id = "rt__tg-n3-l0.05__T6__r00";
  t.meta.repetition = 0;
  t.meta.seed = 21;
  const auto dir = scratch("roundtrip");
  const auto path = dir / trace_file_name(t.meta.run_id);
  write_trace(path, t);
  const auto back = read_trace(path);
  CHECK(back.meta.run_id == t.meta.run_id);
  CHECK(back.meta.lambda == 0.05);
  CHECK(back.values() == t.values());
  CHECK(back.running_best == t.running_best);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(back.evaluations[i].config == t.evaluations[i].config);
  CHECK(trace_to_string(back) == trace_to_string(t));

  std::ofstream(dir / "broken.jsonl") << "{\"run\": 3}\n";
  CHECK_THROWS_AS(read_trace(dir / "broken.jsonl"), ConfigError);
}
