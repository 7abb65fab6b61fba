#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <memory>

#include "boinit/errors.hpp"
#include "boinit/objectives.hpp"
#include "boinit/subprocess.hpp"

using namespace boinit;
using namespace std::chrono_literals;
using Catch::Approx;

namespace {

SyntheticObjective make(SyntheticFunction f, std::vector<double> opt, std::vector<double> def, double gap) {
  return SyntheticObjective("t", {f, std::move(opt), std::move(def), gap});
}

Eigen::VectorXd vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string evaluator(const std::string& mode) { return std::string(ECHO_EVALUATOR) + " " + mode; }

// Loss whose value is the squared distance to 0.3, for orientation checks.
class Loss : public Objective {
 public:
  const std::string& id() const noexcept override { return id_; }
  const SearchSpace& space() const noexcept override { return space_; }
  double evaluate(const Configuration& x) override { return (x[0] - 0.3) * (x[0] - 0.3); }

 private:
  std::string id_ = "loss";
  SearchSpace space_ = SearchSpace::unit_cube({0.5});
};

}  // namespace

TEST_CASE("sphere bowl: optimum and default values") {
  auto f = make(SyntheticFunction::sphere_bowl, {0.2, 0.7}, {0.8, 0.4}, 0.1);
  CHECK(f.evaluate_unit(vec({0.2, 0.7})) == 1.0);
  CHECK(f.evaluate({{0.8, 0.4}}) == Approx(0.9).margin(1e-9));
}

TEST_CASE("every landscape puts the declared default at optimum minus gap") {
  for (auto fn : {SyntheticFunction::sphere_bowl, SyntheticFunction::two_basin, SyntheticFunction::ridged_multimodal}) {
    for (double gap : {0.01, 0.05, 0.2}) {
      auto f = make(fn, {0.75, 0.25, 0.6}, {0.2, 0.8, 0.3}, gap);
      INFO(to_string(fn) << " gap " << gap);
      CHECK(f.evaluate({{0.2, 0.8, 0.3}}) == Approx(1.0 - gap).margin(1e-9));
      CHECK(f.evaluate({{0.75, 0.25, 0.6}}) == Approx(1.0).margin(1e-12));
    }
  }
}

TEST_CASE("two basin midpoint matches the closed form") {
  const std::vector<double> opt{0.8, 0.8}, def{0.25, 0.3};
  const double gap = 0.1;
  auto f = make(SyntheticFunction::two_basin, opt, def, gap);
  const double dx = opt[0] - def[0], dy = opt[1] - def[1];
  const double half2 = 0.25 * (dx * dx + dy * dy);
  const double a = 0.8, b = a - gap;
  const double want = 0.2 + std::max(a * std::exp(-half2 / (2 * 0.2 * 0.2)), b * std::exp(-half2 / (2 * 0.2 * 0.2)));
  CHECK(f.evaluate({{0.5 * (opt[0] + def[0]), 0.5 * (opt[1] + def[1])}}) == Approx(want).epsilon(1e-14));
}

TEST_CASE("dense grid confirms documented optima in 1-D and 2-D") {
  for (auto fn : {SyntheticFunction::sphere_bowl, SyntheticFunction::two_basin, SyntheticFunction::ridged_multimodal}) {
    auto f2 = make(fn, {0.7, 0.35}, {0.15, 0.8}, 0.1);
    double best = -1e300, lo = 1e300;
    double bx = 0, by = 0;
    const int n = 1000;
    Eigen::VectorXd u(2);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        u << (i + 0.5) / n, (j + 0.5) / n;
        const double v = f2.evaluate_unit(u);
        lo = std::min(lo, v);
        if (v > best) {
          best = v;
          bx = u[0];
          by = u[1];
        }
      }
    }
    INFO(to_string(fn));
    CHECK(best <= 1.0);
    CHECK(best >= 1.0 - 1e-3);
    CHECK(std::abs(bx - 0.7) <= 1e-3);
    CHECK(std::abs(by - 0.35) <= 1e-3);
    CHECK(std::isfinite(lo));

    auto f1 = make(fn, {0.3}, {0.9}, 0.1);
    double best1 = -1e300, arg1 = 0;
    Eigen::VectorXd v1(1);
    for (int i = 0; i <= 1'000'000; ++i) {
      v1 << i * 1e-6;
      const double v = f1.evaluate_unit(v1);
      if (v > best1) {
        best1 = v;
        arg1 = v1[0];
      }
    }
    CHECK(best1 == Approx(1.0).margin(1e-12));
    CHECK(arg1 == Approx(0.3).margin(1e-6));
  }
}

TEST_CASE("synthetic spec is validated") {
  CHECK_THROWS_AS(make(SyntheticFunction::sphere_bowl, {0.5}, {0.5}, 0.1), ConfigError);
  CHECK_THROWS_AS(make(SyntheticFunction::two_basin, {0.5}, {0.3}, 0.9), ConfigError);
  CHECK_THROWS_AS(make(SyntheticFunction::two_basin, {0.5}, {0.52}, 0.1), ConfigError);
  CHECK_THROWS_AS(make(SyntheticFunction::sphere_bowl, {1.5}, {0.5}, 0.1), ConfigError);
}

TEST_CASE("synthetic on a real search space reads its default from the space") {
  const SearchSpace space({{"C", Scale::logarithmic, Kind::continuous, 0.1, 10.0, 1.0},
                           {"degree", Scale::linear, Kind::integer, 2, 5, 3}});
  SyntheticObjective f("svm-like", {SyntheticFunction::two_basin, {0.9, 0.9}, {}, 0.05}, space);
  CHECK(f.evaluate({{1.0, 3.0}}) == Approx(0.95).margin(1e-9));
}

TEST_CASE("cv wrapper: noiseless, single fold and fold variance") {
  auto base = std::make_unique<SyntheticObjective>(make(SyntheticFunction::sphere_bowl, {0.4}, {0.1}, 0.1));
  const Configuration x{{0.25}};
  const double raw = base->evaluate(x);

  auto quiet = cv_wrap(std::make_unique<SyntheticObjective>(*base), 3, 0.0, 7);
  CHECK(quiet->evaluate(x) == raw);

  CvObjective single(std::make_unique<SyntheticObjective>(*base), 1, 0.05, 7);
  CHECK(single.evaluate(x) == raw + single.fold_noise(x, 1));

  const int n = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (int s = 0; s < n; ++s) {
    CvObjective cv(std::make_unique<SyntheticObjective>(*base), 3, 0.05, static_cast<std::uint64_t>(s));
    const double v = cv.evaluate(x) - raw;
    sum += v;
    sum2 += v * v;
  }
  const double var = (sum2 - sum * sum / n) / (n - 1);
  CHECK(var == Approx(0.05 * 0.05 / 3).epsilon(0.10));

  CvObjective again(std::make_unique<SyntheticObjective>(*base), 3, 0.05, 11);
  CvObjective twin(std::make_unique<SyntheticObjective>(*base), 3, 0.05, 11);
  CHECK(again.evaluate(x) == twin.evaluate(x));
}

TEST_CASE("negation turns a loss into larger-is-better") {
  NegatedObjective f(std::make_unique<Loss>());
  CHECK(f.evaluate({{0.3}}) == 0.0);
  CHECK(f.evaluate({{0.8}}) == Approx(-0.25));
  CHECK(f.evaluate({{0.4}}) > f.evaluate({{0.9}}));
}

TEST_CASE("echo evaluator returns the first coordinate") {
  const SearchSpace space = SearchSpace::unit_cube({0.5, 0.5});
  ChildProcess proc(evaluator("first"));
  CHECK(external_evaluate(proc, space, {{0.7, 0.1}}, "r", 1, 5000ms) == 0.7);
  CHECK(external_evaluate(proc, space, {{0.2, 0.9}}, "r", 2, 5000ms) == 0.2);
}

TEST_CASE("external objective applies orientation") {
  const SearchSpace space = SearchSpace::unit_cube({0.5});
  ExternalObjective maxi("e", space, evaluator("quadratic"), "run", Orientation::maximize, 5000ms);
  ExternalObjective mini("e", space, evaluator("quadratic"), "run", Orientation::minimize, 5000ms);
  CHECK(maxi.evaluate({{0.5}}) == Approx(0.04));
  CHECK(mini.evaluate({{0.5}}) == Approx(-0.04));
}

TEST_CASE("external evaluator failures abort with context") {
  const SearchSpace space = SearchSpace::unit_cube({0.5});
  {
    ExternalObjective f("e", space, evaluator("nan"), "run", Orientation::maximize, 5000ms);
    CHECK_THROWS_AS(f.evaluate({{0.5}}), EvaluationError);
  }
  {
    ExternalObjective f("e", space, evaluator("sleep"), "run", Orientation::maximize, 300ms);
    const auto start = std::chrono::steady_clock::now();
    CHECK_THROWS_AS(f.evaluate({{0.5}}), TimeoutError);
    CHECK(std::chrono::steady_clock::now() - start < 5s);
  }
  {
    ExternalObjective f("e", space, evaluator("garbage"), "run", Orientation::maximize, 5000ms);
    try {
      f.evaluate({{0.5}});
      FAIL("expected a protocol error");
    } catch (const ProtocolError& e) {
      CHECK(e.raw_line() == "this is not json");
      CHECK_FALSE(e.configuration().empty());
    }
  }
  {
    ExternalObjective f("e", space, evaluator("crash"), "run", Orientation::maximize, 5000ms);
    CHECK_THROWS_AS(f.evaluate({{0.5}}), EvaluationError);
  }
}
