#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <vector>

#include "boinit/errors.hpp"
#include "boinit/initialization.hpp"
#include "boinit/rng.hpp"
#include "support.hpp"

using namespace boinit;
using Catch::Approx;

namespace {

const std::filesystem::path kSpaces = BOINIT_SOURCE_DIR "/configs/spaces";

// Mean and variance of N(mu, s^2) truncated to [a, b], textbook formulas.
std::pair<double, double> truncated_moments(double mu, double s, double a, double b) {
  const auto pdf = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2 * M_PI); };
  const double al = (a - mu) / s, be = (b - mu) / s;
  const double z = oracle::phi_cdf(be) - oracle::phi_cdf(al);
  const double m = mu + s * (pdf(al) - pdf(be)) / z;
  const double v = s * s * (1 + (al * pdf(al) - be * pdf(be)) / z - std::pow((pdf(al) - pdf(be)) / z, 2));
  return {m, v};
}

double tv_to_uniform(const std::vector<double>& sample, int bins) {
  std::vector<double> hist(bins, 0.0);
  for (double v : sample) hist[std::min(bins - 1, static_cast<int>(v * bins))] += 1.0;
  double tv = 0.0;
  for (double h : hist) tv += std::abs(h / sample.size() - 1.0 / bins);
  return 0.5 * tv;
}

}  // namespace

TEST_CASE("lambda grid is the five evenly spaced concentrations") {
  const auto g = lambda_grid();
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.05);
  CHECK(g.back() == 0.30);
  CHECK(g == std::vector<double>{0.05, 0.1125, 0.175, 0.2375, 0.30});
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] - g[i - 1] == Approx(0.0625).margin(1e-15));
}

TEST_CASE("tiny sigma concentrates the draw on mu") {
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const double v = truncnorm_sample(3.0, 1e-12 * 10.0, -2.0, 8.0, rng);
    CHECK(std::abs(v - 3.0) <= 1e-9 * 10.0);
  }
}

TEST_CASE("draws never leave the truncation window") {
  Rng rng(2);
  for (int k = 0; k < 20000; ++k) {
    const double a = rng.uniform(-5, 5);
    const double b = a + rng.uniform(1e-3, 5);
    const double mu = k % 3 == 0 ? a : (k % 3 == 1 ? b : rng.uniform(a, b));
    const double sigma = std::pow(10.0, rng.uniform(-6, 2));
    const double v = truncnorm_sample(mu, sigma, a, b, rng);
    REQUIRE(v >= a);
    REQUIRE(v <= b);
  }
}

TEST_CASE("truncnorm_sample rejects invalid bounds") {
  Rng rng(3);
  CHECK_THROWS_AS(truncnorm_sample(0.5, 0.1, 1.0, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(truncnorm_sample(2.0, 0.1, 0.0, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(truncnorm_sample(0.5, 0.0, 0.0, 1.0, rng), std::invalid_argument);
}

TEST_CASE("centred symmetric truncated normal: mean and KS against the analytic CDF") {
  Rng rng(44);
  const double mu = 0.0, sigma = 1.0, a = -1.5, b = 1.5;
  const int n = 1'000'000;
  std::vector<double> sample(n);
  double sum = 0.0;
  for (auto& v : sample) {
    v = truncnorm_sample(mu, sigma, a, b, rng);
    sum += v;
  }
  const auto [m, var] = truncated_moments(mu, sigma, a, b);
  CHECK(m == Approx(0.0).margin(1e-15));
  CHECK(std::abs(sum / n - mu) <= 4.0 * std::sqrt(var / n));
  const auto ks = oracle::ks_test(sample, [&](double v) { return oracle::truncnorm_cdf(v, mu, sigma, a, b); });
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("one-sided truncation at a bound passes KS") {
  Rng rng(45);
  std::vector<double> sample(200000);
  for (auto& v : sample) v = truncnorm_sample(0.0, 0.2, 0.0, 1.0, rng);
  const auto ks = oracle::ks_test(sample, [](double v) { return oracle::truncnorm_cdf(v, 0.0, 0.2, 0.0, 1.0); });
  CHECK(ks.p_value > 0.01);
  const auto [m, var] = truncated_moments(0.0, 0.2, 0.0, 1.0);
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= sample.size();
  CHECK(std::abs(mean - m) <= 4.0 * std::sqrt(var / sample.size()));
}

TEST_CASE("default point reproduces the SVM defaults and ignores the rng") {
  const auto svc = load_search_space(kSpaces / "svc.json");
  Rng r1(1), r2(999);
  const auto a = generate_initial(svc, DefaultPointInit{}, r1);
  const auto b = generate_initial(svc, DefaultPointInit{}, r2);
  REQUIRE(a.size() == 1);
  CHECK(a[0].values == std::vector<double>{1.0, 0.01, 3.0, 0.0, 1e-3});
  CHECK(a == b);
  CHECK(r1.next() == Rng(1).next());
}

TEST_CASE("uniform design is uniform on each transformed coordinate") {
  const SearchSpace space({{"lin", Scale::linear, Kind::continuous, -2, 6, 0},
                           {"log", Scale::logarithmic, Kind::continuous, 1e-4, 1e-1, 1e-2}});
  Rng rng(10);
  std::vector<double> lin, lg;
  for (int rep = 0; rep < 10000; ++rep) {
    const auto pts = generate_initial(space, UniformInit{5}, rng);
    REQUIRE(pts.size() == 5);
    for (const auto& p : pts) {
      REQUIRE(validate(space, p).empty());
    }
    lin.push_back(pts[0][0]);
    lg.push_back(pts[0][1]);
  }
  CHECK(oracle::ks_test(lin, [](double v) { return std::clamp((v + 2) / 8, 0.0, 1.0); }).p_value > 0.01);
  CHECK(oracle::ks_test(lg, [](double v) {
          return std::clamp((std::log(v) - std::log(1e-4)) / (std::log(1e-1) - std::log(1e-4)), 0.0, 1.0);
        }).p_value > 0.01);
}

TEST_CASE("truncated Gaussian at lambda 0.05 keeps about 68% within one sigma") {
  const SearchSpace space({{"a", Scale::linear, Kind::continuous, 0, 10, 4},
                           {"b", Scale::logarithmic, Kind::continuous, 1e-5, 1e-1, 1e-3},
                           {"c", Scale::linear, Kind::continuous, -1, 1, 0.2}});
  Rng rng(68);
  std::vector<int> inside(3, 0);
  const int n = 10000;
  for (const auto& x : generate_initial(space, TruncatedGaussianInit{n, 0.05}, rng)) {
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& p = space[i];
      const double range = transformed(p, p.upper) - transformed(p, p.lower);
      if (std::abs(transformed(p, x[i]) - transformed(p, p.default_value)) <= 0.05 * range) ++inside[i];
    }
  }
  for (int c : inside) CHECK(std::abs(static_cast<double>(c) / n - 0.6827) <= 0.02);
}

TEST_CASE("larger lambda moves the design towards uniform") {
  const auto space = SearchSpace::unit_cube({0.3});
  double prev = 1.0;
  for (double lambda : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    Rng rng(123);
    std::vector<double> s;
    for (const auto& x : generate_initial(space, TruncatedGaussianInit{100000, lambda}, rng)) s.push_back(x[0]);
    const double tv = tv_to_uniform(s, 20);
    CHECK(tv < prev);
    prev = tv;
  }
}

TEST_CASE("designs are valid and reproducible under a fixed seed") {
  const auto mlp = load_search_space(kSpaces / "mlp.json");
  for (const InitStrategy s : {InitStrategy{UniformInit{5}}, InitStrategy{TruncatedGaussianInit{4, 0.175}},
                               InitStrategy{DefaultPointInit{}}}) {
    Rng r1(5), r2(5);
    const auto a = generate_initial(mlp, s, r1);
    const auto b = generate_initial(mlp, s, r2);
    CHECK(a == b);
    CHECK(static_cast<int>(a.size()) == initial_count(s));
    for (const auto& x : a) CHECK(validate(mlp, x).empty());
  }
}

TEST_CASE("strategy tags and validation") {
  CHECK(strategy_tag(UniformInit{3}) == "uniform-n3");
  CHECK(strategy_tag(TruncatedGaussianInit{5, 0.1125}) == "tg-n5-l0.1125");
  CHECK(strategy_tag(DefaultPointInit{}) == "default");
  CHECK(strategy_kind(TruncatedGaussianInit{5, 0.3}) == "truncated_gaussian");
  CHECK_THROWS_AS(check_strategy(UniformInit{0}), ConfigError);
  CHECK_THROWS_AS(check_strategy(TruncatedGaussianInit{3, 1.0}), ConfigError);
  CHECK_THROWS_AS(check_strategy(TruncatedGaussianInit{3, 0.0}), ConfigError);
}
