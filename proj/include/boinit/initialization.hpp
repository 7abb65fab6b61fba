#pragma once

#include <string>
#include <variant>
#include <vector>

#include "boinit/rng.hpp"
#include "boinit/search_space.hpp"

namespace boinit {

struct UniformInit {
  int count = 1;
};

/// Default-centred initialization: each coordinate drawn from a normal with
/// mean at the parameter default and sd = lambda * range, truncated to the
/// bounds (on the parameter's transformed scale).
struct TruncatedGaussianInit {
  int count = 1;
  double lambda = 0.05;
};

struct DefaultPointInit {};

using InitStrategy = std::variant<UniformInit, TruncatedGaussianInit, DefaultPointInit>;

/// Throws ConfigError when count < 1 or lambda is outside (0, 1).
void check_strategy(const InitStrategy& strategy);

int initial_count(const InitStrategy& strategy);

/// "uniform", "truncated_gaussian" or "default".
std::string strategy_kind(const InitStrategy& strategy);

/// Stable identifier used in run ids and seeds, e.g. "uniform-n3",
/// "tg-n5-l0.1125", "default".
std::string strategy_tag(const InitStrategy& strategy);

/// Quantile of N(mu, sigma^2) truncated to [a, b] at probability p in (0, 1).
double truncnorm_quantile(double mu, double sigma, double a, double b, double p);

/// One inverse-CDF draw from N(mu, sigma^2) truncated to [a, b].
/// Throws std::invalid_argument unless a < b, a <= mu <= b, sigma > 0.
double truncnorm_sample(double mu, double sigma, double a, double b, Rng& rng);

std::vector<Configuration> generate_initial(const SearchSpace& space, const InitStrategy& strategy,
                                            Rng& rng);

/// The five concentration values swept in the sensitivity study.
std::vector<double> lambda_grid();

}  // namespace boinit
