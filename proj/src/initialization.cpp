#include "boinit/initialization.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "boinit/errors.hpp"
#include "boinit/normal.hpp"

namespace boinit {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Standard-normal quantile restricted to [alpha, beta] at probability p,
// computed in whichever tail keeps the masses representable.
double standard_truncated_quantile(double alpha, double beta, double p) {
  if (alpha > 0.0) return -standard_truncated_quantile(-beta, -alpha, 1.0 - p);
  const double lower = normal_cdf(alpha);
  if (beta <= 0.0) {
    const double upper = normal_cdf(beta);
    return normal_quantile(lower + p * (upper - lower));
  }
  const double upper_tail = normal_sf(beta);
  const double mass = 1.0 - upper_tail - lower;
  const double target = lower + p * mass;
  if (target < 0.5) return normal_quantile(target);
  return -normal_quantile(upper_tail + (1.0 - p) * mass);
}

Configuration draw_point(const SearchSpace& space, const std::vector<double>& unit) {
  Configuration x;
  x.values.resize(space.dimension());
  for (std::size_t i = 0; i < space.dimension(); ++i) x.values[i] = from_unit_coordinate(space[i], unit[i]);
  return x;
}

}  // namespace

void check_strategy(const InitStrategy& strategy) {
  std::visit(overloaded{
                 [](const UniformInit& s) {
                   if (s.count < 1) throw ConfigError("uniform initialization needs count >= 1");
                 },
                 [](const TruncatedGaussianInit& s) {
                   if (s.count < 1) throw ConfigError("truncated Gaussian initialization needs count >= 1");
                   if (!(s.lambda > 0.0 && s.lambda < 1.0))
                     throw ConfigError("truncated Gaussian lambda must lie in (0, 1)");
                 },
                 [](const DefaultPointInit&) {},
             },
             strategy);
}

int initial_count(const InitStrategy& strategy) {
  return std::visit(overloaded{
                        [](const UniformInit& s) { return s.count; },
                        [](const TruncatedGaussianInit& s) { return s.count; },
                        [](const DefaultPointInit&) { return 1; },
                    },
                    strategy);
}

std::string strategy_kind(const InitStrategy& strategy) {
  return std::visit(overloaded{
                        [](const UniformInit&) { return std::string("uniform"); },
                        [](const TruncatedGaussianInit&) { return std::string("truncated_gaussian"); },
                        [](const DefaultPointInit&) { return std::string("default"); },
                    },
                    strategy);
}

std::string strategy_tag(const InitStrategy& strategy) {
  return std::visit(overloaded{
                        [](const UniformInit& s) { return "uniform-n" + std::to_string(s.count); },
                        [](const TruncatedGaussianInit& s) {
                          return "tg-n" + std::to_string(s.count) + "-l" + shortest(s.lambda);
                        },
                        [](const DefaultPointInit&) { return std::string("default"); },
                    },
                    strategy);
}

double truncnorm_quantile(double mu, double sigma, double a, double b, double p) {
  if (!(a < b) || !(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(sigma))
    throw std::invalid_argument("truncnorm_quantile: invalid parameters");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("truncnorm_quantile: p outside (0, 1)");
  const double q = standard_truncated_quantile((a - mu) / sigma, (b - mu) / sigma, p);
  return std::clamp(mu + sigma * q, a, b);
}

double truncnorm_sample(double mu, double sigma, double a, double b, Rng& rng) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw std::invalid_argument("truncnorm_sample: need finite a < b");
  if (!(mu >= a && mu <= b)) throw std::invalid_argument("truncnorm_sample: mu outside [a, b]");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("truncnorm_sample: sigma must be > 0");
  return truncnorm_quantile(mu, sigma, a, b, rng.uniform());
}

std::vector<Configuration> generate_initial(const SearchSpace& space, const InitStrategy& strategy, Rng& rng) {
  check_strategy(strategy);
  const std::size_t d = space.dimension();
  std::vector<Configuration> points;
  std::visit(overloaded{
                 [&](const UniformInit& s) {
                   std::vector<double> unit(d);
                   for (int k = 0; k < s.count; ++k) {
                     for (auto& u : unit) u = rng.uniform();
                     points.push_back(draw_point(space, unit));
                   }
                 },
                 [&](const TruncatedGaussianInit& s) {
                   for (int k = 0; k < s.count; ++k) {
                     Configuration x;
                     x.values.resize(d);
                     for (std::size_t i = 0; i < d; ++i) {
                       const Parameter& p = space[i];
                       const double lo = transformed(p, p.lower);
                       const double hi = transformed(p, p.upper);
                       const double mu = std::clamp(transformed(p, p.default_value), lo, hi);
                       const double t = truncnorm_sample(mu, s.lambda * (hi - lo), lo, hi, rng);
                       double v = untransformed(p, t);
                       if (p.kind == Kind::integer) v = std::round(v);
                       x.values[i] = std::clamp(v, p.lower, p.upper);
                     }
                     points.push_back(std::move(x));
                   }
                 },
                 [&](const DefaultPointInit&) { points.push_back(default_configuration(space)); },
             },
             strategy);
  return points;
}

std::vector<double> lambda_grid() { return {0.05, 0.1125, 0.175, 0.2375, 0.30}; }

}  // namespace boinit
