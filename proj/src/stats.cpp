#include "boinit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "boinit/engine.hpp"

namespace boinit {
namespace {

namespace mp = boost::multiprecision;

mp::cpp_int upper_tail_count(int n, int k) {
  mp::cpp_int sum = 0;
  mp::cpp_int c = 1;  // C(n, i)
  for (int i = 0; i <= n; ++i) {
    if (i >= k) sum += c;
    c = c * (n - i) / (i + 1);
  }
  return sum;
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double delta_conv(double mu_random, double mu_default) {
  if (!(mu_random > 0.0)) throw std::invalid_argument("delta_conv: random-arm mean must be > 0");
  return (mu_random - mu_default) / mu_random;
}

double delta_metric(double mu_random, double mu_default) {
  if (mu_random == 0.0 || !std::isfinite(mu_random))
    throw std::invalid_argument("delta_metric: random-arm mean must be non-zero");
  return (mu_default - mu_random) / mu_random;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::win: return "win";
    case Outcome::tie: return "tie";
    case Outcome::loss: return "loss";
  }
  return "?";
}

Outcome classify(double delta, double tau) {
  if (delta > tau) return Outcome::win;
  if (delta < -tau) return Outcome::loss;
  return Outcome::tie;
}

std::string binomial_upper_tail_count(int n, int k) {
  if (n < 0) throw std::invalid_argument("binomial_upper_tail_count: n < 0");
  return upper_tail_count(n, std::max(k, 0)).str();
}

BinomialResult binomial_test(int wins, int losses) {
  if (wins < 0 || losses < 0) throw std::invalid_argument("binomial_test: negative count");
  const int n = wins + losses;
  if (n == 0) throw std::invalid_argument("binomial_test: no non-tied comparisons");
  const mp::cpp_rational p(upper_tail_count(n, wins), mp::cpp_int(1) << n);
  BinomialResult r;
  r.wins = wins;
  r.losses = losses;
  r.n_total = n;
  r.p_value = p.convert_to<double>();
  r.reject = r.p_value < kSignificance;
  return r;
}

double spread(std::span<const std::vector<double>> curves) {
  if (curves.empty()) throw std::invalid_argument("spread: no curves");
  double total = 0.0;
  for (const auto& r : curves) {
    if (r.empty()) throw std::invalid_argument("spread: empty curve");
    const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
    if (!(*lo > 0.0)) throw std::invalid_argument("spread: running best must stay positive");
    total += (*hi - *lo) / *lo;
  }
  return total / static_cast<double>(curves.size());
}

std::vector<double> minmax_normalize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("minmax_normalize: empty input");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  std::vector<double> out(values.size(), 0.0);
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = std::clamp((values[i] - *lo) / range, 0.0, 1.0);
  return out;
}

double pearson_p_value(double r, std::size_t n) {
  if (n < 3) throw std::invalid_argument("pearson_p_value: need n >= 3");
  if (std::abs(r) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = std::abs(r) * std::sqrt(df / (1.0 - r * r));
  const boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, t)));
}

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("pearson: need at least 3 pairs");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw std::invalid_argument("pearson: constant input");
  PearsonResult res;
  res.n = x.size();
  res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  res.p_value = pearson_p_value(res.r, res.n);
  return res;
}

EarlyLate early_late_means(std::span<const double> running_best, double split) {
  if (running_best.size() < 2) throw std::invalid_argument("early_late_means: need at least 2 iterations");
  if (!(split > 0.0 && split < 1.0)) throw std::invalid_argument("early_late_means: split outside (0, 1)");
  const std::size_t t = running_best.size();
  std::size_t early = static_cast<std::size_t>(std::ceil(split * static_cast<double>(t)));
  early = std::clamp<std::size_t>(early, 1, t - 1);
  return {mean_of(running_best.first(early)), mean_of(running_best.subspan(early))};
}

SensitivityReport sensitivity_sweep(std::span<const SweepRun> runs, double split) {
  std::set<double> distinct;
  for (const auto& r : runs) distinct.insert(r.lambda);
  if (distinct.size() < 3) throw std::invalid_argument("sensitivity_sweep: need at least 3 distinct lambda values");

  const std::size_t n = runs.size();
  std::vector<double> lambdas(n), max_perf(n), mean_perf(n), conv(n), early(n), late(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rb = runs[i].running_best;
    if (rb.empty()) throw std::invalid_argument("sensitivity_sweep: empty run");
    lambdas[i] = runs[i].lambda;
    max_perf[i] = *std::max_element(rb.begin(), rb.end());
    mean_perf[i] = mean_of(rb);
    conv[i] = convergence_index(rb);
    const EarlyLate el = early_late_means(rb, split);
    early[i] = el.early;
    late[i] = el.late;
  }

  SensitivityReport report;
  report.runs = n;
  report.lambdas.assign(distinct.begin(), distinct.end());
  const std::pair<const char*, std::vector<double>*> columns[] = {
      {"Max. performance", &max_perf}, {"Mean performance", &mean_perf}, {"Convergence index", &conv},
      {"Early mean", &early},          {"Late mean", &late},
  };
  for (const auto& [name, column] : columns) {
    SensitivityRow row{name, std::nullopt};
    const auto normalized = minmax_normalize(*column);
    const auto [lo, hi] = std::minmax_element(column->begin(), column->end());
    if (*hi > *lo) row.result = pearson(lambdas, normalized);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace boinit
