#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace boinit {

/// Relative convergence speed-up of the default-centred arm:
/// (random - default) / random. Throws std::invalid_argument if random <= 0.
double delta_conv(double mu_random, double mu_default);

/// Relative metric gain of the default-centred arm:
/// (default - random) / random. Throws std::invalid_argument if random == 0.
double delta_metric(double mu_random, double mu_default);

enum class Outcome { win, tie, loss };

std::string to_string(Outcome o);

/// win if delta > tau, loss if delta < -tau, tie otherwise.
Outcome classify(double delta, double tau);

struct Thresholds {
  double tau_conv = 0.10;
  double tau_metric = 0.003;
};

struct BinomialResult {
  int wins = 0;
  int losses = 0;
  int ties = 0;
  int n_total = 0;
  double p_value = 1.0;
  bool reject = false;  // p < alpha
};

inline constexpr double kSignificance = 0.05;

/// One-sided exact test: p = P(X >= wins), X ~ Binomial(wins + losses, 1/2).
/// Throws std::invalid_argument when wins + losses == 0.
BinomialResult binomial_test(int wins, int losses);

/// Exact numerator of the upper tail, sum_{i >= k} C(n, i), as a decimal
/// string (the p-value is this over 2^n).
std::string binomial_upper_tail_count(int n, int k);

/// Mean over curves of (max r - min r) / min r. Each curve is one
/// running-best trace of a (model, strategy) pair for the same dataset.
/// Throws std::invalid_argument on an empty curve or non-positive minimum.
double spread(std::span<const std::vector<double>> running_best_curves);

/// (v - min) / (max - min); constant input maps to zeros.
std::vector<double> minmax_normalize(std::span<const double> values);

struct PearsonResult {
  double r = 0.0;
  double p_value = 1.0;  // two-sided
  std::size_t n = 0;
};

/// Sample correlation with a two-sided p-value from the t transform on n - 2
/// degrees of freedom. Throws std::invalid_argument for unequal lengths,
/// n < 3 or a constant input.
PearsonResult pearson(std::span<const double> x, std::span<const double> y);

/// Two-sided p-value for a correlation r on n pairs.
double pearson_p_value(double r, std::size_t n);

struct EarlyLate {
  double early = 0.0;
  double late = 0.0;
};

/// Mean running best over iterations 1..ceil(split * T) and over the rest.
/// The early window is capped at T - 1 so that the late window is never empty.
EarlyLate early_late_means(std::span<const double> running_best, double split = 0.5);

/// Per-run input to the lambda sweep.
struct SweepRun {
  double lambda = 0.0;
  std::vector<double> running_best;
};

struct SensitivityRow {
  std::string metric;
  std::optional<PearsonResult> result;  // nullopt when the metric column is constant
};

struct SensitivityReport {
  std::vector<SensitivityRow> rows;  // max, mean, convergence, early, late
  std::size_t runs = 0;
  std::vector<double> lambdas;  // distinct values, ascending
};

/// Correlates five min-max normalised per-run metrics with lambda.
/// Throws std::invalid_argument with fewer than three distinct lambdas.
SensitivityReport sensitivity_sweep(std::span<const SweepRun> runs, double split = 0.5);

}  // namespace boinit
