#pragma once

// Independent reference implementations used by the tests. None of these call
// into the library's numerical code paths.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "boinit/objectives.hpp"
#include "boinit/search_space.hpp"
#include "boinit/surrogate.hpp"

namespace oracle {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

inline long double se_kernel(const boinit::KernelParams& p, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  long double d2 = 0.0L;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const long double d = static_cast<long double>(a[i]) - static_cast<long double>(b[i]);
    d2 += d * d;
  }
  const long double l = p.length_scale;
  return static_cast<long double>(p.signal_variance) * std::exp(-d2 / (2.0L * l * l));
}

struct DensePosterior {
  double mean;
  double variance;  // before clamping, raw units
};

// Posterior by explicit inversion of (K + s I) in extended precision, where s
// is the model's noise plus jitter, with the model's standardization undone.
inline DensePosterior dense_posterior(const boinit::GpModel& model, const Eigen::VectorXd& x) {
  const auto& X = model.inputs();
  const auto n = X.rows();
  const auto& p = model.kernel();
  LMatrix K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) K(i, j) = se_kernel(p, X.row(i).transpose(), X.row(j).transpose());
  const long double diag = static_cast<long double>(p.noise_variance) + static_cast<long double>(model.jitter());
  for (Eigen::Index i = 0; i < n; ++i) K(i, i) += diag;
  const LMatrix Kinv = K.fullPivLu().inverse();
  LVector k(n);
  for (Eigen::Index i = 0; i < n; ++i) k[i] = se_kernel(p, x, X.row(i).transpose());
  const LVector y = model.targets().cast<long double>();
  const long double mean = k.dot(Kinv * y);
  const long double var = static_cast<long double>(p.signal_variance) - k.dot(Kinv * k);
  const long double s = model.target_std();
  return {static_cast<double>(model.target_mean() + s * mean), static_cast<double>(s * s * var)};
}

// log N(y; 0, K + s I) via explicit inverse and LU determinant.
inline double dense_lml(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const boinit::KernelParams& p,
                        double jitter) {
  const auto n = X.rows();
  LMatrix K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) K(i, j) = se_kernel(p, X.row(i).transpose(), X.row(j).transpose());
  for (Eigen::Index i = 0; i < n; ++i) K(i, i) += static_cast<long double>(p.noise_variance) + jitter;
  const auto lu = K.fullPivLu();
  const LVector yl = y.cast<long double>();
  const long double quad = yl.dot(lu.inverse() * yl);
  const long double logdet = std::log(std::abs(lu.determinant()));
  return static_cast<double>(-0.5L * quad - 0.5L * logdet -
                             0.5L * n * std::log(2.0L * std::numbers::pi_v<long double>));
}

inline double phi_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic;
  double p_value;
};

// One-sample KS test of `sample` against `cdf`.
inline KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d)};
}

inline double truncnorm_cdf(double v, double mu, double sigma, double a, double b) {
  const double lo = phi_cdf((a - mu) / sigma);
  const double hi = phi_cdf((b - mu) / sigma);
  if (v <= a) return 0.0;
  if (v >= b) return 1.0;
  return (phi_cdf((v - mu) / sigma) - lo) / (hi - lo);
}

// Textbook Pearson r in long double.
inline double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<long double>(x.size());
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  return static_cast<double>((n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy)));
}

// Two-sided p of r with n-2 degrees of freedom by numerically integrating the
// t density (Simpson on a substituted finite interval).
inline double t_two_sided_p(double r, int n) {
  const double df = n - 2;
  const double t = std::abs(r) * std::sqrt(df / (1.0 - r * r));
  const double logc = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) - 0.5 * std::log(df * std::numbers::pi);
  const auto dens = [&](double s) { return std::exp(logc - (df + 1) / 2 * std::log1p(s * s / df)); };
  // P(|T| > t) = 2 * int_t^inf f(s) ds, substitute s = t + u / (1 - u), u in [0, 1).
  const int m = 200000;
  const double h = 1.0 / m;
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double u = i * h;
    double g = 0.0;
    if (i < m) {
      const double s = t + u / (1.0 - u);
      g = dens(s) / ((1.0 - u) * (1.0 - u));
    }
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * g;
  }
  return 2.0 * acc * h / 3.0;
}

// Test-only objective: -(x - 0.3)^2 on [0, 1].
class Quadratic : public boinit::Objective {
 public:
  Quadratic() : space_(boinit::SearchSpace::unit_cube({0.5})) {}
  const std::string& id() const noexcept override { return id_; }
  const boinit::SearchSpace& space() const noexcept override { return space_; }
  double evaluate(const boinit::Configuration& x) override { return -(x[0] - 0.3) * (x[0] - 0.3); }

 private:
  std::string id_ = "quadratic";
  boinit::SearchSpace space_;
};

}  // namespace oracle
