#include "boinit/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "boinit/errors.hpp"

namespace boinit {
namespace {

constexpr double kInitialJitter = 1e-10;
constexpr double kMaxJitter = 1e-4;
constexpr double kInvGolden = 0.6180339887498949;

struct Factor {
  Eigen::MatrixXd lower;
  double jitter = 0.0;
};

// Cholesky of `cov` with diagonal jitter escalated tenfold from 1e-10 to
// 1e-4 times the mean diagonal.
Factor factorize(const Eigen::MatrixXd& cov) {
  const auto n = cov.rows();
  const double scale = cov.trace() / static_cast<double>(n);
  double jitter = kInitialJitter * scale;
  const double limit = kMaxJitter * scale * (1.0 + 1e-9);
  while (jitter <= limit) {
    Eigen::MatrixXd a = cov;
    a.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) return {llt.matrixL(), jitter};
    jitter *= 10.0;
  }
  throw NumericalError("Cholesky failed after maximum jitter");
}

Eigen::MatrixXd covariance(const KernelParams& params, const Eigen::Ref<const Eigen::MatrixXd>& inputs) {
  Eigen::MatrixXd k = kernel_matrix(params, inputs, inputs);
  k.diagonal().array() += params.noise_variance;
  return k;
}

double evidence(const Factor& f, const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::VectorXd w = f.lower.triangularView<Eigen::Lower>().solve(y);
  const double n = static_cast<double>(y.size());
  return -0.5 * w.squaredNorm() - f.lower.diagonal().array().log().sum() -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

void check_params(const KernelParams& p) {
  if (!(p.signal_variance > 0.0) || !(p.length_scale > 0.0) || !(p.noise_variance >= 0.0) ||
      !std::isfinite(p.signal_variance) || !std::isfinite(p.length_scale) || !std::isfinite(p.noise_variance))
    throw std::invalid_argument("kernel parameters out of range");
}

// Log marginal likelihood in (log length scale, log noise) coordinates;
// -inf where the factorization breaks down.
struct EvidenceSurface {
  const Eigen::Ref<const Eigen::MatrixXd>& inputs;
  const Eigen::VectorXd& y;

  double operator()(double log_length, double log_noise) const {
    KernelParams p{1.0, std::exp(log_length), std::exp(log_noise)};
    try {
      return log_marginal_likelihood(inputs, y, p);
    } catch (const NumericalError&) {
      return -std::numeric_limits<double>::infinity();
    }
  }
};

KernelParams select_params(const Eigen::Ref<const Eigen::MatrixXd>& inputs, const Eigen::VectorXd& y,
                           const FitPolicy& policy) {
  const EvidenceSurface surface{inputs, y};
  const double lo[2] = {std::log(policy.min_length_scale), std::log(policy.min_noise_variance)};
  const double hi[2] = {std::log(policy.max_length_scale), std::log(policy.max_noise_variance)};
  const int counts[2] = {std::max(policy.length_scale_grid, 2), std::max(policy.noise_variance_grid, 2)};
  const double step[2] = {(hi[0] - lo[0]) / (counts[0] - 1), (hi[1] - lo[1]) / (counts[1] - 1)};

  double best[2] = {lo[0], lo[1]};
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < counts[0]; ++i) {
    for (int j = 0; j < counts[1]; ++j) {
      const double point[2] = {lo[0] + i * step[0], lo[1] + j * step[1]};
      const double v = surface(point[0], point[1]);
      if (v > best_value) {
        best_value = v;
        best[0] = point[0];
        best[1] = point[1];
      }
    }
  }
  if (!std::isfinite(best_value)) throw NumericalError("no kernel hyperparameters admit a Cholesky factor");

  // Coordinate-wise golden section around the incumbent; the bracket halves
  // after every sweep. Each shrink step counts as one iteration.
  constexpr int kStepsPerLine = 5;
  double radius[2] = {step[0], step[1]};
  int iterations = 0;
  int coord = 0;
  while (iterations < policy.refine_iterations) {
    double a = std::max(lo[coord], best[coord] - radius[coord]);
    double b = std::min(hi[coord], best[coord] + radius[coord]);
    const auto at = [&](double t) {
      return coord == 0 ? surface(t, best[1]) : surface(best[0], t);
    };
    double c = b - kInvGolden * (b - a);
    double d = a + kInvGolden * (b - a);
    double fc = at(c);
    double fd = at(d);
    for (int s = 0; s < kStepsPerLine && iterations < policy.refine_iterations; ++s, ++iterations) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvGolden * (b - a);
        fc = at(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvGolden * (b - a);
        fd = at(d);
      }
    }
    const double cand = fc >= fd ? c : d;
    const double cand_value = std::max(fc, fd);
    if (cand_value > best_value) {
      best_value = cand_value;
      best[coord] = cand;
    }
    if (coord == 1) {
      radius[0] *= 0.5;
      radius[1] *= 0.5;
    }
    coord = 1 - coord;
  }
  return {1.0, std::exp(best[0]), std::exp(best[1])};
}

}  // namespace

double kernel_eval(const KernelParams& params, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
  const double r2 = (x - y).squaredNorm();
  return params.signal_variance * std::exp(-r2 / (2.0 * params.length_scale * params.length_scale));
}

Eigen::MatrixXd kernel_matrix(const KernelParams& params, const Eigen::Ref<const Eigen::MatrixXd>& a,
                              const Eigen::Ref<const Eigen::MatrixXd>& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("kernel_matrix: dimension mismatch");
  const double inv = -1.0 / (2.0 * params.length_scale * params.length_scale);
  Eigen::MatrixXd k(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      k(i, j) = params.signal_variance * std::exp(inv * (a.row(i) - b.row(j)).squaredNorm());
    }
  }
  return k;
}

double log_marginal_likelihood(const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                               const Eigen::Ref<const Eigen::VectorXd>& targets,
                               const KernelParams& params) {
  check_params(params);
  if (inputs.rows() != targets.size() || inputs.rows() == 0)
    throw std::invalid_argument("log_marginal_likelihood: size mismatch");
  return evidence(factorize(covariance(params, inputs)), targets);
}

GpModel fit(const Eigen::Ref<const Eigen::MatrixXd>& inputs, std::span<const double> targets,
            const FitPolicy& policy) {
  const auto n = inputs.rows();
  if (n < 1) throw std::invalid_argument("fit: need at least one observation");
  if (static_cast<std::size_t>(n) != targets.size()) throw std::invalid_argument("fit: size mismatch");
  if (!inputs.allFinite() || (inputs.array() < 0.0).any() || (inputs.array() > 1.0).any())
    throw std::invalid_argument("fit: inputs must lie in the unit cube");
  for (double t : targets)
    if (!std::isfinite(t)) throw std::invalid_argument("fit: non-finite target");

  GpModel model;
  model.inputs_ = inputs;

  double mean = 0.0;
  for (double t : targets) mean += t;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double t : targets) ss += (t - mean) * (t - mean);
  double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  // Degenerate spread: centre only.
  if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) sd = 1.0;
  model.target_mean_ = mean;
  model.target_std_ = sd;
  model.incumbent_ = *std::max_element(targets.begin(), targets.end());

  model.targets_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) model.targets_[i] = (targets[static_cast<std::size_t>(i)] - mean) / sd;

  if (policy.fixed) {
    check_params(*policy.fixed);
    model.kernel_ = *policy.fixed;
  } else {
    model.kernel_ = select_params(model.inputs_, model.targets_, policy);
  }

  Factor f = factorize(covariance(model.kernel_, model.inputs_));
  model.chol_ = std::move(f.lower);
  model.jitter_ = f.jitter;
  const auto l = model.chol_.triangularView<Eigen::Lower>();
  model.alpha_ = model.chol_.transpose().triangularView<Eigen::Upper>().solve(l.solve(model.targets_));
  return model;
}

void GpModel::check_dimension(Eigen::Index cols) const {
  if (cols != inputs_.cols()) throw std::invalid_argument("posterior: dimension mismatch");
}

Prediction GpModel::posterior(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  check_dimension(x.size());
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
  posterior(x.transpose(), mean, variance);
  return {mean[0], variance[0]};
}

void GpModel::posterior(const Eigen::Ref<const Eigen::MatrixXd>& points, Eigen::VectorXd& mean,
                        Eigen::VectorXd& variance) const {
  check_dimension(points.cols());
  const Eigen::MatrixXd cross = kernel_matrix(kernel_, points, inputs_);  // m x n
  const Eigen::MatrixXd v = chol_.triangularView<Eigen::Lower>().solve(cross.transpose());
  mean = (cross * alpha_).array() * target_std_ + target_mean_;
  variance = ((kernel_.signal_variance - v.colwise().squaredNorm().array()).max(0.0) *
              (target_std_ * target_std_))
                 .matrix()
                 .transpose();
}

double GpModel::latent_variance(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  check_dimension(x.size());
  const Eigen::MatrixXd cross = kernel_matrix(kernel_, x.transpose(), inputs_);
  const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(cross.transpose());
  return kernel_.signal_variance - v.squaredNorm();
}

}  // namespace boinit
