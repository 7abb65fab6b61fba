#pragma once

#include <optional>
#include <span>

#include <Eigen/Core>

namespace boinit {

/// Squared-exponential kernel hyperparameters on unit-cube inputs.
struct KernelParams {
  double signal_variance = 1.0;
  double length_scale = 0.2;
  double noise_variance = 1e-6;
};

/// sigma_f^2 * exp(-|x - x'|^2 / (2 l^2)).
double kernel_eval(const KernelParams& params, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);

/// Kernel matrix between the rows of a (n x d) and b (m x d).
Eigen::MatrixXd kernel_matrix(const KernelParams& params, const Eigen::Ref<const Eigen::MatrixXd>& a,
                              const Eigen::Ref<const Eigen::MatrixXd>& b);

/// How fit() picks kernel hyperparameters.
///
/// With `fixed` set, the given parameters are used as-is. Otherwise the signal
/// variance is held at 1 and (length scale, noise variance) are chosen by
/// maximizing the log marginal likelihood over a log-spaced grid, followed by
/// coordinate-wise golden-section refinement in log space.
struct FitPolicy {
  std::optional<KernelParams> fixed;
  double min_length_scale = 0.05;
  double max_length_scale = 2.0;
  int length_scale_grid = 12;
  double min_noise_variance = 1e-6;
  double max_noise_variance = 1e-1;
  int noise_variance_grid = 6;
  int refine_iterations = 50;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

class GpModel;

GpModel fit(const Eigen::Ref<const Eigen::MatrixXd>& inputs, std::span<const double> targets,
            const FitPolicy& policy = {});

/// Evidence of standardized targets under `params`, with the same jitter
/// escalation the model uses. Throws NumericalError on Cholesky failure.
double log_marginal_likelihood(const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                               const Eigen::Ref<const Eigen::VectorXd>& targets,
                               const KernelParams& params);

/// Fitted Gaussian-process surrogate with zero prior mean on standardized
/// targets. Immutable once built; safe to share across threads.
class GpModel {
 public:
  std::size_t size() const noexcept { return static_cast<std::size_t>(inputs_.rows()); }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(inputs_.cols()); }

  const Eigen::MatrixXd& inputs() const noexcept { return inputs_; }
  /// Standardized targets.
  const Eigen::VectorXd& targets() const noexcept { return targets_; }
  const KernelParams& kernel() const noexcept { return kernel_; }
  /// Lower Cholesky factor of K + (noise + jitter) I.
  const Eigen::MatrixXd& chol() const noexcept { return chol_; }
  const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
  double jitter() const noexcept { return jitter_; }
  double target_mean() const noexcept { return target_mean_; }
  double target_std() const noexcept { return target_std_; }
  /// Largest raw target, the EI incumbent.
  double incumbent() const noexcept { return incumbent_; }

  /// Posterior in raw target units; variance clamped at zero.
  Prediction posterior(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Posterior for every row of `points` (m x d).
  void posterior(const Eigen::Ref<const Eigen::MatrixXd>& points, Eigen::VectorXd& mean,
                 Eigen::VectorXd& variance) const;

  /// Standardized-unit posterior variance before clamping.
  double latent_variance(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  friend GpModel fit(const Eigen::Ref<const Eigen::MatrixXd>&, std::span<const double>, const FitPolicy&);

  void check_dimension(Eigen::Index cols) const;

  Eigen::MatrixXd inputs_;
  Eigen::VectorXd targets_;
  KernelParams kernel_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
  double target_mean_ = 0.0;
  double target_std_ = 1.0;
  double incumbent_ = 0.0;
};

}  // namespace boinit
