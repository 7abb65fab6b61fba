#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "boinit/search_space.hpp"
#include "boinit/subprocess.hpp"

namespace boinit {

/// Something Bayesian optimization can query. Larger is always better.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual const std::string& id() const noexcept = 0;
  virtual const SearchSpace& space() const noexcept = 0;

  /// Throws EvaluationError (or a subclass) when no finite value is available.
  virtual double evaluate(const Configuration& x) = 0;
};

enum class SyntheticFunction { sphere_bowl, two_basin, ridged_multimodal };

std::string to_string(SyntheticFunction f);
SyntheticFunction parse_synthetic_function(const std::string& name);

/// Stand-in for a tuning task: a landscape on the unit cube with a known
/// optimum (value 1) and a declared "library default" whose value is exactly
/// 1 - gap.
struct SyntheticSpec {
  SyntheticFunction function = SyntheticFunction::sphere_bowl;
  std::vector<double> optimum;
  std::vector<double> default_location;
  double gap = 0.0;
};

/// Landscape constants. Closed forms, with u the unit-cube point,
/// x* the optimum, x_d the default and D = |x* - x_d|:
///
///   sphere_bowl:        1 - c |u - x*|^2,        c = gap / D^2 (c = 1 if gap = 0)
///   two_basin:          floor + max(A g(u; x*, w_opt), B g(u; x_d, w_def))
///                       A = 1 - floor, B = A - gap, g(u; m, w) = exp(-|u - m|^2 / (2 w^2))
///   ridged_multimodal:  1 - s h(u),  h(u) = |u - x*|^2 + ridge * sum_i (1 - cos(2 pi freq (u_i - x*_i)))
///                       s = gap / h(x_d) (s = 1 if gap = 0)
struct LandscapeConstants {
  static constexpr double optimum_value = 1.0;
  static constexpr double two_basin_floor = 0.2;
  static constexpr double two_basin_optimum_width = 0.2;
  static constexpr double two_basin_default_width = 0.2;
  static constexpr double ridge_weight = 0.02;
  static constexpr double ridge_frequency = 3.0;
};

/// Builtin synthetic landscape. If `space` is given, configurations are mapped
/// to the unit cube with to_unit before evaluation and the declared default is
/// the space's own default; otherwise the space is the unit cube.
class SyntheticObjective : public Objective {
 public:
  SyntheticObjective(std::string id, SyntheticSpec spec);
  SyntheticObjective(std::string id, SyntheticSpec spec, SearchSpace space);

  const std::string& id() const noexcept override { return id_; }
  const SearchSpace& space() const noexcept override { return space_; }
  const SyntheticSpec& spec() const noexcept { return spec_; }

  double evaluate(const Configuration& x) override;
  double evaluate_unit(const Eigen::Ref<const Eigen::VectorXd>& u) const;
  double optimum_value() const noexcept { return LandscapeConstants::optimum_value; }

 private:
  void check_spec();

  std::string id_;
  SyntheticSpec spec_;
  SearchSpace space_;
  double scale_ = 1.0;  // c for the bowl, s for the ridged function
};

/// Loss-type base (smaller is better) exposed as its negation.
class NegatedObjective : public Objective {
 public:
  explicit NegatedObjective(std::unique_ptr<Objective> base);

  const std::string& id() const noexcept override { return base_->id(); }
  const SearchSpace& space() const noexcept override { return base_->space(); }
  double evaluate(const Configuration& x) override;

 private:
  std::unique_ptr<Objective> base_;
};

/// Mean of `folds` noisy copies of the base value. Fold noise is a
/// deterministic function of (configuration bits, fold seed, fold index).
class CvObjective : public Objective {
 public:
  CvObjective(std::unique_ptr<Objective> base, int folds, double noise_scale, std::uint64_t fold_seed);

  const std::string& id() const noexcept override { return base_->id(); }
  const SearchSpace& space() const noexcept override { return base_->space(); }
  double evaluate(const Configuration& x) override;

  /// Noise term of fold j (zero-mean, sd noise_scale) at x.
  double fold_noise(const Configuration& x, int fold) const;

 private:
  std::unique_ptr<Objective> base_;
  int folds_;
  double noise_scale_;
  std::uint64_t fold_seed_;
};

std::unique_ptr<Objective> cv_wrap(std::unique_ptr<Objective> base, int folds, double noise_scale,
                                   std::uint64_t fold_seed);

enum class Orientation { maximize, minimize };

/// Line-delimited JSON request/response evaluator running in a child process.
///
///   request:  {"run":"<run id>","index":<n>,"config":{"<name>":<value>,...}}
///   response: {"index":<n>,"value":<number | "nan" | "inf" | "-inf">}
class ExternalObjective : public Objective {
 public:
  ExternalObjective(std::string id, SearchSpace space, std::string command, std::string run_id,
                    Orientation orientation, std::chrono::milliseconds timeout);

  const std::string& id() const noexcept override { return id_; }
  const SearchSpace& space() const noexcept override { return space_; }
  double evaluate(const Configuration& x) override;

 private:
  std::string id_;
  SearchSpace space_;
  std::string command_;
  std::string run_id_;
  Orientation orientation_;
  std::chrono::milliseconds timeout_;
  std::unique_ptr<ChildProcess> process_;
  long index_ = 0;
};

/// One request/response exchange. Returns the raw (un-oriented) value.
double external_evaluate(ChildProcess& endpoint, const SearchSpace& space, const Configuration& x,
                         const std::string& run_id, long index, std::chrono::milliseconds timeout);

}  // namespace boinit
