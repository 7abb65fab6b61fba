#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "boinit/rng.hpp"
#include "boinit/search_space.hpp"
#include "boinit/surrogate.hpp"

namespace boinit {

/// Expected improvement of N(mean, std^2) over `incumbent` (maximization, no
/// exploration offset). Throws std::invalid_argument on non-finite input or
/// negative std.
double expected_improvement(double mean, double std, double incumbent);

struct AcquisitionResult {
  Eigen::VectorXd unit;  // maximizer in unit-cube coordinates
  double value = 0.0;    // EI at `unit`
};

struct AcquisitionOptions {
  /// Uniform candidates scored before refinement; 0 means 1000 * d.
  std::size_t candidates = 0;
  std::size_t starts = 5;
  int refine_iterations = 100;
};

/// Multi-start search for the EI maximizer over the unit cube: score uniform
/// candidates, refine the best `starts` by coordinate-wise golden section,
/// keep the highest refined value (lowest candidate index on ties).
AcquisitionResult maximize_unit(const GpModel& model, double incumbent, Rng& rng,
                                const AcquisitionOptions& options = {});

/// maximize_unit mapped back to a valid configuration of `space`.
Configuration maximize(const GpModel& model, const SearchSpace& space, double incumbent, Rng& rng,
                       std::size_t budget);

}  // namespace boinit
