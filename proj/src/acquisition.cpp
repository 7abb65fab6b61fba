#include "boinit/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "boinit/normal.hpp"

namespace boinit {
namespace {

constexpr double kInvGolden = 0.6180339887498949;
constexpr int kStepsPerLine = 10;

double ei_at(const GpModel& model, const Eigen::VectorXd& u, double incumbent) {
  const Prediction p = model.posterior(u);
  return expected_improvement(p.mean, std::sqrt(p.variance), incumbent);
}

// Coordinate-wise golden section in a shrinking window around `u`.
// Only strict improvements move the point.
double refine(const GpModel& model, Eigen::VectorXd& u, double value, double incumbent, double radius,
              int budget) {
  const auto d = u.size();
  int iterations = 0;
  Eigen::Index coord = 0;
  Eigen::VectorXd probe = u;
  while (iterations < budget) {
    double a = std::max(0.0, u[coord] - radius);
    double b = std::min(1.0, u[coord] + radius);
    probe = u;
    const auto at = [&](double t) {
      probe[coord] = t;
      return ei_at(model, probe, incumbent);
    };
    double c = b - kInvGolden * (b - a);
    double e = a + kInvGolden * (b - a);
    double fc = at(c);
    double fe = at(e);
    for (int s = 0; s < kStepsPerLine && iterations < budget; ++s, ++iterations) {
      if (fc >= fe) {
        b = e;
        e = c;
        fe = fc;
        c = b - kInvGolden * (b - a);
        fc = at(c);
      } else {
        a = c;
        c = e;
        fc = fe;
        e = a + kInvGolden * (b - a);
        fe = at(e);
      }
    }
    const bool left = fc >= fe;
    const double cand_value = left ? fc : fe;
    if (cand_value > value) {
      value = cand_value;
      u[coord] = left ? c : e;
    }
    if (++coord == d) {
      coord = 0;
      radius *= 0.5;
    }
  }
  return value;
}

}  // namespace

double expected_improvement(double mean, double std, double incumbent) {
  if (!std::isfinite(mean) || !std::isfinite(std) || !std::isfinite(incumbent))
    throw std::invalid_argument("expected_improvement: non-finite input");
  if (std < 0.0) throw std::invalid_argument("expected_improvement: negative std");
  const double diff = mean - incumbent;
  if (std == 0.0) return std::max(diff, 0.0);
  const double z = diff / std;
  // EI = std * tau(z) with tau(z) = z Phi(z) + phi(z) and tau(z) = z + tau(-z).
  // Evaluating tau on the non-positive side keeps EI >= max(diff, 0) exactly.
  if (z >= 0.0) {
    const double tail = std::max(normal_pdf(z) - z * normal_sf(z), 0.0);
    return diff + std * tail;
  }
  return std::max(std * (z * normal_cdf(z) + normal_pdf(z)), 0.0);
}

AcquisitionResult maximize_unit(const GpModel& model, double incumbent, Rng& rng,
                                const AcquisitionOptions& options) {
  const auto d = static_cast<Eigen::Index>(model.dimension());
  const std::size_t count = options.candidates > 0 ? options.candidates : 1000 * static_cast<std::size_t>(d);
  const auto m = static_cast<Eigen::Index>(count);

  Eigen::MatrixXd candidates(m, d);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < d; ++j) candidates(i, j) = rng.uniform();

  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
  model.posterior(candidates, mean, variance);
  std::vector<double> scores(count);
  for (Eigen::Index i = 0; i < m; ++i)
    scores[static_cast<std::size_t>(i)] = expected_improvement(mean[i], std::sqrt(variance[i]), incumbent);

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t starts = std::min(std::max<std::size_t>(options.starts, 1), count);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
                    });

  const double radius =
      std::max(0.02, 2.0 * std::pow(static_cast<double>(count), -1.0 / static_cast<double>(d)));

  AcquisitionResult best;
  std::size_t best_index = count;
  for (std::size_t s = 0; s < starts; ++s) {
    const std::size_t idx = order[s];
    Eigen::VectorXd u = candidates.row(static_cast<Eigen::Index>(idx)).transpose();
    const double value = refine(model, u, scores[idx], incumbent, radius, options.refine_iterations);
    if (best_index == count || value > best.value || (value == best.value && idx < best_index)) {
      best.unit = std::move(u);
      best.value = value;
      best_index = idx;
    }
  }
  return best;
}

Configuration maximize(const GpModel& model, const SearchSpace& space, double incumbent, Rng& rng,
                       std::size_t budget) {
  if (budget < 1) throw std::invalid_argument("maximize: budget must be >= 1");
  if (model.dimension() != space.dimension()) throw std::invalid_argument("maximize: dimension mismatch");
  AcquisitionOptions options;
  options.candidates = budget;
  const AcquisitionResult r = maximize_unit(model, incumbent, rng, options);
  return from_unit(space, r.unit.cwiseMax(0.0).cwiseMin(1.0));
}

}  // namespace boinit
