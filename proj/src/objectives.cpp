#include "boinit/objectives.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "boinit/errors.hpp"
#include "boinit/rng.hpp"

namespace boinit {
namespace {

using C = LandscapeConstants;

double squared_distance(const Eigen::Ref<const Eigen::VectorXd>& u, const std::vector<double>& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double diff = u[static_cast<Eigen::Index>(i)] - m[i];
    s += diff * diff;
  }
  return s;
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  return squared_distance(Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size())), b);
}

double bump(double r2, double width) { return std::exp(-r2 / (2.0 * width * width)); }

double ridge_penalty(const Eigen::Ref<const Eigen::VectorXd>& u, const std::vector<double>& m) {
  double h = squared_distance(u, m);
  for (std::size_t i = 0; i < m.size(); ++i)
    h += C::ridge_weight * (1.0 - std::cos(2.0 * std::numbers::pi * C::ridge_frequency *
                                           (u[static_cast<Eigen::Index>(i)] - m[i])));
  return h;
}

}  // namespace

std::string to_string(SyntheticFunction f) {
  switch (f) {
    case SyntheticFunction::sphere_bowl: return "sphere_bowl";
    case SyntheticFunction::two_basin: return "two_basin";
    case SyntheticFunction::ridged_multimodal: return "ridged_multimodal";
  }
  return "unknown";
}

SyntheticFunction parse_synthetic_function(const std::string& name) {
  if (name == "sphere_bowl") return SyntheticFunction::sphere_bowl;
  if (name == "two_basin") return SyntheticFunction::two_basin;
  if (name == "ridged_multimodal") return SyntheticFunction::ridged_multimodal;
  throw ConfigError("unknown synthetic function '" + name + "'");
}

SyntheticObjective::SyntheticObjective(std::string id, SyntheticSpec spec)
    : id_(std::move(id)), spec_(std::move(spec)), space_(SearchSpace::unit_cube(spec_.default_location)) {
  check_spec();
}

SyntheticObjective::SyntheticObjective(std::string id, SyntheticSpec spec, SearchSpace space)
    : id_(std::move(id)), spec_(std::move(spec)), space_(std::move(space)) {
  const Eigen::VectorXd d = to_unit(space_, default_configuration(space_));
  spec_.default_location.assign(d.data(), d.data() + d.size());
  check_spec();
}

void SyntheticObjective::check_spec() {
  const auto fail = [&](const std::string& msg) { throw ConfigError("synthetic '" + id_ + "': " + msg); };
  const std::size_t d = spec_.optimum.size();
  if (d == 0) fail("optimum location is empty");
  if (spec_.default_location.size() != d || space_.dimension() != d) fail("dimension mismatch");
  for (std::size_t i = 0; i < d; ++i) {
    for (double v : {spec_.optimum[i], spec_.default_location[i]})
      if (!(v >= 0.0 && v <= 1.0)) fail("locations must lie in the unit cube");
  }
  if (!(spec_.gap >= 0.0) || !std::isfinite(spec_.gap)) fail("gap must be >= 0");

  const double dist2 = squared_distance(spec_.default_location, spec_.optimum);
  switch (spec_.function) {
    case SyntheticFunction::sphere_bowl:
      if (spec_.gap > 0.0 && dist2 == 0.0) fail("positive gap needs default != optimum");
      if (spec_.gap == 0.0 && dist2 > 0.0) fail("zero gap needs default == optimum");
      scale_ = spec_.gap > 0.0 ? spec_.gap / dist2 : 1.0;
      break;
    case SyntheticFunction::two_basin: {
      const double a = C::optimum_value - C::two_basin_floor;
      const double b = a - spec_.gap;
      if (!(b > 0.0)) fail("gap must be below " + std::to_string(a));
      if (b < a * bump(dist2, C::two_basin_optimum_width))
        fail("default basin is swallowed by the optimum basin; move the default away or shrink the gap");
      break;
    }
    case SyntheticFunction::ridged_multimodal: {
      const Eigen::Map<const Eigen::VectorXd> dl(spec_.default_location.data(), static_cast<Eigen::Index>(d));
      const double h = ridge_penalty(dl, spec_.optimum);
      if (spec_.gap > 0.0 && h == 0.0) fail("positive gap needs default != optimum");
      if (spec_.gap == 0.0 && h > 0.0) fail("zero gap needs default == optimum");
      scale_ = spec_.gap > 0.0 ? spec_.gap / h : 1.0;
      break;
    }
  }
}

double SyntheticObjective::evaluate_unit(const Eigen::Ref<const Eigen::VectorXd>& u) const {
  if (static_cast<std::size_t>(u.size()) != spec_.optimum.size())
    throw std::invalid_argument("synthetic objective: dimension mismatch");
  switch (spec_.function) {
    case SyntheticFunction::sphere_bowl:
      return C::optimum_value - scale_ * squared_distance(u, spec_.optimum);
    case SyntheticFunction::two_basin: {
      const double a = C::optimum_value - C::two_basin_floor;
      const double b = a - spec_.gap;
      const double g_opt = a * bump(squared_distance(u, spec_.optimum), C::two_basin_optimum_width);
      const double g_def = b * bump(squared_distance(u, spec_.default_location), C::two_basin_default_width);
      return C::two_basin_floor + std::max(g_opt, g_def);
    }
    case SyntheticFunction::ridged_multimodal:
      return C::optimum_value - scale_ * ridge_penalty(u, spec_.optimum);
  }
  return 0.0;
}

double SyntheticObjective::evaluate(const Configuration& x) { return evaluate_unit(to_unit(space_, x)); }

NegatedObjective::NegatedObjective(std::unique_ptr<Objective> base) : base_(std::move(base)) {
  if (!base_) throw std::invalid_argument("NegatedObjective: null base");
}

double NegatedObjective::evaluate(const Configuration& x) { return -base_->evaluate(x); }

CvObjective::CvObjective(std::unique_ptr<Objective> base, int folds, double noise_scale, std::uint64_t fold_seed)
    : base_(std::move(base)), folds_(folds), noise_scale_(noise_scale), fold_seed_(fold_seed) {
  if (!base_) throw std::invalid_argument("cv_wrap: null base");
  if (folds_ < 1) throw ConfigError("cv_wrap: fold count must be >= 1");
  if (!(noise_scale_ >= 0.0) || !std::isfinite(noise_scale_)) throw ConfigError("cv_wrap: noise scale must be >= 0");
}

double CvObjective::fold_noise(const Configuration& x, int fold) const {
  if (noise_scale_ == 0.0) return 0.0;
  std::uint64_t h = splitmix64(fold_seed_);
  for (double v : x.values) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v));
  h = splitmix64(h ^ static_cast<std::uint64_t>(fold));
  const std::uint64_t h2 = splitmix64(h);
  const double u1 = (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = (static_cast<double>(h2 >> 11) + 0.5) * 0x1.0p-53;
  // Box-Muller.
  return noise_scale_ * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double CvObjective::evaluate(const Configuration& x) {
  const double base = base_->evaluate(x);
  double noise = 0.0;
  for (int j = 1; j <= folds_; ++j) noise += fold_noise(x, j);
  return base + noise / folds_;
}

std::unique_ptr<Objective> cv_wrap(std::unique_ptr<Objective> base, int folds, double noise_scale,
                                   std::uint64_t fold_seed) {
  return std::make_unique<CvObjective>(std::move(base), folds, noise_scale, fold_seed);
}

ExternalObjective::ExternalObjective(std::string id, SearchSpace space, std::string command, std::string run_id,
                                     Orientation orientation, std::chrono::milliseconds timeout)
    : id_(std::move(id)),
      space_(std::move(space)),
      command_(std::move(command)),
      run_id_(std::move(run_id)),
      orientation_(orientation),
      timeout_(timeout) {
  if (command_.empty()) throw ConfigError("external objective '" + id_ + "' has no command");
}

double ExternalObjective::evaluate(const Configuration& x) {
  if (!process_) process_ = std::make_unique<ChildProcess>(command_);
  const double raw = external_evaluate(*process_, space_, x, run_id_, ++index_, timeout_);
  return orientation_ == Orientation::minimize ? -raw : raw;
}

double external_evaluate(ChildProcess& endpoint, const SearchSpace& space, const Configuration& x,
                         const std::string& run_id, long index, std::chrono::milliseconds timeout) {
  const std::string where = describe(space, x);
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < space.dimension(); ++i) config[space[i].name] = x[i];
  const nlohmann::ordered_json request{{"run", run_id}, {"index", index}, {"config", config}};
  try {
    endpoint.write_line(request.dump());
  } catch (const Error& e) {
    throw EvaluationError(std::string("evaluator unavailable: ") + e.what(), where);
  }

  const auto line = endpoint.read_line(timeout);
  if (!line) {
    if (endpoint.timed_out()) {
      endpoint.kill();
      throw TimeoutError("evaluator timed out after " + std::to_string(timeout.count()) + " ms", where);
    }
    throw EvaluationError("evaluator closed its output", where);
  }

  nlohmann::json response;
  try {
    response = nlohmann::json::parse(*line);
  } catch (const nlohmann::json::parse_error&) {
    throw ProtocolError("malformed evaluator response: " + *line, where, *line);
  }
  if (!response.is_object() || !response.contains("index") || !response.contains("value") ||
      !response["index"].is_number_integer())
    throw ProtocolError("malformed evaluator response: " + *line, where, *line);
  if (response["index"].get<long>() != index)
    throw ProtocolError("evaluator answered index " + response["index"].dump() + ", expected " +
                            std::to_string(index) + ": " + *line,
                        where, *line);

  double value;
  const auto& v = response["value"];
  if (v.is_number()) {
    value = v.get<double>();
  } else if (v.is_string()) {
    const auto s = v.get<std::string>();
    char* end = nullptr;
    value = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
      throw ProtocolError("malformed evaluator value: " + *line, where, *line);
  } else {
    throw ProtocolError("malformed evaluator value: " + *line, where, *line);
  }
  if (!std::isfinite(value)) throw EvaluationError("evaluator returned a non-finite value", where);
  return value;
}

}  // namespace boinit
