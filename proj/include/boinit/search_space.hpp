#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace boinit {

enum class Scale { linear, logarithmic };
enum class Kind { continuous, integer };

/// One bounded hyperparameter with its library default.
struct Parameter {
  std::string name;
  Scale scale = Scale::linear;
  Kind kind = Kind::continuous;
  double lower = 0.0;
  double upper = 1.0;
  double default_value = 0.0;
};

/// A point in raw (untransformed) parameter units.
struct Configuration {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const Configuration&) const = default;
};

struct Violation {
  std::string parameter;
  std::string message;
};

/// Ordered, validated list of parameters. Construction throws ConfigError if
/// any parameter invariant is broken, so a SearchSpace value is always sound.
class SearchSpace {
 public:
  SearchSpace() = default;
  explicit SearchSpace(std::vector<Parameter> parameters);

  std::size_t dimension() const noexcept { return parameters_.size(); }
  const std::vector<Parameter>& parameters() const noexcept { return parameters_; }
  const Parameter& operator[](std::size_t i) const { return parameters_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Parameters x1..xd on [0, 1], linear, continuous, with the given defaults.
  static SearchSpace unit_cube(const std::vector<double>& defaults);

 private:
  std::vector<Parameter> parameters_;
};

/// Empty result means the configuration is valid.
std::vector<Violation> validate(const SearchSpace& space, const Configuration& x);

/// Coordinate on the parameter's own scale: identity for linear, ln for logarithmic.
double transformed(const Parameter& p, double value);
double untransformed(const Parameter& p, double t);

double to_unit_coordinate(const Parameter& p, double value);
/// Inverse of to_unit_coordinate; integer parameters are rounded and every
/// result is clamped into [lower, upper].
double from_unit_coordinate(const Parameter& p, double u);

/// Throws ConfigError when x fails validate.
Eigen::VectorXd to_unit(const SearchSpace& space, const Configuration& x);
/// Throws ConfigError when u leaves the unit cube.
Configuration from_unit(const SearchSpace& space, const Eigen::Ref<const Eigen::VectorXd>& u);

Configuration default_configuration(const SearchSpace& space);

/// Rounds integer coordinates and clamps into bounds.
Configuration snap(const SearchSpace& space, Configuration x);

SearchSpace parse_search_space(const nlohmann::json& doc);
SearchSpace load_search_space(const std::filesystem::path& path);
nlohmann::json to_json(const SearchSpace& space);

std::string describe(const SearchSpace& space, const Configuration& x);

}  // namespace boinit
