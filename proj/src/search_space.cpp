#include "boinit/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "boinit/errors.hpp"

namespace boinit {
namespace {

bool is_whole(double v) { return std::isfinite(v) && std::floor(v) == v; }

void check_parameter(const Parameter& p) {
  const auto fail = [&](const std::string& msg) {
    throw ConfigError("parameter '" + p.name + "': " + msg);
  };
  if (p.name.empty()) throw ConfigError("parameter with empty name");
  if (!std::isfinite(p.lower) || !std::isfinite(p.upper) || !std::isfinite(p.default_value))
    fail("bounds and default must be finite");
  if (!(p.lower < p.upper)) fail("lower must be < upper");
  if (p.default_value < p.lower || p.default_value > p.upper) fail("default outside [lower, upper]");
  if (p.scale == Scale::logarithmic && !(p.lower > 0.0)) fail("logarithmic scale needs lower > 0");
  if (p.kind == Kind::integer &&
      !(is_whole(p.lower) && is_whole(p.upper) && is_whole(p.default_value)))
    fail("integer parameter needs whole-number bounds and default");
}

std::string scale_name(Scale s) { return s == Scale::linear ? "linear" : "logarithmic"; }
std::string kind_name(Kind k) { return k == Kind::continuous ? "continuous" : "integer"; }

}  // namespace

SearchSpace::SearchSpace(std::vector<Parameter> parameters) : parameters_(std::move(parameters)) {
  if (parameters_.empty()) throw ConfigError("search space needs at least one parameter");
  std::set<std::string> names;
  for (const auto& p : parameters_) {
    check_parameter(p);
    if (!names.insert(p.name).second) throw ConfigError("duplicate parameter name '" + p.name + "'");
  }
}

std::optional<std::size_t> SearchSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < parameters_.size(); ++i)
    if (parameters_[i].name == name) return i;
  return std::nullopt;
}

SearchSpace SearchSpace::unit_cube(const std::vector<double>& defaults) {
  std::vector<Parameter> params;
  params.reserve(defaults.size());
  for (std::size_t i = 0; i < defaults.size(); ++i)
    params.push_back({"x" + std::to_string(i + 1), Scale::linear, Kind::continuous, 0.0, 1.0, defaults[i]});
  return SearchSpace(std::move(params));
}

std::vector<Violation> validate(const SearchSpace& space, const Configuration& x) {
  std::vector<Violation> out;
  if (x.size() != space.dimension()) {
    out.push_back({"", "expected " + std::to_string(space.dimension()) + " values, got " +
                           std::to_string(x.size())});
    return out;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& p = space[i];
    const double v = x[i];
    if (!std::isfinite(v)) {
      out.push_back({p.name, "value is not finite"});
      continue;
    }
    if (v < p.lower || v > p.upper) {
      std::ostringstream msg;
      msg << "value " << v << " outside [" << p.lower << ", " << p.upper << "]";
      out.push_back({p.name, msg.str()});
    }
    if (p.kind == Kind::integer && !is_whole(v)) out.push_back({p.name, "integer parameter holds a fraction"});
  }
  return out;
}

double transformed(const Parameter& p, double value) {
  return p.scale == Scale::logarithmic ? std::log(value) : value;
}

double untransformed(const Parameter& p, double t) {
  return p.scale == Scale::logarithmic ? std::exp(t) : t;
}

double to_unit_coordinate(const Parameter& p, double value) {
  const double lo = transformed(p, p.lower);
  const double hi = transformed(p, p.upper);
  return (transformed(p, value) - lo) / (hi - lo);
}

double from_unit_coordinate(const Parameter& p, double u) {
  double v;
  if (u <= 0.0) {
    v = p.lower;
  } else if (u >= 1.0) {
    v = p.upper;
  } else {
    const double lo = transformed(p, p.lower);
    const double hi = transformed(p, p.upper);
    v = untransformed(p, lo + u * (hi - lo));
  }
  if (p.kind == Kind::integer) v = std::round(v);
  return std::clamp(v, p.lower, p.upper);
}

Eigen::VectorXd to_unit(const SearchSpace& space, const Configuration& x) {
  if (const auto violations = validate(space, x); !violations.empty()) {
    const auto& v = violations.front();
    throw ConfigError("invalid configuration: " + (v.parameter.empty() ? "" : v.parameter + ": ") + v.message);
  }
  Eigen::VectorXd u(static_cast<Eigen::Index>(space.dimension()));
  for (std::size_t i = 0; i < space.dimension(); ++i)
    u[static_cast<Eigen::Index>(i)] = std::clamp(to_unit_coordinate(space[i], x[i]), 0.0, 1.0);
  return u;
}

Configuration from_unit(const SearchSpace& space, const Eigen::Ref<const Eigen::VectorXd>& u) {
  if (static_cast<std::size_t>(u.size()) != space.dimension())
    throw ConfigError("from_unit: dimension mismatch");
  Configuration x;
  x.values.resize(space.dimension());
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const double ui = u[static_cast<Eigen::Index>(i)];
    if (!(ui >= 0.0 && ui <= 1.0))
      throw ConfigError("from_unit: coordinate " + std::to_string(i) + " outside [0, 1]");
    x.values[i] = from_unit_coordinate(space[i], ui);
  }
  return x;
}

Configuration default_configuration(const SearchSpace& space) {
  Configuration x;
  x.values.reserve(space.dimension());
  for (const auto& p : space.parameters()) x.values.push_back(p.default_value);
  return x;
}

Configuration snap(const SearchSpace& space, Configuration x) {
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const auto& p = space[i];
    double v = x.values[i];
    if (p.kind == Kind::integer) v = std::round(v);
    x.values[i] = std::clamp(v, p.lower, p.upper);
  }
  return x;
}

SearchSpace parse_search_space(const nlohmann::json& doc) {
  const nlohmann::json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("parameters")) throw ConfigError("search space: missing 'parameters'");
    list = &doc.at("parameters");
  }
  if (!list->is_array()) throw ConfigError("search space: 'parameters' must be an array");
  std::vector<Parameter> params;
  for (const auto& entry : *list) {
    try {
      Parameter p;
      p.name = entry.at("name").get<std::string>();
      const auto scale = entry.value("scale", std::string("linear"));
      if (scale == "linear") p.scale = Scale::linear;
      else if (scale == "logarithmic" || scale == "log") p.scale = Scale::logarithmic;
      else throw ConfigError("parameter '" + p.name + "': unknown scale '" + scale + "'");
      const auto kind = entry.value("kind", std::string("continuous"));
      if (kind == "continuous") p.kind = Kind::continuous;
      else if (kind == "integer") p.kind = Kind::integer;
      else throw ConfigError("parameter '" + p.name + "': unknown kind '" + kind + "'");
      p.lower = entry.at("lower").get<double>();
      p.upper = entry.at("upper").get<double>();
      p.default_value = entry.at("default").get<double>();
      params.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("search space entry: ") + e.what());
    }
  }
  return SearchSpace(std::move(params));
}

SearchSpace load_search_space(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open search space file " + path.string());
  try {
    return parse_search_space(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

nlohmann::json to_json(const SearchSpace& space) {
  nlohmann::json params = nlohmann::json::array();
  for (const auto& p : space.parameters()) {
    params.push_back({{"name", p.name},
                      {"scale", scale_name(p.scale)},
                      {"kind", kind_name(p.kind)},
                      {"lower", p.lower},
                      {"upper", p.upper},
                      {"default", p.default_value}});
  }
  return {{"parameters", params}};
}

std::string describe(const SearchSpace& space, const Configuration& x) {
  std::ostringstream out;
  out.precision(17);
  out << '{';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out << ", ";
    out << (i < space.dimension() ? space[i].name : "?") << '=' << x[i];
  }
  out << '}';
  return out.str();
}

}  // namespace boinit
