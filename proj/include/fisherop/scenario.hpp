#pragma once

// Scenario files: JSON descriptions of (Hamiltonian, probe, basis, theta)
// accepted by the command-line tool. Four kinds are supported:
//   explicit     - matrices given entry by entry as [re, im] pairs
//   qubit        - two-level model from (lambda1, lambda2, alpha, gamma, chi)
//   noon         - spin-j rotation probed by an extremal y-eigenket pair
//   phase_state  - spin-j rotation probed by the flat superposition
// Validation errors always name the offending field.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <fisherop/core.hpp>
#include <fisherop/fisher.hpp>
#include <fisherop/qubit.hpp>
#include <fisherop/su2.hpp>
#include <fisherop/table.hpp>

namespace fisherop {

struct ScenarioConfig {
  std::string kind;

  // explicit
  Matrix hamiltonian;
  Vector probe;
  Matrix basis_kets;
  bool optimize_basis = false;

  // qubit
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double chi = 0.0;

  // noon / phase_state
  double spin_j = 0.0;
  double su2_phase = 0.0;      // chi for noon, zeta for phase_state
  double xi = 0.0;             // relative phase of the paired-ket basis
  std::string su2_basis = "jz";

  std::vector<double> thetas;  // resolved grid; size 1 for a single theta
  std::uint64_t seed = 1;
  Tolerances tolerances;
  std::uint64_t content_hash = 0;
};

namespace detail {

[[noreturn]] inline void scenario_error(const std::string& message) {
  throw std::invalid_argument("scenario: " + message);
}

inline const nlohmann::json& require_field(const nlohmann::json& root, const std::string& name) {
  if (!root.contains(name)) scenario_error("missing required field '" + name + "'");
  return root.at(name);
}

inline double finite_number(const nlohmann::json& value, const std::string& field) {
  if (!value.is_number()) scenario_error("field '" + field + "' must be a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) scenario_error("field '" + field + "' must be finite");
  return x;
}

inline double number_field(const nlohmann::json& root, const std::string& name) {
  return finite_number(require_field(root, name), name);
}

inline double number_or(const nlohmann::json& root, const std::string& name, double fallback) {
  if (!root.contains(name)) return fallback;
  return finite_number(root.at(name), name);
}

inline Complex complex_entry(const nlohmann::json& value, const std::string& field) {
  if (!value.is_array() || value.size() != 2)
    scenario_error("field '" + field + "' must be a [re, im] pair");
  return {finite_number(value.at(0), field), finite_number(value.at(1), field)};
}

inline Vector parse_vector(const nlohmann::json& value, const std::string& field) {
  if (!value.is_array() || value.empty())
    scenario_error("field '" + field + "' must be a non-empty array of [re, im] pairs");
  Vector out(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i)
    out(static_cast<Eigen::Index>(i)) =
        complex_entry(value.at(i), field + "[" + std::to_string(i) + "]");
  return out;
}

// Row-major: json[r][c] lands in M(r, c). Basis kets are the columns.
inline Matrix parse_matrix(const nlohmann::json& value, const std::string& field) {
  if (!value.is_array() || value.empty())
    scenario_error("field '" + field + "' must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(value.size());
  Matrix out(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = value.at(static_cast<std::size_t>(r));
    const std::string label = field + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows)
      scenario_error("field '" + label + "' must have " + std::to_string(rows) +
                     " entries (square matrix)");
    for (Eigen::Index c = 0; c < rows; ++c)
      out(r, c) = complex_entry(row.at(static_cast<std::size_t>(c)),
                                label + "[" + std::to_string(c) + "]");
  }
  return out;
}

inline void check_known_fields(const nlohmann::json& root, const std::set<std::string>& allowed) {
  for (const auto& item : root.items())
    if (!allowed.count(item.key())) scenario_error("unknown field '" + item.key() + "'");
}

inline std::vector<double> parse_thetas(const nlohmann::json& root) {
  const bool has_single = root.contains("theta");
  const bool has_grid = root.contains("theta_grid");
  if (has_single == has_grid)
    scenario_error("exactly one of fields 'theta' and 'theta_grid' is required");
  if (has_single) return {number_field(root, "theta")};

  const auto& grid = root.at("theta_grid");
  if (!grid.is_object()) scenario_error("field 'theta_grid' must be an object");
  check_known_fields(grid, {"start", "stop", "points"});
  const double start = finite_number(require_field(grid, "start"), "theta_grid.start");
  const double stop = finite_number(require_field(grid, "stop"), "theta_grid.stop");
  const auto& points_json = require_field(grid, "points");
  if (!points_json.is_number_integer())
    scenario_error("field 'theta_grid.points' must be an integer");
  const auto points = points_json.get<long long>();
  if (points < 1) scenario_error("field 'theta_grid.points' must be >= 1");

  std::vector<double> thetas(static_cast<std::size_t>(points));
  if (points == 1) {
    thetas[0] = start;
  } else {
    const double step = (stop - start) / static_cast<double>(points - 1);
    for (long long i = 0; i < points; ++i) thetas[static_cast<std::size_t>(i)] = start + step * static_cast<double>(i);
    thetas.back() = stop;  // endpoint inclusive, immune to rounding drift
  }
  return thetas;
}

inline Tolerances parse_tolerances(const nlohmann::json& root) {
  Tolerances tol = default_tolerances();
  if (!root.contains("tolerances")) return tol;
  const auto& block = root.at("tolerances");
  if (!block.is_object()) scenario_error("field 'tolerances' must be an object");
  for (const auto& item : block.items()) {
    const double value = finite_number(item.value(), "tolerances." + item.key());
    if (value <= 0.0) scenario_error("field 'tolerances." + item.key() + "' must be positive");
    if (item.key() == "hermiticity") tol.hermiticity = value;
    else if (item.key() == "unitarity") tol.unitarity = value;
    else if (item.key() == "reconstruction") tol.reconstruction = value;
    else if (item.key() == "state_norm") tol.state_norm = value;
    else if (item.key() == "degenerate_amplitude") tol.degenerate_amplitude = value;
    else if (item.key() == "probability_floor") tol.probability_floor = value;
    else if (item.key() == "fd_step") tol.fd_step = value;
    else scenario_error("unknown tolerance field '" + item.key() + "'");
  }
  return tol;
}

inline std::uint64_t parse_seed(const nlohmann::json& root) {
  if (!root.contains("seed")) return 1;
  const auto& value = root.at("seed");
  if (!value.is_number_integer() || value.is_number_float() || value.get<long long>() < 0)
    scenario_error("field 'seed' must be a non-negative integer");
  return value.get<std::uint64_t>();
}

inline std::string parse_su2_basis(const nlohmann::json& root) {
  if (!root.contains("basis")) return "jz";
  const auto& value = root.at("basis");
  if (!value.is_string())
    scenario_error("field 'basis' must be one of \"jz\", \"optimal_pair\", \"optimize\"");
  const std::string name = value.get<std::string>();
  if (name != "jz" && name != "optimal_pair" && name != "optimize")
    scenario_error("field 'basis' must be one of \"jz\", \"optimal_pair\", \"optimize\"");
  return name;
}

}  // namespace detail

inline ScenarioConfig parse_scenario(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    detail::scenario_error(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) detail::scenario_error("root must be a JSON object");

  ScenarioConfig cfg;
  cfg.content_hash = fnv1a64(text);

  const auto& kind_json = detail::require_field(root, "kind");
  if (!kind_json.is_string())
    detail::scenario_error("field 'kind' must be one of explicit, qubit, noon, phase_state");
  cfg.kind = kind_json.get<std::string>();

  auto allowed = std::set<std::string>{"kind", "theta", "theta_grid", "seed", "tolerances"};
  if (cfg.kind == "explicit") {
    allowed.insert({"hamiltonian", "probe", "basis"});
  } else if (cfg.kind == "qubit") {
    allowed.insert({"lambda1", "lambda2", "alpha", "gamma", "chi"});
  } else if (cfg.kind == "noon" || cfg.kind == "phase_state") {
    allowed.insert({"j", "basis", "xi"});
    allowed.insert(cfg.kind == "noon" ? "chi" : "zeta");
  } else {
    detail::scenario_error("field 'kind' must be one of explicit, qubit, noon, phase_state");
  }
  detail::check_known_fields(root, allowed);
  cfg.thetas = detail::parse_thetas(root);
  cfg.seed = detail::parse_seed(root);
  cfg.tolerances = detail::parse_tolerances(root);

  if (cfg.kind == "explicit") {
    cfg.hamiltonian = detail::parse_matrix(detail::require_field(root, "hamiltonian"), "hamiltonian");
    cfg.probe = detail::parse_vector(detail::require_field(root, "probe"), "probe");
    const auto& basis = detail::require_field(root, "basis");
    if (basis.is_string()) {
      if (basis.get<std::string>() != "optimize")
        detail::scenario_error("field 'basis' must be a matrix or the string \"optimize\"");
      cfg.optimize_basis = true;
    } else {
      cfg.basis_kets = detail::parse_matrix(basis, "basis");
      if (cfg.basis_kets.rows() != cfg.hamiltonian.rows())
        detail::scenario_error("field 'basis' must match the hamiltonian dimension");
    }
    if (cfg.probe.size() != cfg.hamiltonian.rows())
      detail::scenario_error("field 'probe' must match the hamiltonian dimension");
  } else if (cfg.kind == "qubit") {
    cfg.lambda1 = detail::number_field(root, "lambda1");
    cfg.lambda2 = detail::number_field(root, "lambda2");
    cfg.alpha = detail::number_field(root, "alpha");
    cfg.gamma = detail::number_field(root, "gamma");
    cfg.chi = detail::number_field(root, "chi");
  } else {
    cfg.spin_j = detail::number_field(root, "j");
    if (cfg.spin_j <= 0.0) detail::scenario_error("field 'j' must be positive");
    cfg.su2_phase = detail::number_or(root, cfg.kind == "noon" ? "chi" : "zeta", 0.0);
    cfg.xi = detail::number_or(root, "xi", 0.0);
    cfg.su2_basis = detail::parse_su2_basis(root);
    cfg.optimize_basis = cfg.su2_basis == "optimize";
  }
  return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) detail::scenario_error("cannot open file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

// A runnable scenario; when optimize_basis is set the embedded basis is a
// placeholder and the caller is expected to search for one.
struct BuiltScenario {
  Scenario scenario;
  bool optimize_basis = false;
};

inline BuiltScenario build_scenario(const ScenarioConfig& cfg) {
  const Tolerances& tol = cfg.tolerances;
  try {
    if (cfg.kind == "explicit") {
      HermitianOperator h(cfg.hamiltonian, tol);
      PureState probe = PureState::normalized(cfg.probe);
      MeasurementBasis basis = cfg.optimize_basis
                                   ? MeasurementBasis::computational(h.dim())
                                   : MeasurementBasis(cfg.basis_kets, tol);
      return {Scenario{std::move(h), std::move(probe), std::move(basis)}, cfg.optimize_basis};
    }
    if (cfg.kind == "qubit") {
      QubitScenario q;
      q.lambda1 = cfg.lambda1;
      q.lambda2 = cfg.lambda2;
      q.alpha = cfg.alpha;
      q.gamma = cfg.gamma;
      q.chi = cfg.chi;
      q.theta = cfg.thetas.front();
      return {qubit_numeric(q), false};
    }
    const SpinSystem sys = spin_operators(cfg.spin_j);
    PureState probe = cfg.kind == "noon" ? noon_state(sys, cfg.su2_phase)
                                         : phase_state(sys, cfg.su2_phase);
    MeasurementBasis basis = MeasurementBasis::computational(sys.dim);
    if (cfg.su2_basis == "optimal_pair") basis = noon_pair_basis(sys, cfg.xi);
    return {Scenario{sys.jy, std::move(probe), std::move(basis)}, cfg.optimize_basis};
  } catch (const std::invalid_argument& e) {
    detail::scenario_error(std::string("kind '") + cfg.kind + "': " + e.what());
  }
}

}  // namespace fisherop
