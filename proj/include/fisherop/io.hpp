#pragma once

// JSON renderings of the result structs. Complex numbers are emitted as
// [re, im] pairs; basis matrices are flattened column by column, so ket k
// occupies entries [k*dim, (k+1)*dim).

#include <json.hpp>

#include <fisherop/estimation.hpp>
#include <fisherop/fisher.hpp>
#include <fisherop/optimize.hpp>

namespace fisherop {

inline nlohmann::json complex_pairs_json(const Vector& v) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back({v(i).real(), v(i).imag()});
  return out;
}

inline nlohmann::json kets_flat_json(const MeasurementBasis& basis) {
  auto out = nlohmann::json::array();
  for (int k = 0; k < basis.dim(); ++k) {
    const Vector ket = basis.ket(k);
    for (Eigen::Index i = 0; i < ket.size(); ++i)
      out.push_back({ket(i).real(), ket(i).imag()});
  }
  return out;
}

inline nlohmann::json to_json(const FisherReport& report) {
  nlohmann::json out;
  out["theta"] = report.theta;
  out["fisher_info"] = report.fisher_info;
  out["complement"] = report.complement;
  out["h2"] = report.h2_expectation;
  out["var_bound"] = report.variance_bound;
  out["seminorm_bound"] = report.seminorm_bound;
  out["singular"] = report.singular_point;
  auto outcomes = nlohmann::json::array();
  for (const auto& d : report.per_outcome) {
    nlohmann::json entry;
    entry["r"] = d.r;
    entry["phi"] = d.phi;
    entry["tau"] = d.tau;
    entry["tau_defined"] = d.tau_defined;
    entry["a"] = d.a;
    outcomes.push_back(entry);
  }
  out["per_outcome"] = outcomes;
  return out;
}

inline nlohmann::json to_json(const OptimizationResult& result) {
  nlohmann::json out;
  out["j_achieved"] = result.j_achieved;
  out["k_min"] = result.k_min;
  out["var_bound"] = result.variance_bound;
  out["seminorm_bound"] = result.seminorm_bound;
  out["restarts_used"] = result.restarts_used;
  out["converged"] = result.converged;
  out["probe_optimized"] = result.probe_optimized;
  out["stationarity_residual"] = result.stationarity_residual;
  out["extremal_overlap"] = result.extremal_overlap;
  out["degenerate_extremal"] = result.degenerate_extremal;
  out["probe"] = complex_pairs_json(result.probe.amplitudes());
  out["basis"] = kets_flat_json(result.basis);
  return out;
}

inline nlohmann::json to_json(const CramerRaoReport& report) {
  nlohmann::json out;
  out["n"] = report.n;
  out["t"] = report.t;
  out["j_true"] = report.j_true;
  out["bound"] = report.bound;
  out["empirical_variance"] = report.empirical_variance;
  out["ratio"] = report.ratio;
  out["bias"] = report.bias;
  out["checked"] = report.checked;
  out["floor_satisfied"] = report.floor_satisfied;
  out["ceiling_satisfied"] = report.ceiling_satisfied;
  out["boundary_hits"] = report.boundary_hits;
  return out;
}

}  // namespace fisherop
