#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace grreg {

// All numerical thresholds live here so a report can echo exactly what
// was used. Defaults are the documented ones; a config file may override
// any subset of keys.
struct Config {
  // finite-dimensional linear algebra
  double rank_tol = 1e-10;          // singular value threshold for rank/nullspace
  double graph_angle_tol = 1e-8;    // min principal angle to 0+F for "is a graph"
  double axiom_tol = 1e-10;         // AB-axiom residuals (matrices)
  double roundtrip_tol = 1e-9;      // transform round trips
  double psd_clamp = 1e-12;         // negative eigenvalues above -psd_clamp are clamped
  double kernel_tol = 1e-12;        // min singular value for ker = {0}
  double commute_tol = 1e-8;        // joint diagonalisation residual

  // symbol classifier
  double tol_lim = 1e-6;
  double blowup = 1e6;
  double osc_rel = 1e-3;
  int approach_steps = 40;
  int tail_window = 10;
  double vanish_tol = 1e-8;         // "f vanishes at a point"
  double symbol_tol = 1e-9;         // pointwise symbol identities
  int grid_points = 10000;

  // C0 / Cb / C0~ class checks at infinity
  double window_R = 1e4;
  double infinity_vanish = 1e-4;
  double bounded_cap = 1e6;

  // Toeplitz
  int circle_samples = 2048;
  double fr_tol = 1e-8;
  double circle_root_tol = 1e-7;
  double inner_root_tol = 1e-9;
  double coprime_tol = 1e-7;
  int max_degree = 24;

  // experiments
  double spectrum_tol = 1e-8;
  double core_fraction = 0.5;       // compact blocks live on the inner index core
  int weyl_eps_floor_cells = 8;

  std::uint64_t seed = 42;

  nlohmann::json to_json() const;
  static Config from_json(const nlohmann::json& j);
  static Config load(const std::string& path);
};

}  // namespace grreg
