#include "grreg/config.hpp"

#include <fstream>

#include "grreg/error.hpp"

namespace grreg {

#define GRREG_CONFIG_FIELDS(X)                                                             \
  X(rank_tol) X(graph_angle_tol) X(axiom_tol) X(roundtrip_tol) X(psd_clamp) X(kernel_tol)   \
  X(commute_tol) X(tol_lim) X(blowup) X(osc_rel) X(approach_steps) X(tail_window)           \
  X(vanish_tol) X(symbol_tol) X(grid_points) X(window_R) X(infinity_vanish) X(bounded_cap)  \
  X(circle_samples) X(fr_tol) X(circle_root_tol) X(inner_root_tol) X(coprime_tol)           \
  X(max_degree) X(spectrum_tol) X(core_fraction) X(weyl_eps_floor_cells) X(seed)

nlohmann::json Config::to_json() const {
  nlohmann::json j;
#define X(name) j[#name] = name;
  GRREG_CONFIG_FIELDS(X)
#undef X
  return j;
}

Config Config::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidInput, "config must be a JSON object");
  Config c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
#define X(name)                                     \
  if (it.key() == #name) {                          \
    c.name = it.value().get<decltype(c.name)>();    \
    known = true;                                   \
  }
    GRREG_CONFIG_FIELDS(X)
#undef X
    if (!known) throw Error(Errc::InvalidInput, "unknown config key '" + it.key() + "'");
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidInput, "cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidInput, std::string("config: ") + e.what());
  }
  return from_json(j);
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DescriptorMismatch: return "DescriptorMismatch";
    case Errc::NotEssentialDomain: return "NotEssentialDomain";
    case Errc::NotOrthogonallyClosed: return "NotOrthogonallyClosed";
    case Errc::NotGraphRegular: return "NotGraphRegular";
    case Errc::AxiomsFailed: return "AxiomsFailed";
    case Errc::KernelNotTrivial: return "KernelNotTrivial";
    case Errc::RangeNotOrthoClosed: return "RangeNotOrthoClosed";
    case Errc::NotNormal: return "NotNormal";
    case Errc::NonCommutingPair: return "NonCommutingPair";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::DeclarationMismatch: return "DeclarationMismatch";
    case Errc::Inconclusive: return "Inconclusive";
    case Errc::UnverifiedDeclaration: return "UnverifiedDeclaration";
    case Errc::ClassCheckFailed: return "ClassCheckFailed";
    case Errc::CircleRoot: return "CircleRoot";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::InnerRoot: return "InnerRoot";
    case Errc::DegreeTooLarge: return "DegreeTooLarge";
    case Errc::LambdaInSpectrum: return "LambdaInSpectrum";
    case Errc::EpsilonBelowGrid: return "EpsilonBelowGrid";
    case Errc::BadParameters: return "BadParameters";
    case Errc::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace grreg
