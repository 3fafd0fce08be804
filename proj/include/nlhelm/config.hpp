#ifndef NLHELM_CONFIG_HPP_
#define NLHELM_CONFIG_HPP_

#include <string>
#include <vector>

#include "nlhelm/nonlin.hpp"
#include "nlhelm/solver.hpp"

namespace nlhelm {

/// Run configuration; the JSON schema is documented in the README. All
/// cross-constraints (lambda * spacing, 2 R0 <= r_max, admissibility) are
/// checked by validate_config before any compute.
struct RunConfig {
  // problem
  int n = 3;
  Real lambda = 1.0;
  RadialProfile potential = RadialProfile::constant(0.0);

  // incoming data: explicit modes, or a seeded random band-limited preset
  struct ModeEntry {
    Index l = 0, m = 0;
    Real re = 0, im = 0;
  };
  std::vector<ModeEntry> modes;
  bool random_data = false;
  unsigned seed = 1;
  Real f_norm = 1e-2;   // target ||f||_{H^{k+2}} of the random preset
  Index L_data = -1;    // band limit of the random data (< 0: use L)

  // nonlinearity: power-law preset and/or explicit monomials
  bool use_power_law = true;
  int p = 5;
  Complex alpha{1.0, 0.0};
  std::vector<Monomial> monomials;
  int declared_p = 0;

  // discretization
  Real r_min = 1.0, r_max = 120.0;
  Index radial_count = 2560;
  Grading grading = Grading::kUniform;
  Index L = 6;
  Real R0 = 2.0;

  // solver
  SolverConfig solver;

  // farfield
  FarFieldWindow window;

  // flow
  Index flow_count = 100;
  unsigned flow_seed = 2;
  Real flow_t_span = 15.0;
  Real flow_tol = 1e-10;
  Real weight_delta = 0.05;
  Real weight_margin = 0.2;

  // probe
  std::vector<Real> probe_scales = {0.32, 0.56, 1.0, 1.8, 3.2};

  // outputs
  std::string out_dir = "out";
  bool serial = false;
  std::vector<std::string> formats = {"csv", "field", "manifest"};

  bool wants(const std::string& fmt) const {
    for (const auto& f : formats)
      if (f == fmt) return true;
    return false;
  }
};

RunConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const RunConfig& cfg);

/// Reads a config file and applies dot-path overrides "a.b.c=value".
RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides = {});

void validate_config(const RunConfig& cfg);

NonlinearitySpec nonlinearity_from_config(const RunConfig& cfg);
AngularSpectrum incoming_from_config(const RunConfig& cfg,
                                     const AngularBasis& basis);
Problem problem_from_config(const RunConfig& cfg);

}  // namespace nlhelm

#endif  // NLHELM_CONFIG_HPP_
