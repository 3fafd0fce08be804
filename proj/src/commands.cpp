#include "nlhelm/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <random>

#include "nlhelm/io.hpp"

namespace nlhelm {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class StageClock {
 public:
  void start(const std::string& name) {
    name_ = name;
    t0_ = std::chrono::steady_clock::now();
  }
  void stop(json& timings) {
    const auto t1 = std::chrono::steady_clock::now();
    timings[name_] =
        std::chrono::duration<double>(t1 - t0_).count();
  }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point t0_;
};

std::string out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

json base_manifest(const RunConfig& cfg, const std::string& command) {
  json man;
  man["command"] = command;
  man["versions"] = {{"nlhelm", kVersion}, {"field_format", 1}};
  man["config"] = json::parse(config_to_json_text(cfg));
  man["files"] = json::object();
  return man;
}

void record_file(json& man, const std::string& path) {
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a_file(path)));
  man["files"][fs::path(path).filename().string()] = hex;
}

void write_manifest(const json& man, const RunConfig& cfg,
                    const std::string& name) {
  std::ofstream out(out_path(cfg, name), std::ios::trunc);
  out << man.dump(2) << "\n";
}

json iteration_json(const IterationReport& rep) {
  return json{{"step_norms", rep.step_norms},
              {"ratios", rep.ratios},
              {"residuals", rep.residuals},
              {"converged", rep.converged},
              {"iterations", rep.iterations},
              {"final_residual", rep.final_residual},
              {"eta", rep.eta},
              {"warning", rep.warning}};
}

json farfield_json(const FarFieldReport& ff) {
  return json{{"eps_prime", std::isfinite(ff.eps_prime)
                                ? json(ff.eps_prime)
                                : json("inf")},
              {"fit_ok", ff.fit_ok},
              {"exact", ff.exact},
              {"window", {ff.window_lo, ff.window_hi}},
              {"flux_in", ff.flux_in},
              {"flux_out", ff.flux_out},
              {"warning", ff.warning}};
}

struct ScopedSerial {
  explicit ScopedSerial(bool on) : prev(serial_forced()) {
    if (on) force_serial(true);
  }
  ~ScopedSerial() { force_serial(prev); }
  bool prev;
};

}  // namespace

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const NonlinearitySpec spec = nonlinearity_from_config(cfg);
  const AdmissibilityReport rep = validate(spec, cfg.n, cfg.solver.delta);
  out << "admissibility check: n = " << rep.n << ", p = " << rep.p << "\n"
      << "  (p-1)(n-1)/2 = " << (rep.p - 1) * (rep.n - 1) / 2.0
      << (rep.condition_ok ? " > 2: admissible" : " <= 2: NOT admissible")
      << "\n"
      << "  delta_max = " << rep.delta_max << ", delta = " << rep.delta
      << ", weight l = " << rep.weight_l << "\n"
      << "  minimal admissible p at n = " << rep.n << ": "
      << minimal_admissible_p(rep.n) << "\n";
  return rep.condition_ok ? kExitOk : kExitConfig;
}

int cmd_linear(const RunConfig& cfg, std::ostream& out) {
  ScopedSerial guard(cfg.serial);
  json man = base_manifest(cfg, "linear");
  json timings;
  StageClock clock;

  clock.start("setup");
  const Problem prob = problem_from_config(cfg);
  const AngularSpectrum f = incoming_from_config(cfg, *prob.basis);
  clock.stop(timings);

  clock.start("linear_eigenfunction");
  const RadialProfile* V =
      cfg.potential.is_zero() ? nullptr : &cfg.potential;
  const LinearEigenfunction lin =
      linear_eigenfunction(f, cfg.lambda, V, prob.grid, prob.basis);
  clock.stop(timings);

  clock.start("outputs");
  std::vector<std::string> written;
  if (cfg.wants("field")) {
    const std::string u0_path = out_path(cfg, "u0.nlhf");
    save_field(lin.u0, cfg.lambda, u0_path);
    written.push_back(u0_path);
  }
  if (cfg.wants("csv")) {
    const std::string g0_path = out_path(cfg, "g0.csv");
    write_pattern_csv(lin.g0, g0_path);
    const std::string g0s_path = out_path(cfg, "g0_samples.csv");
    write_pattern_samples_csv(lin.g0, *prob.basis, g0s_path);
    const std::string sig_path = out_path(cfg, "sigma.csv");
    std::ofstream sig(sig_path, std::ios::trunc);
    sig.precision(17);
    sig << "l,re,im,abs\n";
    for (Index l = 0; l < lin.sigma.size(); ++l)
      sig << l << "," << lin.sigma[l].real() << "," << lin.sigma[l].imag()
          << "," << std::abs(lin.sigma[l]) << "\n";
    sig.close();
    written.insert(written.end(), {g0_path, g0s_path, sig_path});
  }
  for (const std::string& p : written) record_file(man, p);
  clock.stop(timings);

  man["timings"] = timings;
  man["flux"] = {{"in", sobolev_norm(f, 0.0)},
                 {"out", sobolev_norm(lin.g0, 0.0)}};
  // implied global constant of the flat relation g0 = c f(-w), reported
  // from the per-mode phases rather than asserted a priori
  if (cfg.potential.is_zero() && lin.sigma.size() > 0)
    man["flat_constant"] = {{"re", lin.sigma[0].real()},
                            {"im", lin.sigma[0].imag()}};
  write_manifest(man, cfg, "manifest_linear.json");
  out << "linear run complete: wrote u0.nlhf, g0.csv, sigma.csv in "
      << cfg.out_dir << "\n";
  return kExitOk;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  ScopedSerial guard(cfg.serial);
  json man = base_manifest(cfg, "solve");
  json timings;
  StageClock clock;

  clock.start("setup");
  const Problem prob = problem_from_config(cfg);
  const AngularSpectrum f = incoming_from_config(cfg, *prob.basis);
  const NonlinearitySpec spec = nonlinearity_from_config(cfg);
  clock.stop(timings);

  clock.start("solve");
  const Solution sol = solve(f, spec, cfg.solver, prob);
  clock.stop(timings);

  clock.start("farfield");
  const FarFieldReport ff =
      extract_outgoing(sol.u, f, cfg.lambda, cfg.R0, cfg.window);
  clock.stop(timings);

  clock.start("outputs");
  std::vector<std::string> written;
  if (cfg.wants("field")) {
    const std::string u_path = out_path(cfg, "u.nlhf");
    save_field(sol.u, cfg.lambda, u_path);
    const std::string w_path = out_path(cfg, "w.nlhf");
    save_field(sol.w, cfg.lambda, w_path);
    written.insert(written.end(), {u_path, w_path});
  }
  if (cfg.wants("csv")) {
    const std::string g_path = out_path(cfg, "g.csv");
    write_pattern_csv(ff.g, g_path);
    const std::string gs_path = out_path(cfg, "g_samples.csv");
    write_pattern_samples_csv(ff.g, *prob.basis, gs_path);
    const std::string res_path = out_path(cfg, "residual_curve.csv");
    write_curve_csv(ff.residual_radii, ff.residual_curve, "r", "residual",
                    res_path);
    written.insert(written.end(), {g_path, gs_path, res_path});
  }
  for (const std::string& p : written) record_file(man, p);
  clock.stop(timings);

  man["timings"] = timings;
  man["admissibility"] = {{"p", sol.admissibility.p},
                          {"condition_ok", sol.admissibility.condition_ok},
                          {"delta", sol.admissibility.delta},
                          {"weight_l", sol.admissibility.weight_l}};
  man["iteration"] = iteration_json(sol.report);
  man["truncation"] = {{"tail_bound_rel", sol.resolvent_stats.tail_bound_rel},
                       {"warning", sol.resolvent_stats.tail_warning}};
  man["farfield"] = farfield_json(ff);
  man["flux_discrepancy"] = flux_balance(f, ff.g);
  write_manifest(man, cfg, "manifest_solve.json");

  out << "solve " << (sol.report.converged ? "converged" : "did NOT converge")
      << " in " << sol.report.iterations
      << " iterations; final residual = " << sol.report.final_residual
      << "\n"
      << "eps_prime = " << ff.eps_prime
      << ", flux in/out = " << ff.flux_in << " / " << ff.flux_out << "\n"
      << "outputs in " << cfg.out_dir << "\n";
  return sol.report.converged ? kExitOk : kExitNonConvergence;
}

int cmd_farfield(const RunConfig& cfg, const std::string& field_path,
                 std::ostream& out) {
  ScopedSerial guard(cfg.serial);
  json man = base_manifest(cfg, "farfield");
  json timings;
  StageClock clock;

  clock.start("load");
  const std::string path =
      field_path.empty() ? out_path(cfg, "u.nlhf") : field_path;
  const LoadedField lf = load_field(path);
  if (lf.field.n() != cfg.n || lf.field.basis().band_limit() != cfg.L ||
      lf.field.radial_count() != cfg.radial_count)
    throw ConfigError("farfield: loaded field does not match the config "
                      "discretization");
  const AngularSpectrum f = incoming_from_config(cfg, lf.field.basis());
  clock.stop(timings);

  clock.start("extract");
  const FarFieldReport ff =
      extract_outgoing(lf.field, f, lf.lambda, cfg.R0, cfg.window);
  clock.stop(timings);

  clock.start("outputs");
  const std::string g_path = out_path(cfg, "g.csv");
  write_pattern_csv(ff.g, g_path);
  const std::string gs_path = out_path(cfg, "g_samples.csv");
  write_pattern_samples_csv(ff.g, lf.field.basis(), gs_path);
  const std::string res_path = out_path(cfg, "residual_curve.csv");
  write_curve_csv(ff.residual_radii, ff.residual_curve, "r", "residual",
                  res_path);
  for (const std::string& p : {g_path, gs_path, res_path})
    record_file(man, p);
  clock.stop(timings);

  man["timings"] = timings;
  man["farfield"] = farfield_json(ff);
  man["flux_discrepancy"] = flux_balance(f, ff.g);
  write_manifest(man, cfg, "manifest_farfield.json");
  out << "farfield: eps_prime = " << ff.eps_prime << ", flux in/out = "
      << ff.flux_in << " / " << ff.flux_out << "\n";
  return kExitOk;
}

int cmd_flow(const RunConfig& cfg, std::ostream& out) {
  ScopedSerial guard(cfg.serial);
  json man = base_manifest(cfg, "flow");
  json timings;
  StageClock clock;

  clock.start("flow");
  std::mt19937_64 rng(cfg.flow_seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const Real lambda = cfg.lambda;
  const WeightSpec ws{lambda, cfg.weight_delta, cfg.weight_margin, false};
  const WeightSpec ws_rev{lambda, cfg.weight_delta, cfg.weight_margin, true};

  int fwd_plus = 0, bwd_minus = 0, undecided = 0;
  Real worst_energy_drift = 0;
  bool weight_ok = true, reversed_rejected = false;
  const Real t_span = cfg.flow_t_span / lambda;

  for (Index trial = 0; trial < cfg.flow_count; ++trial) {
    PhasePoint q0;
    q0.n = cfg.n;
    q0.x = 0.0;
    if (cfg.n == 3) {
      q0.y = {0.8 * uni(rng), 0.8 * uni(rng)};
      const Real nu = 0.9 * lambda * uni(rng);
      const Real mnorm = std::sqrt(lambda * lambda - nu * nu);
      const Real ang = kPi * uni(rng);
      const Real cf = 0.5 * (1.0 + q0.y.squaredNorm());
      q0.nu = nu;
      q0.mu = mnorm / cf * Eigen::Vector2d{std::cos(ang), std::sin(ang)};
    } else {
      q0.y[0] = kPi * uni(rng);
      const Real nu = 0.9 * lambda * uni(rng);
      q0.nu = nu;
      q0.mu[0] = std::sqrt(lambda * lambda - nu * nu) *
                 (uni(rng) > 0 ? 1.0 : -1.0);
    }

    const Trajectory fwd = hamilton_flow(q0, t_span, lambda, cfg.flow_tol);
    const Trajectory bwd = hamilton_flow(q0, -t_span, lambda, cfg.flow_tol);
    const Real e0 = phase_energy(q0);
    for (const auto& s : fwd.samples)
      worst_energy_drift = std::max(
          worst_energy_drift, std::abs(phase_energy(s.q) - e0) / e0);

    const LimitClass cf_ = classify_limit(fwd, lambda);
    const LimitClass cb_ = classify_limit(bwd, lambda);
    if (cf_ == LimitClass::kRPlus) ++fwd_plus;
    if (cb_ == LimitClass::kRMinus) ++bwd_minus;
    if (cf_ == LimitClass::kUndecided || cb_ == LimitClass::kUndecided)
      ++undecided;

    if (!check_weight(ws, fwd).ok) weight_ok = false;
    if (!check_weight(ws_rev, fwd).ok) reversed_rejected = true;

    if (trial < 3) {
      const std::string tp =
          out_path(cfg, "trajectory_" + std::to_string(trial) + ".csv");
      write_trajectory_csv(fwd, ws, tp);
      record_file(man, tp);
    }
  }
  clock.stop(timings);

  man["timings"] = timings;
  man["flow"] = {{"count", cfg.flow_count},
                 {"forward_to_R_plus", fwd_plus},
                 {"backward_to_R_minus", bwd_minus},
                 {"undecided", undecided},
                 {"max_energy_drift", worst_energy_drift},
                 {"weight_monotone", weight_ok},
                 {"reversed_weight_rejected", reversed_rejected},
                 {"x_eigenvalue_at_R_plus",
                  radial_set_x_eigenvalue(cfg.n, lambda, +1)},
                 {"x_eigenvalue_at_R_minus",
                  radial_set_x_eigenvalue(cfg.n, lambda, -1)}};
  write_manifest(man, cfg, "manifest_flow.json");

  out << "flow: " << fwd_plus << "/" << cfg.flow_count
      << " forward to R+, " << bwd_minus << "/" << cfg.flow_count
      << " backward to R-, max energy drift " << worst_energy_drift << "\n"
      << "weight monotone: " << (weight_ok ? "yes" : "NO")
      << ", reversed spec rejected: " << (reversed_rejected ? "yes" : "NO")
      << "\n";

  const bool ok = fwd_plus == cfg.flow_count &&
                  bwd_minus == cfg.flow_count &&
                  worst_energy_drift <= 1e-8 && weight_ok &&
                  reversed_rejected;
  return ok ? kExitOk : kExitAccuracy;
}

int cmd_probe(const RunConfig& cfg, std::ostream& out) {
  ScopedSerial guard(cfg.serial);
  json man = base_manifest(cfg, "probe");
  json timings;
  StageClock clock;

  clock.start("setup");
  const Problem prob = problem_from_config(cfg);
  const AngularSpectrum f = incoming_from_config(cfg, *prob.basis);
  const NonlinearitySpec spec = nonlinearity_from_config(cfg);
  clock.stop(timings);

  clock.start("probe");
  const ProbeTable table =
      contraction_probe(f, spec, cfg.solver, prob, cfg.probe_scales);
  clock.stop(timings);

  clock.start("outputs");
  const std::string csv = out_path(cfg, "contraction_probe.csv");
  {
    std::ofstream o(csv, std::ios::trunc);
    o.precision(17);
    o << "scale,eta,ratio,converged,usable\n";
    for (const ProbeRow& row : table.rows)
      o << row.scale << "," << row.eta << "," << row.ratio << ","
        << row.converged << "," << row.usable << "\n";
  }
  record_file(man, csv);
  clock.stop(timings);

  Real largest_converged = 0;
  for (const ProbeRow& row : table.rows)
    if (row.converged)
      largest_converged = std::max(largest_converged, row.eta);

  man["timings"] = timings;
  man["probe"] = {{"slope", table.slope},
                  {"expected_slope",
                   nonlinearity_from_config(cfg).declared_p - 1},
                  {"largest_converged_eta", largest_converged}};
  write_manifest(man, cfg, "manifest_probe.json");

  out << "contraction probe: fitted slope " << table.slope
      << " (pure power law predicts p-1)\n";
  int usable = 0;
  for (const ProbeRow& row : table.rows) usable += row.usable ? 1 : 0;
  return usable >= 2 ? kExitOk : kExitNonConvergence;
}

int run_command(const std::string& name, const RunConfig& cfg,
                const std::string& field_path, std::ostream& out) {
  try {
    if (name == "check") return cmd_check(cfg, out);
    if (name == "linear") return cmd_linear(cfg, out);
    if (name == "solve") return cmd_solve(cfg, out);
    if (name == "farfield") return cmd_farfield(cfg, field_path, out);
    if (name == "flow") return cmd_flow(cfg, out);
    if (name == "probe") return cmd_probe(cfg, out);
    out << "unknown command: " << name << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    out << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NonConvergenceError& e) {
    out << "non-convergence: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return kExitAccuracy;
  }
}

}  // namespace nlhelm
