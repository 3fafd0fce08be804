#include "nlhelm/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace nlhelm {

using nlohmann::json;

namespace {

std::vector<int> word_from_json(const json& jw) {
  std::vector<int> word;
  for (const auto& item : jw) {
    const std::string s = item.get<std::string>();
    if (s == "r")
      word.push_back(0);
    else if (s == "a1")
      word.push_back(1);
    else if (s == "a2")
      word.push_back(2);
    else
      throw ConfigError("unknown frame direction '" + s + "' (r|a1|a2)");
  }
  return word;
}

json word_to_json(const std::vector<int>& word) {
  json jw = json::array();
  for (int d : word) jw.push_back(d == 0 ? "r" : (d == 1 ? "a1" : "a2"));
  return jw;
}

RadialProfile profile_from_json(const json& jp) {
  const std::string kind = jp.value("kind", "constant");
  return profile_from_string(kind, jp.value("c", 0.0), jp.value("q", 0.0),
                             jp.value("w", 1.0));
}

json profile_to_json(const RadialProfile& p) {
  json jp;
  switch (p.kind) {
    case RadialProfile::Kind::kConstant:
      jp["kind"] = "constant";
      break;
    case RadialProfile::Kind::kPowBracket:
      jp["kind"] = "pow_bracket";
      jp["q"] = p.q;
      break;
    case RadialProfile::Kind::kInvQuad:
      jp["kind"] = "inv_quadratic";
      jp["w"] = p.w;
      break;
  }
  jp["c"] = p.c;
  return jp;
}

}  // namespace

RunConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  RunConfig cfg;
  try {
    if (j.contains("problem")) {
      const json& p = j["problem"];
      cfg.n = p.value("n", cfg.n);
      cfg.lambda = p.value("lambda", cfg.lambda);
      if (p.contains("potential"))
        cfg.potential = profile_from_json(p["potential"]);
    }
    if (j.contains("incoming_data")) {
      const json& d = j["incoming_data"];
      if (d.contains("modes")) {
        for (const auto& e : d["modes"])
          cfg.modes.push_back({e.value("l", Index(0)), e.value("m", Index(0)),
                               e.value("re", 0.0), e.value("im", 0.0)});
      }
      cfg.random_data = d.value("preset", "") == "random";
      cfg.seed = d.value("seed", cfg.seed);
      cfg.f_norm = d.value("norm", cfg.f_norm);
      cfg.L_data = d.value("L_data", cfg.L_data);
    }
    if (j.contains("nonlinearity")) {
      const json& nl = j["nonlinearity"];
      cfg.use_power_law = nl.value("preset", "power_law") == "power_law";
      cfg.p = nl.value("p", cfg.p);
      cfg.alpha = Complex(nl.value("alpha_re", 1.0), nl.value("alpha_im", 0.0));
      cfg.declared_p = nl.value("declared_p", 0);
      if (nl.contains("monomials")) {
        for (const auto& jm : nl["monomials"]) {
          Monomial m;
          m.coefficient = Complex(jm.value("coefficient_re", 1.0),
                                  jm.value("coefficient_im", 0.0));
          if (jm.contains("profile"))
            m.profile = profile_from_json(jm["profile"]);
          for (const auto& jf : jm["factors"]) {
            MonomialFactor f;
            f.conjugated = jf.value("conjugated", false);
            if (jf.contains("word")) f.word = word_from_json(jf["word"]);
            m.factors.push_back(std::move(f));
          }
          cfg.monomials.push_back(std::move(m));
        }
      }
    }
    if (j.contains("discretization")) {
      const json& d = j["discretization"];
      cfg.r_min = d.value("r_min", cfg.r_min);
      cfg.r_max = d.value("r_max", cfg.r_max);
      cfg.radial_count = d.value("radial_count", cfg.radial_count);
      cfg.grading = grading_from_string(d.value("grading", "uniform"));
      cfg.L = d.value("L", cfg.L);
      cfg.R0 = d.value("R0", cfg.R0);
    }
    if (j.contains("solver")) {
      const json& s = j["solver"];
      cfg.solver.delta = s.value("delta", cfg.solver.delta);
      cfg.solver.tol_step = s.value("tol_step", cfg.solver.tol_step);
      cfg.solver.tol_residual =
          s.value("tol_residual", cfg.solver.tol_residual);
      cfg.solver.max_iter = s.value("max_iter", cfg.solver.max_iter);
      cfg.solver.k = s.value("k", cfg.solver.k);
      cfg.solver.smallness_budget =
          s.value("smallness_budget", cfg.solver.smallness_budget);
    }
    if (j.contains("farfield")) {
      const json& f = j["farfield"];
      cfg.window.lo_frac = f.value("window_lo_frac", cfg.window.lo_frac);
      cfg.window.hi_frac = f.value("window_hi_frac", cfg.window.hi_frac);
    }
    if (j.contains("flow")) {
      const json& f = j["flow"];
      cfg.flow_count = f.value("count", cfg.flow_count);
      cfg.flow_seed = f.value("seed", cfg.flow_seed);
      cfg.flow_t_span = f.value("t_span", cfg.flow_t_span);
      cfg.flow_tol = f.value("tol", cfg.flow_tol);
      cfg.weight_delta = f.value("weight_delta", cfg.weight_delta);
      cfg.weight_margin = f.value("weight_margin", cfg.weight_margin);
    }
    if (j.contains("probe") && j["probe"].contains("scales")) {
      cfg.probe_scales.clear();
      for (const auto& s : j["probe"]["scales"])
        cfg.probe_scales.push_back(s.get<Real>());
    }
    if (j.contains("outputs")) {
      const json& o = j["outputs"];
      cfg.out_dir = o.value("directory", cfg.out_dir);
      cfg.serial = o.value("serial", cfg.serial);
      if (o.contains("formats")) {
        cfg.formats.clear();
        for (const auto& fmt : o["formats"])
          cfg.formats.push_back(fmt.get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  return cfg;
}

std::string config_to_json_text(const RunConfig& cfg) {
  json j;
  j["problem"] = {{"n", cfg.n},
                  {"lambda", cfg.lambda},
                  {"potential", profile_to_json(cfg.potential)}};
  json modes = json::array();
  for (const auto& m : cfg.modes)
    modes.push_back({{"l", m.l}, {"m", m.m}, {"re", m.re}, {"im", m.im}});
  j["incoming_data"] = {{"modes", modes},
                        {"preset", cfg.random_data ? "random" : "explicit"},
                        {"seed", cfg.seed},
                        {"norm", cfg.f_norm},
                        {"L_data", cfg.L_data}};
  json jmono = json::array();
  for (const Monomial& m : cfg.monomials) {
    json jm;
    jm["coefficient_re"] = m.coefficient.real();
    jm["coefficient_im"] = m.coefficient.imag();
    jm["profile"] = profile_to_json(m.profile);
    json jf = json::array();
    for (const MonomialFactor& f : m.factors)
      jf.push_back({{"conjugated", f.conjugated}, {"word", word_to_json(f.word)}});
    jm["factors"] = jf;
    jmono.push_back(jm);
  }
  j["nonlinearity"] = {{"preset", cfg.use_power_law ? "power_law" : "custom"},
                       {"p", cfg.p},
                       {"alpha_re", cfg.alpha.real()},
                       {"alpha_im", cfg.alpha.imag()},
                       {"declared_p", cfg.declared_p},
                       {"monomials", jmono}};
  j["discretization"] = {{"r_min", cfg.r_min},
                         {"r_max", cfg.r_max},
                         {"radial_count", cfg.radial_count},
                         {"grading", to_string(cfg.grading)},
                         {"L", cfg.L},
                         {"R0", cfg.R0}};
  j["solver"] = {{"delta", cfg.solver.delta},
                 {"tol_step", cfg.solver.tol_step},
                 {"tol_residual", cfg.solver.tol_residual},
                 {"max_iter", cfg.solver.max_iter},
                 {"k", cfg.solver.k},
                 {"smallness_budget", cfg.solver.smallness_budget}};
  j["farfield"] = {{"window_lo_frac", cfg.window.lo_frac},
                   {"window_hi_frac", cfg.window.hi_frac}};
  j["flow"] = {{"count", cfg.flow_count},     {"seed", cfg.flow_seed},
               {"t_span", cfg.flow_t_span},   {"tol", cfg.flow_tol},
               {"weight_delta", cfg.weight_delta},
               {"weight_margin", cfg.weight_margin}};
  j["probe"] = {{"scales", cfg.probe_scales}};
  j["outputs"] = {{"directory", cfg.out_dir},
                  {"serial", cfg.serial},
                  {"formats", cfg.formats}};
  return j.dump(2);
}

RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw ConfigError("override must be key.path=value: " + ov);
    const std::string keypath = ov.substr(0, eq);
    const std::string value = ov.substr(eq + 1);
    json* cur = &j;
    std::stringstream ks(keypath);
    std::string key;
    std::vector<std::string> keys;
    while (std::getline(ks, key, '.')) keys.push_back(key);
    if (keys.empty()) throw ConfigError("empty override key");
    for (size_t i = 0; i + 1 < keys.size(); ++i) cur = &((*cur)[keys[i]]);
    json parsed;
    try {
      parsed = json::parse(value);
    } catch (const json::exception&) {
      parsed = value;  // bare string
    }
    (*cur)[keys.back()] = parsed;
  }
  RunConfig cfg = config_from_json_text(j.dump());
  validate_config(cfg);
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.n != 2 && cfg.n != 3)
    throw ConfigError("config: n must be 2 or 3 for field computation");
  if (!(cfg.lambda > 0)) throw ConfigError("config: lambda must be positive");
  if (!(0 < cfg.r_min && cfg.r_min < cfg.r_max))
    throw ConfigError("config: need 0 < r_min < r_max");
  if (cfg.radial_count < 16) throw ConfigError("config: radial_count < 16");
  const Real spacing = (cfg.r_max - cfg.r_min) / (cfg.radial_count - 1);
  if (cfg.grading == Grading::kUniform && cfg.lambda * spacing > 0.3)
    throw ConfigError("config: lambda * spacing > 0.3 (grid under-resolves "
                      "the oscillation)");
  if (cfg.L < 0) throw ConfigError("config: negative band limit L");
  if (cfg.R0 < cfg.r_min || 2.0 * cfg.R0 > cfg.r_max)
    throw ConfigError("config: cutoff needs r_min <= R0 and 2 R0 <= r_max");
  if (!cfg.potential.is_zero() && !cfg.potential.decays_quadratically())
    throw ConfigError("config: potential must decay like r^-2");
  if (cfg.solver.k <= (cfg.n - 1) / 2)
    throw ConfigError("config: solver.k must exceed (n-1)/2");
  if (cfg.window.hi_frac <= 0 || cfg.window.hi_frac > 1.0 ||
      cfg.window.lo_frac >= cfg.window.hi_frac)
    throw ConfigError("config: empty farfield window");
  // admissibility of the nonlinearity (throws on malformed monomials)
  validate(nonlinearity_from_config(cfg), cfg.n, cfg.solver.delta);
}

NonlinearitySpec nonlinearity_from_config(const RunConfig& cfg) {
  NonlinearitySpec spec;
  if (cfg.use_power_law && cfg.monomials.empty()) {
    spec = power_law(cfg.p, cfg.alpha);
  } else {
    spec.monomials = cfg.monomials;
    spec.declared_p = cfg.declared_p;
    if (spec.monomials.empty())
      throw ConfigError("config: no nonlinearity given");
    if (spec.declared_p <= 0) {
      Index p = std::numeric_limits<Index>::max();
      for (const Monomial& m : spec.monomials) p = std::min(p, m.degree());
      spec.declared_p = static_cast<int>(p);
    }
  }
  return spec;
}

AngularSpectrum incoming_from_config(const RunConfig& cfg,
                                     const AngularBasis& basis) {
  if (cfg.random_data) {
    const Index cap = cfg.L_data < 0 ? basis.band_limit() : cfg.L_data;
    return random_spectrum(basis, cfg.seed, cfg.f_norm, cfg.solver.k + 2.0,
                           cap);
  }
  AngularSpectrum f{basis.n(), basis.band_limit(),
                    VecXcd::Zero(basis.modes())};
  for (const auto& e : cfg.modes) {
    Index idx;
    if (basis.n() == 2) {
      if (std::abs(e.l) > basis.band_limit())
        throw ConfigError("config: incoming mode out of range");
      idx = mode_index(2, basis.band_limit(), e.l);
    } else {
      if (e.l < 0 || e.l > basis.band_limit() || std::abs(e.m) > e.l)
        throw ConfigError("config: incoming mode out of range");
      idx = mode_index(3, basis.band_limit(), e.l, e.m);
    }
    f.coeffs[idx] = Complex(e.re, e.im);
  }
  return f;
}

Problem problem_from_config(const RunConfig& cfg) {
  auto grid = make_grid(cfg.r_min, cfg.r_max, cfg.radial_count, cfg.grading);
  auto basis = make_angular_basis(cfg.n, cfg.L);
  return make_problem(cfg.n, cfg.lambda, std::move(grid), std::move(basis),
                      cfg.potential, cfg.R0);
}

}  // namespace nlhelm
