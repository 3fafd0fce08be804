// Command-line driver: check | linear | solve | farfield | flow | probe.
// Exit codes: 0 success, 2 config error, 3 non-convergence, 4 accuracy.
#include <CLI11.hpp>
#include <iostream>

#include "nlhelm/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nonlinear Helmholtz eigenfunction toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string field_path;
  std::vector<std::string> overrides;
  bool serial = false;

  auto add_common = [&](CLI::App* sub, bool with_field = false) {
    sub->add_option("--config", config_path, "config file (JSON)")
        ->required();
    sub->add_option("--out", out_dir, "output directory override");
    sub->add_flag("--serial", serial,
                  "single worker, bit-reproducible outputs");
    sub->add_option("--override", overrides,
                    "dot-path config overrides key.path=value");
    if (with_field)
      sub->add_option("--field", field_path,
                      "field container to analyze (default: <out>/u.nlhf)");
  };

  add_common(app.add_subcommand("check", "admissibility of the nonlinearity"));
  add_common(app.add_subcommand("linear", "linear eigenfunction and "
                                          "scattering phases"));
  add_common(app.add_subcommand("solve", "nonlinear eigenfunction via the "
                                         "contraction iteration"));
  add_common(app.add_subcommand("farfield", "radiation pattern extraction "
                                            "from a saved field"),
             true);
  add_common(app.add_subcommand("flow", "Hamilton flow, radial sets and "
                                        "weight monotonicity"));
  add_common(app.add_subcommand("probe", "contraction-rate scaling table"));

  CLI11_PARSE(app, argc, argv);

  try {
    nlhelm::RunConfig cfg = nlhelm::load_config(config_path, overrides);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (serial) cfg.serial = true;
    const std::string name = app.get_subcommands().front()->get_name();
    return nlhelm::run_command(name, cfg, field_path, std::cout);
  } catch (const nlhelm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return nlhelm::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nlhelm::kExitAccuracy;
  }
}
