#ifndef NLHELM_COMMANDS_HPP_
#define NLHELM_COMMANDS_HPP_

#include <iosfwd>
#include <string>

#include "nlhelm/config.hpp"

namespace nlhelm {

inline constexpr const char* kVersion = "1.0.0";

/// Exit codes: 0 success, 2 config error, 3 non-convergence, 4 accuracy.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitAccuracy = 4;

int cmd_check(const RunConfig& cfg, std::ostream& out);
int cmd_linear(const RunConfig& cfg, std::ostream& out);
int cmd_solve(const RunConfig& cfg, std::ostream& out);
int cmd_farfield(const RunConfig& cfg, const std::string& field_path,
                 std::ostream& out);
int cmd_flow(const RunConfig& cfg, std::ostream& out);
int cmd_probe(const RunConfig& cfg, std::ostream& out);

/// Dispatch by subcommand name; maps exceptions to exit codes.
int run_command(const std::string& name, const RunConfig& cfg,
                const std::string& field_path, std::ostream& out);

}  // namespace nlhelm

#endif  // NLHELM_COMMANDS_HPP_
