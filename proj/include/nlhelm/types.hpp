#ifndef NLHELM_TYPES_HPP_
#define NLHELM_TYPES_HPP_

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace nlhelm {

using Real = double;
using Complex = std::complex<double>;

using VecXd = Eigen::ArrayXd;
using VecXcd = Eigen::ArrayXcd;
using MatXd = Eigen::MatrixXd;
using MatXcd = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr Real kPi = 3.14159265358979323846264338327950288;
inline constexpr Complex kI{0.0, 1.0};

/// Invalid configuration or input shape; CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Array/grid/mode-set mismatch between operands.
struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A computed quantity failed its internal consistency bound; exit code 4.
struct AccuracyError : std::runtime_error {
  explicit AccuracyError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iteration failed to contract; exit code 3.
struct NonConvergenceError : std::runtime_error {
  explicit NonConvergenceError(const std::string& msg)
      : std::runtime_error(msg) {}
};

/// Worker cap: min(hardware, HELMHOLTZ_THREADS); 1 when serial mode is forced.
int worker_count();
void force_serial(bool on);
bool serial_forced();

/// Runs f(i) for i in [0, n). Work items must write to disjoint slots;
/// reductions are left to the caller so summation order stays fixed.
void parallel_for(Index n, const std::function<void(Index)>& f);

}  // namespace nlhelm

#endif  // NLHELM_TYPES_HPP_
