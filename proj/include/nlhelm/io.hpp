#ifndef NLHELM_IO_HPP_
#define NLHELM_IO_HPP_

#include <cstdint>
#include <string>

#include "nlhelm/field.hpp"
#include "nlhelm/flow.hpp"

namespace nlhelm {

/// Binary field container (.nlhf): native little-endian, bit-exact round
/// trip. Layout: magic "NLHF0001", int32 n, int32 grading, int64 radial
/// count, int64 mode count, int32 L, f64 lambda, f64 r_min, f64 r_max,
/// radial nodes (f64), mode coefficients (complex128, row-major by radius),
/// and a trailing FNV-1a checksum of all preceding bytes. A text manifest
/// with the checksum is written next to the file.
void save_field(const Field& f, Real lambda, const std::string& path);

struct LoadedField {
  Field field;
  Real lambda = 0;
};

LoadedField load_field(const std::string& path);

std::uint64_t fnv1a(const void* data, std::size_t size,
                    std::uint64_t seed = 1469598103934665603ull);
std::uint64_t fnv1a_file(const std::string& path);

/// mode indices, Re, Im (n=3: "l,m,re,im"; n=2: "l,re,im").
void write_pattern_csv(const AngularSpectrum& g, const std::string& path);
/// theta[,phi],re,im samples on the quadrature grid (plot data).
void write_pattern_samples_csv(const AngularSpectrum& g,
                               const AngularBasis& basis,
                               const std::string& path);
void write_curve_csv(const VecXd& x, const VecXd& y, const std::string& xname,
                     const std::string& yname, const std::string& path);
void write_trajectory_csv(const Trajectory& traj, const WeightSpec& ws,
                          const std::string& path);

}  // namespace nlhelm

#endif  // NLHELM_IO_HPP_
