#include "nlhelm/io.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace nlhelm {

namespace {

constexpr char kMagic[8] = {'N', 'L', 'H', 'F', '0', '0', '0', '1'};

template <typename T>
void put(std::vector<char>& buf, const T& v) {
  const char* p = reinterpret_cast<const char*>(&v);
  buf.insert(buf.end(), p, p + sizeof(T));
}

template <typename T>
T take(const std::vector<char>& buf, std::size_t& off) {
  T v;
  if (off + sizeof(T) > buf.size())
    throw ConfigError("load_field: truncated container");
  std::memcpy(&v, buf.data() + off, sizeof(T));
  off += sizeof(T);
  return v;
}

}  // namespace

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("fnv1a_file: cannot open " + path);
  std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  return fnv1a(buf.data(), buf.size());
}

void save_field(const Field& f, Real lambda, const std::string& path) {
  const RadialGrid& g = f.grid();
  const MatXcd& m = f.modes();
  std::vector<char> buf;
  buf.reserve(64 + sizeof(Real) * g.count() +
              sizeof(Complex) * m.rows() * m.cols());
  buf.insert(buf.end(), kMagic, kMagic + 8);
  put<std::int32_t>(buf, f.n());
  put<std::int32_t>(buf, static_cast<std::int32_t>(g.grading));
  put<std::int64_t>(buf, g.count());
  put<std::int64_t>(buf, m.cols());
  put<std::int32_t>(buf, static_cast<std::int32_t>(f.basis().band_limit()));
  put<Real>(buf, lambda);
  put<Real>(buf, g.r_min);
  put<Real>(buf, g.r_max);
  for (Index i = 0; i < g.count(); ++i) put<Real>(buf, g.nodes[i]);
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) put<Complex>(buf, m(i, j));
  const std::uint64_t h = fnv1a(buf.data(), buf.size());
  put<std::uint64_t>(buf, h);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("save_field: cannot write " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  out.close();

  std::ofstream man(path + ".manifest.txt", std::ios::trunc);
  man << "file " << path << "\n"
      << "bytes " << buf.size() << "\n"
      << "fnv1a " << std::hex << h << std::dec << "\n"
      << "n " << f.n() << " L " << f.basis().band_limit() << " radial "
      << g.count() << " lambda " << lambda << "\n";
}

LoadedField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("load_field: cannot open " + path);
  std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  if (buf.size() < 8 + sizeof(std::uint64_t) ||
      std::memcmp(buf.data(), kMagic, 8) != 0)
    throw ConfigError("load_field: not a field container: " + path);
  const std::size_t body = buf.size() - sizeof(std::uint64_t);
  std::uint64_t stored;
  std::memcpy(&stored, buf.data() + body, sizeof(stored));
  if (fnv1a(buf.data(), body) != stored)
    throw ConfigError("load_field: checksum mismatch: " + path);

  std::size_t off = 8;
  const int n = take<std::int32_t>(buf, off);
  const auto grading = static_cast<Grading>(take<std::int32_t>(buf, off));
  const Index nr = take<std::int64_t>(buf, off);
  const Index nm = take<std::int64_t>(buf, off);
  const Index L = take<std::int32_t>(buf, off);
  const Real lambda = take<Real>(buf, off);
  const Real r_min = take<Real>(buf, off);
  const Real r_max = take<Real>(buf, off);

  auto grid = make_grid(r_min, r_max, nr, grading);
  for (Index i = 0; i < nr; ++i) {
    const Real node = take<Real>(buf, off);
    if (node != grid->nodes[i])
      throw ConfigError("load_field: node mismatch (corrupt container)");
  }
  auto basis = make_angular_basis(n, L);
  if (basis->modes() != nm)
    throw ConfigError("load_field: mode count mismatch");
  MatXcd m(nr, nm);
  for (Index i = 0; i < nr; ++i)
    for (Index j = 0; j < nm; ++j) m(i, j) = take<Complex>(buf, off);

  LoadedField lf;
  lf.field = Field::from_modes(std::move(grid), std::move(basis), std::move(m));
  lf.lambda = lambda;
  return lf;
}

void write_pattern_csv(const AngularSpectrum& g, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("write_pattern_csv: cannot write " + path);
  out.precision(17);
  if (g.n == 2) {
    out << "l,re,im\n";
    for (Index idx = 0; idx < g.coeffs.size(); ++idx)
      out << (idx - g.L) << "," << g.coeffs[idx].real() << ","
          << g.coeffs[idx].imag() << "\n";
  } else {
    out << "l,m,re,im\n";
    for (Index l = 0; l <= g.L; ++l)
      for (Index m = -l; m <= l; ++m) {
        const Complex c = g.coeffs[mode_index(3, g.L, l, m)];
        out << l << "," << m << "," << c.real() << "," << c.imag() << "\n";
      }
  }
}

void write_pattern_samples_csv(const AngularSpectrum& g,
                               const AngularBasis& basis,
                               const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw ConfigError("write_pattern_samples_csv: cannot write " + path);
  out.precision(17);
  const VecXcd v = inverse_transform(g, basis);
  const SphereGrid& grid = basis.grid();
  if (g.n == 2) {
    out << "theta,re,im\n";
    for (Index j = 0; j < grid.node_count(); ++j)
      out << grid.theta[j] << "," << v[j].real() << "," << v[j].imag()
          << "\n";
  } else {
    out << "theta,phi,re,im\n";
    for (Index j = 0; j < grid.node_count(); ++j)
      out << grid.theta[j] << "," << grid.phi[j] << "," << v[j].real() << ","
          << v[j].imag() << "\n";
  }
}

void write_curve_csv(const VecXd& x, const VecXd& y, const std::string& xname,
                     const std::string& yname, const std::string& path) {
  if (x.size() != y.size())
    throw ShapeError("write_curve_csv: length mismatch");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("write_curve_csv: cannot write " + path);
  out.precision(17);
  out << xname << "," << yname << "\n";
  for (Index i = 0; i < x.size(); ++i) out << x[i] << "," << y[i] << "\n";
}

void write_trajectory_csv(const Trajectory& traj, const WeightSpec& ws,
                          const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("write_trajectory_csv: cannot write " + path);
  out.precision(17);
  out << "t,x,chart,y1,y2,nu,mu1,mu2,mu_norm,lplus\n";
  for (const TrajectorySample& s : traj.samples) {
    const PhasePoint& q = s.q;
    out << s.t << "," << q.x << "," << q.chart << "," << q.y[0] << ","
        << q.y[1] << "," << q.nu << "," << q.mu[0] << "," << q.mu[1] << ","
        << mu_norm(q) << "," << ws.lplus(q.nu, mu_norm(q)) << "\n";
  }
}

}  // namespace nlhelm
