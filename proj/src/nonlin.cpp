#include "nlhelm/nonlin.hpp"

#include <map>

namespace nlhelm {

NonlinearitySpec power_law(int p, Complex alpha) {
  if (p < 2 || p % 2 == 0)
    throw ConfigError("power_law: need odd p >= 3 for |u|^{p-1} u");
  NonlinearitySpec spec;
  spec.declared_p = p;
  Monomial m;
  m.coefficient = alpha;
  const int q = (p - 1) / 2;  // conj count
  for (int i = 0; i < q + 1; ++i) m.factors.push_back({false, {}});
  for (int i = 0; i < q; ++i) m.factors.push_back({true, {}});
  spec.monomials.push_back(std::move(m));
  return spec;
}

AdmissibilityReport validate(const NonlinearitySpec& spec, int n, Real delta) {
  if (n < 2) throw ConfigError("validate: dimension must be >= 2");
  if (spec.monomials.empty())
    throw ConfigError("validate: nonlinearity has no monomials");
  Index p = std::numeric_limits<Index>::max();
  for (const Monomial& m : spec.monomials) {
    if (m.factors.empty())
      throw ConfigError("validate: monomial with no factors");
    for (const MonomialFactor& f : m.factors)
      if (f.word.size() > 2)
        throw ConfigError("validate: derivative word longer than 2");
    p = std::min(p, m.degree());
  }
  if (p < 2) throw ConfigError("validate: monomial degree below 2");

  AdmissibilityReport rep;
  rep.n = n;
  rep.p = static_cast<int>(p);
  rep.condition_ok = (p - 1) * (n - 1) > 4;  // (p-1)(n-1)/2 > 2, integers
  rep.delta_max = 1.0 / (4.0 * p);
  rep.delta = (delta > 0) ? delta : rep.delta_max;
  if (rep.delta > rep.delta_max + 1e-15)
    throw ConfigError("validate: delta exceeds 1/(4p)");
  rep.weight_l = -0.5 - rep.delta;
  rep.message = rep.condition_ok
                    ? "admissible: (p-1)(n-1)/2 > 2"
                    : "inadmissible: (p-1)(n-1)/2 = " +
                          std::to_string((p - 1) * (n - 1) / 2.0) +
                          " is not > 2";
  return rep;
}

int minimal_admissible_p(int n) {
  int p = 2;
  while ((p - 1) * (n - 1) <= 4) ++p;
  return p;
}

Field evaluate(const NonlinearitySpec& spec, const Field& u) {
  const Index nr = u.radial_count();
  const Index na = u.node_count();

  // unique derivative words -> point values
  std::map<std::vector<int>, MatXcd> word_values;
  auto values_of = [&](const std::vector<int>& word) -> const MatXcd& {
    auto it = word_values.find(word);
    if (it == word_values.end())
      it = word_values.emplace(word, frame_word(u, word).values()).first;
    return it->second;
  };

  MatXcd acc = MatXcd::Zero(nr, na);
  for (const Monomial& mono : spec.monomials) {
    MatXcd term = MatXcd::Constant(nr, na, mono.coefficient);
    if (!(mono.profile.kind == RadialProfile::Kind::kConstant &&
          mono.profile.c == 1.0)) {
      const VecXd prof = mono.profile.sample(u.grid().nodes);
      term = prof.matrix().asDiagonal() * term;
    }
    for (const MonomialFactor& f : mono.factors) {
      const MatXcd& v = values_of(f.word);
      if (f.conjugated)
        term = term.cwiseProduct(v.conjugate());
      else
        term = term.cwiseProduct(v);
    }
    acc += term;
  }
  Field out = Field::from_values(u.grid_ptr(), u.basis_ptr(), std::move(acc));
  out.modes();  // resolvent consumes the mode representation
  return out;
}

}  // namespace nlhelm
