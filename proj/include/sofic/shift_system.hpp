#pragma once

// Shift systems over finite alphabets with identity-coordinate
// pseudometrics, microstate membership under the metric and observable
// formulations, and the constructions bridging the two.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sofic/group.hpp"
#include "sofic/metric.hpp"
#include "sofic/sofic_map.hpp"

namespace sofic {

// Product (Bernoulli) measure: one probability per alphabet symbol.
struct BernoulliSpec {
  std::vector<double> probs;
};

// Finite set of periodic Z-configurations with weights. Each
// configuration x has x(n) = symbols[n mod period].
struct PeriodicConfig {
  std::vector<int> symbols;  // one period
  int value(std::int64_t n) const {
    const auto p = static_cast<std::int64_t>(symbols.size());
    return symbols[static_cast<size_t>(((n % p) + p) % p)];
  }
};

struct FiniteOrbitSpec {
  std::vector<PeriodicConfig> configs;
  std::vector<double> weights;
};

using MeasureSpec = std::variant<BernoulliSpec, FiniteOrbitSpec>;

struct ShiftSystem {
  Group group;
  Alphabet alphabet;
  BasePseudometric base_metric;
  MeasureSpec measure;

  ShiftSystem(Group g, Alphabet a, BasePseudometric m, MeasureSpec mu)
      : group(std::move(g)), alphabet(std::move(a)), base_metric(std::move(m)),
        measure(std::move(mu)) {
    if (base_metric.size() != alphabet.size())
      throw std::invalid_argument("ShiftSystem: metric size != alphabet size");
    if (const auto* b = std::get_if<BernoulliSpec>(&measure)) {
      if (static_cast<int>(b->probs.size()) != alphabet.size())
        throw std::invalid_argument("ShiftSystem: probability vector size mismatch");
      double s = 0.0;
      for (double p : b->probs) s += p;
      if (std::abs(s - 1.0) > 1e-12)
        throw std::invalid_argument("ShiftSystem: probabilities must sum to 1");
    } else {
      const auto& orbit = std::get<FiniteOrbitSpec>(measure);
      if (group.kind != Group::Kind::Integers)
        throw std::invalid_argument("ShiftSystem: finite-orbit specs are Z-only");
      if (orbit.configs.size() != orbit.weights.size())
        throw std::invalid_argument("ShiftSystem: orbit weights size mismatch");
      double s = 0.0;
      for (double w : orbit.weights) s += w;
      if (std::abs(s - 1.0) > 1e-12)
        throw std::invalid_argument("ShiftSystem: orbit weights must sum to 1");
      // identity coordinate must determine the configuration, and the
      // orbit must be closed under the designated generator
      std::map<int, size_t> by_coord;
      for (size_t c = 0; c < orbit.configs.size(); ++c) {
        int v = orbit.configs[c].value(0);
        if (by_coord.count(v))
          throw std::invalid_argument("ShiftSystem: orbit configurations must have distinct identity coordinates");
        by_coord[v] = c;
      }
      for (const auto& cfg : orbit.configs) {
        // the shift of cfg by the generator is the config starting at -1
        int coord = cfg.value(-1);
        if (!by_coord.count(coord))
          throw std::invalid_argument("ShiftSystem: orbit not closed under the generator");
      }
    }
  }

  bool is_bernoulli() const { return std::holds_alternative<BernoulliSpec>(measure); }

  // For finite-orbit systems: the identity coordinate of g.x_a, where
  // x_a is the configuration with identity coordinate a.
  int orbit_action(std::int64_t g_power, int symbol) const {
    const auto& orbit = std::get<FiniteOrbitSpec>(measure);
    for (const auto& cfg : orbit.configs)
      if (cfg.value(0) == symbol) return cfg.value(-g_power);
    throw std::invalid_argument("orbit_action: symbol is not an orbit coordinate");
  }

  static ShiftSystem bernoulli(const Group& g, Alphabet a, std::vector<double> probs) {
    BasePseudometric m = BasePseudometric::euclidean(a);
    return ShiftSystem(g, std::move(a), std::move(m), BernoulliSpec{std::move(probs)});
  }

  // Z acting on Z/n by +1, uniform measure, alphabet {0,...,n-1}.
  static ShiftSystem rotation(int n) {
    Alphabet a = Alphabet::indexed(n);
    FiniteOrbitSpec orbit;
    for (int s = 0; s < n; ++s) {
      PeriodicConfig cfg;
      for (int k = 0; k < n; ++k) cfg.symbols.push_back((s + k) % n);
      orbit.configs.push_back(std::move(cfg));
      orbit.weights.push_back(1.0 / n);
    }
    return ShiftSystem(Group::integers(), a, BasePseudometric::discrete(n), std::move(orbit));
  }

  // Trivial Z-action on n uniform points.
  static ShiftSystem trivial_action(int n) {
    Alphabet a = Alphabet::indexed(n);
    FiniteOrbitSpec orbit;
    for (int s = 0; s < n; ++s) {
      orbit.configs.push_back(PeriodicConfig{{s}});
      orbit.weights.push_back(1.0 / n);
    }
    return ShiftSystem(Group::integers(), a, BasePseudometric::discrete(n), std::move(orbit));
  }
};

inline std::int64_t integer_payload(const GroupElement& g) {
  if (const auto* v = std::get_if<std::int64_t>(&g.payload())) return *v;
  throw std::invalid_argument("expected an integer group element: " + g.str());
}

// Bounded test function of finitely many coordinates.
struct TestFunction {
  std::string name;
  std::vector<GroupElement> window;
  double bound = 1.0;
  std::function<double(const std::vector<int>&)> eval;  // window symbols -> value

  static TestFunction cylinder_indicator(const std::vector<GroupElement>& window,
                                         std::vector<int> pattern) {
    std::string nm = "cyl[";
    for (size_t i = 0; i < window.size(); ++i)
      nm += (i ? "," : "") + window[i].str() + "=" + std::to_string(pattern[i]);
    nm += "]";
    return {nm, window, 1.0, [pattern](const std::vector<int>& sym) {
              for (size_t i = 0; i < pattern.size(); ++i)
                if (sym[i] != pattern[i]) return 0.0;
              return 1.0;
            }};
  }
};

// All cylinder indicators over the window {-r,...,r} (Z) or the identity
// window (r = 0 for any group).
inline std::vector<TestFunction> cylinder_test_functions(const ShiftSystem& system, int radius) {
  std::vector<GroupElement> window;
  if (radius == 0) {
    window.push_back(system.group.identity());
  } else {
    if (system.group.kind != Group::Kind::Integers)
      throw std::invalid_argument("cylinder windows of positive radius are Z-only");
    for (int k = -radius; k <= radius; ++k) window.push_back(GroupElement::integer(k));
  }
  const int a = system.alphabet.size();
  const size_t w = window.size();
  std::vector<TestFunction> out;
  std::vector<int> pattern(w, 0);
  while (true) {
    out.push_back(TestFunction::cylinder_indicator(window, pattern));
    size_t i = 0;
    for (; i < w; ++i) {
      if (++pattern[i] < a) break;
      pattern[i] = 0;
    }
    if (i == w) break;
  }
  return out;
}

// closed-form mu-integral of a windowed test function
inline double mu_integral(const ShiftSystem& system, const TestFunction& f) {
  if (system.is_bernoulli()) {
    const auto& p = std::get<BernoulliSpec>(system.measure).probs;
    // coordinates at distinct group elements are independent
    const size_t w = f.window.size();
    const int a = system.alphabet.size();
    std::vector<int> sym(w, 0);
    double total = 0.0;
    while (true) {
      double prob = 1.0;
      for (size_t i = 0; i < w; ++i) prob *= p[sym[i]];
      total += prob * f.eval(sym);
      size_t i = 0;
      for (; i < w; ++i) {
        if (++sym[i] < a) break;
        sym[i] = 0;
      }
      if (i == w) break;
    }
    return total;
  }
  const auto& orbit = std::get<FiniteOrbitSpec>(system.measure);
  double total = 0.0;
  for (size_t c = 0; c < orbit.configs.size(); ++c) {
    std::vector<int> sym;
    sym.reserve(f.window.size());
    for (const auto& g : f.window) sym.push_back(orbit.configs[c].value(integer_payload(g)));
    total += orbit.weights[c] * f.eval(sym);
  }
  return total;
}

// phi(j)(g) = z(sigma(g)^{-1}(j)) restricted to the window F
inline std::vector<std::vector<int>> lift_microstate(const MicrostateField& z, const SoficMap& sigma,
                                                     const std::vector<GroupElement>& window) {
  std::vector<SoficMap::Perm> invs;
  invs.reserve(window.size());
  for (const auto& g : window) invs.push_back(sigma.inverse_perm(g));
  std::vector<std::vector<int>> out(z.size(), std::vector<int>(window.size()));
  for (size_t j = 0; j < z.size(); ++j)
    for (size_t i = 0; i < window.size(); ++i) out[j][i] = z[invs[i][j]];
  return out;
}

// Delta_2 distance between phi.sigma(g) and g.phi evaluated through
// identity coordinates. Zero for exactly equivariant fields.
inline double equivariance_defect(const MicrostateField& z, const SoficMap& sigma,
                                  const GroupElement& g, const ShiftSystem& system) {
  const int d = sigma.d();
  if (static_cast<int>(z.size()) != d) throw std::invalid_argument("field length != sigma.d");
  const auto& pg = sigma.perm(g);
  double s = 0.0;
  if (system.is_bernoulli()) {
    // (g.phi)(j)(e) = z(sigma(g^{-1})^{-1}(j)); measures only sigma's defects
    const auto inv = sigma.inverse_perm(g.inverse());
    for (int j = 0; j < d; ++j) {
      double v = system.base_metric(z[pg[j]], z[inv[j]]);
      s += v * v;
    }
  } else {
    const std::int64_t m = integer_payload(g);
    const int a = system.alphabet.size();
    std::vector<int> act(a);
    for (int sym = 0; sym < a; ++sym) act[sym] = system.orbit_action(m, sym);
    for (int j = 0; j < d; ++j) {
      double v = system.base_metric(z[pg[j]], act[z[j]]);
      s += v * v;
    }
  }
  return std::sqrt(s / d);
}

// | integral of f against the empirical measure of the lifted field
//   minus the closed-form mu-integral |
inline double empirical_gap(const MicrostateField& z, const SoficMap& sigma, const TestFunction& f,
                            const ShiftSystem& system) {
  auto lifted = lift_microstate(z, sigma, f.window);
  double emp = 0.0;
  for (const auto& sym : lifted) emp += f.eval(sym);
  emp /= static_cast<double>(z.size());
  return std::abs(emp - mu_integral(system, f));
}

struct MicrostateParams {
  std::vector<GroupElement> F;
  double delta = 0.1;
  double epsilon = 0.1;
  std::vector<TestFunction> L;
};

struct MembershipResult {
  bool good = false;
  std::vector<std::string> violations;
};

inline MembershipResult is_good_microstate(const MicrostateField& z, const SoficMap& sigma,
                                           const MicrostateParams& params,
                                           const ShiftSystem& system) {
  MembershipResult r;
  for (const auto& g : params.F) {
    double defect = equivariance_defect(z, sigma, g, system);
    if (defect >= params.delta)
      r.violations.push_back("equivariance defect " + std::to_string(defect) + " at g=" + g.str());
  }
  for (const auto& f : params.L) {
    double gap = empirical_gap(z, sigma, f, system);
    if (gap >= params.delta)
      r.violations.push_back("empirical gap " + std::to_string(gap) + " for " + f.name);
  }
  r.good = r.violations.empty();
  return r;
}

// Finite observable: an assignment of alphabet symbols to cells,
// factoring through the identity coordinate.
struct Observable {
  int target_size = 0;
  std::vector<int> symbol_to_cell;

  int operator()(int symbol) const { return symbol_to_cell.at(symbol); }

  static Observable identity(int alphabet_size) {
    Observable o;
    o.target_size = alphabet_size;
    o.symbol_to_cell.resize(alphabet_size);
    for (int i = 0; i < alphabet_size; ++i) o.symbol_to_cell[i] = i;
    return o;
  }
  static Observable constant(int alphabet_size) {
    Observable o;
    o.target_size = 1;
    o.symbol_to_cell.assign(alphabet_size, 0);
    return o;
  }
};

// beta refines alpha via pi when pi(beta(a)) = alpha(a) for every symbol
inline bool refines(const Observable& beta, const Observable& alpha, const std::vector<int>& pi) {
  if (static_cast<int>(pi.size()) != beta.target_size) return false;
  for (size_t a = 0; a < beta.symbol_to_cell.size(); ++a)
    if (pi[beta.symbol_to_cell[a]] != alpha.symbol_to_cell[a]) return false;
  return true;
}

// AP membership of the lifted observable field beta . psi_z.
// First condition: total variation of the empirical window-pattern
// distribution from mu. Second: disagreement fraction between the window
// value at g and the identity value at the sigma(g)-shifted index.
inline bool ap_membership(const MicrostateField& z, const SoficMap& sigma, const Observable& beta,
                          const std::vector<GroupElement>& F, double delta,
                          const ShiftSystem& system) {
  const int d = sigma.d();
  auto lifted = lift_microstate(z, sigma, F);
  std::vector<std::vector<int>> obs(lifted.size(), std::vector<int>(F.size()));
  for (size_t j = 0; j < lifted.size(); ++j)
    for (size_t i = 0; i < F.size(); ++i) obs[j][i] = beta(lifted[j][i]);

  // empirical distribution of window patterns
  std::map<std::vector<int>, double> emp;
  for (const auto& pat : obs) emp[pat] += 1.0 / d;

  // mu distribution of window patterns under beta
  std::map<std::vector<int>, double> mu;
  if (system.is_bernoulli()) {
    const auto& p = std::get<BernoulliSpec>(system.measure).probs;
    std::vector<double> q(beta.target_size, 0.0);
    for (size_t a = 0; a < p.size(); ++a) q[beta.symbol_to_cell[a]] += p[a];
    std::vector<int> pat(F.size(), 0);
    while (true) {
      double prob = 1.0;
      for (int b : pat) prob *= q[b];
      if (prob > 0.0) mu[pat] += prob;
      size_t i = 0;
      for (; i < F.size(); ++i) {
        if (++pat[i] < beta.target_size) break;
        pat[i] = 0;
      }
      if (i == F.size()) break;
    }
  } else {
    const auto& orbit = std::get<FiniteOrbitSpec>(system.measure);
    for (size_t c = 0; c < orbit.configs.size(); ++c) {
      std::vector<int> pat;
      pat.reserve(F.size());
      for (const auto& g : F) pat.push_back(beta(orbit.configs[c].value(integer_payload(g))));
      mu[pat] += orbit.weights[c];
    }
  }

  double tv = 0.0;
  std::set<std::vector<int>> keys;
  for (const auto& [k, v] : emp) keys.insert(k);
  for (const auto& [k, v] : mu) keys.insert(k);
  for (const auto& k : keys) {
    double e = emp.count(k) ? emp.at(k) : 0.0;
    double m = mu.count(k) ? mu.at(k) : 0.0;
    tv += std::abs(e - m);
  }
  if (tv >= delta) return false;

  for (size_t i = 0; i < F.size(); ++i) {
    const auto inv = sigma.inverse_perm(F[i]);
    int bad = 0;
    for (int j = 0; j < d; ++j)
      if (obs[j][i] != beta(z[inv[j]])) ++bad;
    if (static_cast<double>(bad) / d >= delta) return false;
  }
  return true;
}

// Averaged pseudometric on windowed configurations:
// Delta'(x,y) = sum_g w_g Delta_A(x(g), y(g)), with w(e) >= 1/2.
struct WindowedPseudometric {
  std::vector<GroupElement> window;
  std::vector<double> weights;
  const BasePseudometric* base;

  double operator()(const std::vector<int>& x, const std::vector<int>& y) const {
    double s = 0.0;
    for (size_t i = 0; i < window.size(); ++i) s += weights[i] * (*base)(x[i], y[i]);
    return s;
  }
};

inline WindowedPseudometric averaged_metric(const BasePseudometric& base,
                                            const std::map<GroupElement, double>& weights) {
  double total = 0.0;
  double identity_weight = 0.0;
  for (const auto& [g, w] : weights) {
    if (w <= 0.0) throw std::invalid_argument("averaged_metric: weights must be positive");
    total += w;
    if (g.is_identity()) identity_weight = w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("averaged_metric: weights must sum to 1");
  if (identity_weight < 0.5)
    throw std::invalid_argument("averaged_metric: identity weight must be >= 1/2");
  WindowedPseudometric out;
  out.base = &base;
  for (const auto& [g, w] : weights) {
    out.window.push_back(g);
    out.weights.push_back(w);
  }
  return out;
}

// Partition of the alphabet by balls of radius < kappa around greedily
// chosen centers, plus a remainder cell. Radii are nudged off realized
// pairwise distances, so every cell is boundary-free.
inline Observable ball_partition_observable(const ShiftSystem& system, double kappa) {
  if (kappa <= 0.0) throw std::invalid_argument("ball_partition_observable: kappa must be positive");
  const int n = system.alphabet.size();
  const auto& delta = system.base_metric;
  // pick a radius below kappa that no pairwise distance equals
  double radius = kappa * (1.0 - 1e-9);
  bool collides = true;
  while (collides) {
    collides = false;
    for (int i = 0; i < n && !collides; ++i)
      for (int j = 0; j < n; ++j)
        if (std::abs(delta(i, j) - radius) < 1e-12) {
          collides = true;
          break;
        }
    if (collides) radius *= 1.0 - 1e-6;
  }
  Observable o;
  o.symbol_to_cell.assign(n, -1);
  int cell = 0;
  for (int i = 0; i < n; ++i) {
    if (o.symbol_to_cell[i] >= 0) continue;
    for (int j = 0; j < n; ++j)
      if (o.symbol_to_cell[j] < 0 && delta(i, j) < radius) o.symbol_to_cell[j] = cell;
    ++cell;
  }
  o.target_size = cell;
  return o;
}

}  // namespace sofic
