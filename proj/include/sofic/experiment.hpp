#pragma once

// Batch experiment plumbing: flat key=value configs with a stable hash,
// a content-addressed result cache, CSV / summary-JSON writers, and the
// property-check suites exposed by the command-line tool.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sofic/entropy.hpp"
#include "sofic/metric.hpp"
#include "sofic/shift_system.hpp"
#include "sofic/spectral.hpp"

namespace sofic {

// ---------------------------------------------------------------------
// Config files: one "key = value" per line, '#' comments, values may be
// space-separated lists. A "system_file" key pulls in another config
// whose keys the outer file overrides.

class ConfigMap {
public:
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const { return kv_; }

  std::string get_string(const std::string& key, const std::string& fallback = "") const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }
  std::string require(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw std::invalid_argument("config: missing required key '" + key + "'");
    return it->second;
  }
  double get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : parse_double(key, it->second);
  }
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : parse_int(key, it->second);
  }
  std::vector<double> get_double_list(const std::string& key) const {
    std::vector<double> out;
    std::istringstream in(require(key));
    std::string tok;
    while (in >> tok) out.push_back(parse_double(key, tok));
    if (out.empty()) throw std::invalid_argument("config: empty list for key '" + key + "'");
    return out;
  }
  std::vector<int> get_int_list(const std::string& key) const {
    std::vector<int> out;
    std::istringstream in(require(key));
    std::string tok;
    while (in >> tok) out.push_back(static_cast<int>(parse_int(key, tok)));
    if (out.empty()) throw std::invalid_argument("config: empty list for key '" + key + "'");
    return out;
  }

private:
  static double parse_double(const std::string& key, const std::string& s) {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size())
      throw std::invalid_argument("config: key '" + key + "' has a malformed number '" + s + "'");
    return v;
  }
  static std::int64_t parse_int(const std::string& key, const std::string& s) {
    size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size())
      throw std::invalid_argument("config: key '" + key + "' has a malformed integer '" + s + "'");
    return v;
  }
  std::map<std::string, std::string> kv_;
};

inline ConfigMap parse_config_text(const std::string& text, const std::string& origin = "<text>") {
  ConfigMap cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto strip = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      size_t b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + line + "'");
    std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": empty key");
    cfg.set(key, value);
  }
  return cfg;
}

inline ConfigMap parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  ConfigMap cfg = parse_config_text(buf.str(), path.string());
  if (cfg.has("system_file")) {
    auto nested = parse_config_file(path.parent_path() / cfg.get_string("system_file"));
    ConfigMap merged = nested;
    for (const auto& [k, v] : cfg.entries())
      if (k != "system_file") merged.set(k, v);
    return merged;
  }
  return cfg;
}

// FNV-1a over the sorted key=value pairs: stable under key reordering
// and across runs.
inline std::string config_hash(const ConfigMap& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [k, v] : cfg.entries()) {
    mix(k);
    mix("=");
    mix(v);
    mix("\n");
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

// ---------------------------------------------------------------------
// Content-addressed cell cache on disk

class ResultCache {
public:
  explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  bool get(const std::string& key, std::string& value) const {
    std::lock_guard<std::mutex> lock(mu_);
    std::ifstream in(path_for(key));
    if (!in) return false;
    std::stringstream buf;
    buf << in.rdbuf();
    value = buf.str();
    return true;
  }

  void put(const std::string& key, const std::string& value) const {
    std::lock_guard<std::mutex> lock(mu_);
    std::ofstream out(path_for(key));
    out << value;
  }

private:
  std::filesystem::path path_for(const std::string& key) const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : key) {
      h ^= c;
      h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return dir_ / (std::string(buf) + ".cell");
  }

  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

// ---------------------------------------------------------------------
// Serialization helpers

inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline std::string format_double_exact(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_double_exact(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

inline std::string serialize_count_result(const CountResult& r) {
  std::ostringstream out;
  out << "d " << r.d << "\nlog_count " << format_double_exact(r.log_count) << "\nempty "
      << (r.empty ? 1 : 0) << "\nmode " << static_cast<int>(r.mode) << "\ndirection "
      << static_cast<int>(r.direction) << "\nmc_samples " << r.mc_samples << "\nmc_half_width "
      << format_double_exact(r.mc_half_width) << "\n";
  return out.str();
}

inline CountResult deserialize_count_result(const std::string& text) {
  CountResult r;
  std::istringstream in(text);
  std::string key, value;
  while (in >> key >> value) {
    if (key == "d") r.d = std::stoi(value);
    else if (key == "log_count") r.log_count = parse_double_exact(value);
    else if (key == "empty") r.empty = value == "1";
    else if (key == "mode") r.mode = static_cast<CountingMode>(std::stoi(value));
    else if (key == "direction") r.direction = static_cast<BoundDirection>(std::stoi(value));
    else if (key == "mc_samples") r.mc_samples = std::stoll(value);
    else if (key == "mc_half_width") r.mc_half_width = parse_double_exact(value);
  }
  return r;
}

inline std::string csv_row(const CellKey& k, const CountResult& r, int l_id) {
  std::ostringstream out;
  out << k.d << ',' << format_double(k.eps) << ',' << k.F_radius << ',' << format_double(k.delta)
      << ',' << l_id << ',' << counting_mode_name(r.mode) << ',' << direction_name(r.direction)
      << ',' << format_double(r.log_count) << ',' << format_double(r.normalized());
  return out.str();
}

// ---------------------------------------------------------------------
// Experiment construction from a config

inline ShiftSystem system_from_config(const ConfigMap& cfg) {
  std::string kind = cfg.require("system");
  if (kind == "bernoulli") {
    std::vector<double> probs = cfg.has("probs") ? cfg.get_double_list("probs")
                                                 : std::vector<double>{0.5, 0.5};
    Group group = Group::integers();
    if (cfg.get_string("group") == "free")
      group = Group::free_group(cfg.get_int("rank", 2));
    const int a = static_cast<int>(probs.size());
    return ShiftSystem::bernoulli(group, Alphabet::indexed(a), std::move(probs));
  }
  if (kind == "rotation") return ShiftSystem::rotation(static_cast<int>(cfg.get_int("rotation_n", 2)));
  if (kind == "trivial") return ShiftSystem::trivial_action(static_cast<int>(cfg.get_int("trivial_n", 2)));
  throw std::invalid_argument("config: unknown system '" + kind + "'");
}

inline SoficFamily family_from_config(const ConfigMap& cfg) {
  std::string kind = cfg.get_string("family", "cyclic");
  std::vector<int> sizes = cfg.get_int_list("d_list");
  if (kind == "cyclic")
    return SoficFamily::cyclic(std::move(sizes), static_cast<int>(cfg.get_int("support_radius", 4)));
  if (kind == "random_free")
    return SoficFamily::random_free(static_cast<int>(cfg.get_int("rank", 2)), std::move(sizes),
                                    static_cast<int>(cfg.get_int("word_radius", 3)),
                                    static_cast<std::uint64_t>(cfg.get_int("seed", 0)));
  throw std::invalid_argument("config: unknown family '" + kind + "'");
}

inline SweepGrids grids_from_config(const ConfigMap& cfg) {
  SweepGrids g;
  g.eps_list = cfg.get_double_list("eps_list");
  g.delta_list = cfg.get_double_list("delta_list");
  g.F_radius_list = cfg.has("f_radius_list") ? cfg.get_int_list("f_radius_list") : std::vector<int>{0};
  g.L_radius_list = cfg.has("l_radius_list") ? cfg.get_int_list("l_radius_list") : std::vector<int>{0};
  return g;
}

inline CountingMode mode_from_config(const ConfigMap& cfg) {
  std::string mode = cfg.get_string("mode", "type-class");
  if (mode == "exact") return CountingMode::ExactEnumeration;
  if (mode == "type-class") return CountingMode::TypeClass;
  if (mode == "monte-carlo") return CountingMode::MonteCarlo;
  throw std::invalid_argument("config: unknown counting mode '" + mode + "'");
}

struct ExperimentResult {
  std::string config_hash;
  std::string csv;
  nlohmann::json summary;
  bool any_cell_error = false;
};

inline ExperimentResult run_experiment(const ConfigMap& cfg, int jobs = 1,
                                       const std::string& cache_dir = "") {
  ExperimentResult out;
  out.config_hash = config_hash(cfg);
  std::string method = cfg.get_string("method", "metric");
  std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));

  nlohmann::json cells = nlohmann::json::array();
  nlohmann::json warnings = nlohmann::json::array();
  std::ostringstream csv;
  csv << "d,epsilon,F_radius,delta,L_id,mode,direction,log_count,normalized_value\n";

  auto record_cell = [&](const CellKey& k, const CountResult& r, int l_id) {
    csv << csv_row(k, r, l_id) << "\n";
    nlohmann::json c = {{"d", k.d},
                        {"epsilon", k.eps},
                        {"F_radius", k.F_radius},
                        {"delta", k.delta},
                        {"L_id", l_id},
                        {"mode", counting_mode_name(r.mode)},
                        {"direction", direction_name(r.direction)},
                        {"log_count", r.empty ? nlohmann::json() : nlohmann::json(r.log_count)},
                        {"normalized_value",
                         r.empty ? nlohmann::json("-inf") : nlohmann::json(r.normalized())}};
    if (!r.empty && r.log_count < std::log(1e6))
      c["microstate_count"] = static_cast<std::int64_t>(std::llround(std::exp(r.log_count)));
    if (r.empty) c["microstate_count"] = 0;
    cells.push_back(std::move(c));
  };

  if (method == "spectral-certificate") {
    ShiftSystem system = system_from_config(cfg);
    std::vector<int> sizes = cfg.get_int_list("d_list");
    const int d = sizes.back();
    const int degree = static_cast<int>(cfg.get_int("filter_degree", std::min(127, d / 2 - 1)));
    const double halfwidth =
        cfg.get_double("filter_halfwidth_scale", 0.8) * 2.0 * std::numbers::pi / d;
    const double eps = cfg.get_double("certificate_eps", 0.2);
    const double M = cfg.get_double("certificate_M", 1.0);
    GroupAlgebraElement alpha = spectral_concentration_filter(degree, halfwidth);
    SoficMap sigma = cyclic_sofic_map(d, degree);
    WindowReport rep = window_trace_bound_check(alpha, sigma, eps);
    double bound = entropy_upper_certificate(1, M, eps, rep.trace_p);
    out.summary = {{"config_hash", out.config_hash},
                   {"method", method},
                   {"estimate", bound},
                   {"direction", "upper"},
                   {"trace_p", rep.trace_p},
                   {"trace_bound", rep.trace_bound},
                   {"trace_ok", rep.trace_ok},
                   {"filter_degree", degree},
                   {"d", d},
                   {"cells", cells},
                   {"warnings", warnings}};
    out.csv = csv.str();
    return out;
  }

  ShiftSystem system = system_from_config(cfg);
  SoficFamily family = family_from_config(cfg);
  SweepGrids grids = grids_from_config(cfg);
  CountingMode mode = mode_from_config(cfg);

  CellCacheGet cache_get;
  CellCachePut cache_put;
  std::shared_ptr<ResultCache> cache;
  if (!cache_dir.empty()) {
    cache = std::make_shared<ResultCache>(cache_dir);
    std::string hash = out.config_hash;
    auto key_string = [hash](const CellKey& k) {
      std::ostringstream s;
      s << hash << '/' << k.d << '/' << format_double_exact(k.eps) << '/' << k.F_radius << '/'
        << format_double_exact(k.delta) << '/' << k.L_radius;
      return s.str();
    };
    cache_get = [cache, key_string](const CellKey& k, CountResult& r) {
      std::string text;
      if (!cache->get(key_string(k), text)) return false;
      r = deserialize_count_result(text);
      return true;
    };
    cache_put = [cache, key_string](const CellKey& k, const CountResult& r) {
      cache->put(key_string(k), serialize_count_result(r));
    };
  }

  EntropyEstimate est =
      entropy_sweep(system, family, grids, mode, seed, jobs, cache_get, cache_put);
  for (const auto& [k, o] : est.cells) {
    if (!o.error.empty()) {
      out.any_cell_error = true;
      continue;
    }
    record_cell(k, o.result, k.L_radius);
  }
  for (const auto& w : est.warnings) warnings.push_back(w);

  out.summary = {{"config_hash", out.config_hash},
                 {"method", method},
                 {"estimate", std::isinf(est.value) ? nlohmann::json("-inf")
                                                    : nlohmann::json(est.value)},
                 {"direction", direction_name(est.direction)},
                 {"plateau", est.plateau},
                 {"provenance", est.provenance},
                 {"cells", cells},
                 {"warnings", warnings}};

  if (method == "observable" || method == "both") {
    const double kappa = cfg.get_double("kappa", 0.25);
    const int d = family.sizes.back();
    SoficMap sigma = family.make(d);
    Observable beta = ball_partition_observable(system, kappa);
    std::vector<int> pi(beta.target_size);
    for (int c = 0; c < beta.target_size; ++c) pi[c] = c;
    auto F = window_for_radius(system.group, grids.F_radius_list.back());
    CountResult obs =
        observable_entropy_cell(system, sigma, beta, beta, pi, F, grids.delta_list.back());
    out.summary["observable_estimate"] =
        obs.empty ? nlohmann::json("-inf") : nlohmann::json(obs.normalized());
    out.summary["observable_direction"] = direction_name(obs.direction);
    if (method == "both" && !obs.empty && std::isfinite(est.value))
      out.summary["metric_observable_gap"] = std::abs(est.value - obs.normalized());
  }

  out.csv = csv.str();
  return out;
}

// ---------------------------------------------------------------------
// Property-check suites (also exposed through the command-line tool)

struct VerifyReport {
  std::string suite;
  int checks = 0;
  int failures = 0;
  std::vector<std::string> messages;

  nlohmann::json to_json() const {
    return {{"suite", suite}, {"checks", checks}, {"failures", failures},
            {"pass", failures == 0}, {"messages", messages}};
  }
};

// random eps-separated subsets inside M p Ball never beat the volume bound
inline VerifyReport verify_packing(std::uint64_t seed = 7, int instances = 200) {
  VerifyReport rep;
  rep.suite = "packing";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim_dist(2, 32);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < instances; ++t) {
    int n = dim_dist(rng);
    int k = 1 + static_cast<int>(unif(rng) * n);
    k = std::min(k, n);
    // random orthonormal k-frame -> projection p with tr(p) = k/n
    Eigen::MatrixXd gaussian(n, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) gaussian(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
    double M = 0.5 + 2.0 * unif(rng);
    double eps = 0.05 + 0.4 * unif(rng);
    // sample points in M p Ball under the normalized norm
    int samples = 200;
    std::vector<Eigen::VectorXd> pts;
    for (int s = 0; s < samples; ++s) {
      Eigen::VectorXd coeff(k);
      for (int j = 0; j < k; ++j) coeff(j) = gauss(rng);
      Eigen::VectorXd v = Q * coeff;
      double norm = v.norm() / std::sqrt(static_cast<double>(n));  // normalized l2
      double target = M * std::pow(unif(rng), 1.0 / k);
      if (norm > 0) v *= target / norm;
      pts.push_back(std::move(v));
    }
    // greedy separated subset in the normalized metric
    std::vector<int> kept;
    for (int i = 0; i < samples; ++i) {
      bool ok = true;
      for (int j : kept)
        if ((pts[i] - pts[j]).norm() / std::sqrt(static_cast<double>(n)) <= eps) {
          ok = false;
          break;
        }
      if (ok) kept.push_back(i);
    }
    double bound = packing_bound(M, eps, static_cast<double>(k) / n, n);
    ++rep.checks;
    if (std::log(static_cast<double>(kept.size())) > bound + 1e-12) {
      ++rep.failures;
      rep.messages.push_back("packing bound violated at instance " + std::to_string(t));
    }
  }
  return rep;
}

// exact N_{2eps} <= S_eps <= N_eps on random small metric spaces
inline VerifyReport verify_chain(std::uint64_t seed = 11, int instances = 100) {
  VerifyReport rep;
  rep.suite = "chain";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size_dist(2, 12);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int t = 0; t < instances; ++t) {
    int n = size_dist(rng);
    std::vector<std::vector<double>> pts(n, std::vector<double>(2));
    for (auto& p : pts) {
      p[0] = unif(rng);
      p[1] = unif(rng);
    }
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        dist[i][j] = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
    PointCloud cloud{std::move(dist)};
    for (int e = 0; e < 5; ++e) {
      double eps = 0.05 + 0.3 * unif(rng);
      auto n2 = max_separated_count(cloud, 2.0 * eps, SearchMode::Exact);
      auto s1 = min_covering_count(cloud, eps, SearchMode::Exact);
      auto n1 = max_separated_count(cloud, eps, SearchMode::Exact);
      ++rep.checks;
      if (!(n2.count <= s1.count && s1.count <= n1.count)) {
        ++rep.failures;
        rep.messages.push_back("covering/packing chain violated at instance " + std::to_string(t));
      }
    }
  }
  return rep;
}

// intertwiner dimension equals the character inner product on all pairs
// of irreducibles of the supported groups
inline VerifyReport verify_schur() {
  VerifyReport rep;
  rep.suite = "schur";
  std::vector<FiniteGroup> groups;
  groups.push_back(FiniteGroup::cyclic(2));
  groups.push_back(FiniteGroup::cyclic(3));
  groups.push_back(FiniteGroup::cyclic(4));
  groups.push_back(FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)));
  groups.push_back(FiniteGroup::symmetric3());
  for (const auto& G : groups) {
    auto irreps = irreducible_reps(G);
    for (const auto& p1 : irreps)
      for (const auto& p2 : irreps) {
        FiniteDimRep r1(G, p1.matrices), r2(G, p2.matrices);
        int dim = hom_dimension(r1, r2);
        double ip = std::real(character_inner_product(G, p1.character(), p2.character()));
        ++rep.checks;
        if (dim != static_cast<int>(std::llround(ip))) {
          ++rep.failures;
          rep.messages.push_back("Schur mismatch: " + G.name + " " + p1.name + " vs " + p2.name);
        }
      }
  }
  return rep;
}

// every singular pair yields a witness passing its certificates
inline VerifyReport verify_witness() {
  VerifyReport rep;
  rep.suite = "witness";
  std::vector<FiniteGroup> groups;
  groups.push_back(FiniteGroup::cyclic(2));
  groups.push_back(FiniteGroup::cyclic(3));
  groups.push_back(FiniteGroup::cyclic(4));
  groups.push_back(FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)));
  groups.push_back(FiniteGroup::symmetric3());
  for (const auto& G : groups) {
    auto irreps = irreducible_reps(G);
    for (size_t i = 0; i < irreps.size(); ++i)
      for (size_t j = 0; j < irreps.size(); ++j) {
        if (i == j) continue;
        FiniteDimRep r1(G, irreps[i].matrices), r2(G, irreps[j].matrices);
        ++rep.checks;
        try {
          singularity_witness(r1, r2);  // throws if any certificate fails
        } catch (const std::exception& ex) {
          ++rep.failures;
          rep.messages.push_back(std::string("witness failure: ") + ex.what());
        }
      }
  }
  return rep;
}

inline VerifyReport run_verify_suite(const std::string& name, std::uint64_t seed = 0) {
  if (name == "packing") return verify_packing(seed ? seed : 7);
  if (name == "chain") return verify_chain(seed ? seed : 11);
  if (name == "schur") return verify_schur();
  if (name == "witness") return verify_witness();
  throw std::invalid_argument("unknown verify suite '" + name +
                              "' (available: packing, chain, schur, witness)");
}

}  // namespace sofic
