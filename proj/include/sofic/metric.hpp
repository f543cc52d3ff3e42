#pragma once

// Pseudometrics on finite alphabets, the normalized product pseudometric,
// covering/packing counts with exact and greedy modes, and the
// volume-packing bound.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sofic {

// Finite alphabet: labeled points with real-vector payloads.
struct Alphabet {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> coords;

  int size() const { return static_cast<int>(labels.size()); }

  static Alphabet binary() { return {{"0", "1"}, {{0.0}, {1.0}}}; }
  static Alphabet indexed(int n) {
    Alphabet a;
    for (int i = 0; i < n; ++i) {
      a.labels.push_back(std::to_string(i));
      a.coords.push_back({static_cast<double>(i)});
    }
    return a;
  }
};

// Symmetric nonnegative distance table on an alphabet; axioms checked
// exhaustively at construction.
class BasePseudometric {
public:
  explicit BasePseudometric(std::vector<std::vector<double>> table) : table_(std::move(table)) {
    const size_t n = table_.size();
    for (size_t i = 0; i < n; ++i) {
      if (table_[i].size() != n) throw std::invalid_argument("pseudometric table not square");
      if (table_[i][i] != 0.0) throw std::invalid_argument("pseudometric diagonal must be zero");
      for (size_t j = 0; j < n; ++j) {
        if (table_[i][j] < 0.0) throw std::invalid_argument("pseudometric must be nonnegative");
        if (std::abs(table_[i][j] - table_[j][i]) > 1e-12)
          throw std::invalid_argument("pseudometric must be symmetric");
        for (size_t k = 0; k < n; ++k)
          if (table_[i][j] > table_[i][k] + table_[k][j] + 1e-12)
            throw std::invalid_argument("pseudometric violates triangle inequality");
      }
    }
    diameter_ = 0.0;
    min_positive_ = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        diameter_ = std::max(diameter_, table_[i][j]);
        if (table_[i][j] > 0.0) min_positive_ = std::min(min_positive_, table_[i][j]);
      }
  }

  static BasePseudometric euclidean(const Alphabet& a) {
    const int n = a.size();
    std::vector<std::vector<double>> t(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (size_t k = 0; k < a.coords[i].size(); ++k) {
          double diff = a.coords[i][k] - a.coords[j][k];
          s += diff * diff;
        }
        t[i][j] = std::sqrt(s);
      }
    return BasePseudometric(std::move(t));
  }

  static BasePseudometric discrete(int n) {
    std::vector<std::vector<double>> t(n, std::vector<double>(n, 1.0));
    for (int i = 0; i < n; ++i) t[i][i] = 0.0;
    return BasePseudometric(std::move(t));
  }

  double operator()(int a, int b) const { return table_[a][b]; }
  int size() const { return static_cast<int>(table_.size()); }
  double diameter() const { return diameter_; }
  double min_positive_distance() const { return min_positive_; }

private:
  std::vector<std::vector<double>> table_;
  double diameter_;
  double min_positive_;
};

// A length-d assignment of alphabet symbol indices; the computational
// stand-in for a microstate.
using MicrostateField = std::vector<int>;

// Delta_2(z,w)^2 = (1/d) sum Delta(z_j, w_j)^2
inline double delta2(const MicrostateField& z, const MicrostateField& w,
                     const BasePseudometric& delta) {
  if (z.size() != w.size()) throw std::invalid_argument("delta2: length mismatch");
  double s = 0.0;
  for (size_t j = 0; j < z.size(); ++j) {
    double v = delta(z[j], w[j]);
    s += v * v;
  }
  return std::sqrt(s / static_cast<double>(z.size()));
}

// Finite metric space given by an explicit distance matrix.
class PointCloud {
public:
  explicit PointCloud(std::vector<std::vector<double>> dist) : dist_(std::move(dist)) {}

  static PointCloud from_fields(const std::vector<MicrostateField>& fields,
                                const BasePseudometric& delta) {
    const size_t n = fields.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = delta2(fields[i], fields[j], delta);
    return PointCloud(std::move(d));
  }

  int size() const { return static_cast<int>(dist_.size()); }
  double dist(int i, int j) const { return dist_[i][j]; }

private:
  std::vector<std::vector<double>> dist_;
};

enum class BoundDirection { Exact, Lower, Upper };

struct CountBound {
  std::int64_t count = 0;
  BoundDirection direction = BoundDirection::Exact;
};

enum class SearchMode { Exact, Greedy };

namespace detail {

// maximum eps-separated subset by branch and bound over the ">eps" graph
inline int max_separated_exact(const PointCloud& a, double eps) {
  const int n = a.size();
  std::vector<std::uint32_t> adj(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && a.dist(i, j) > eps) adj[i] |= (1u << j);
  int best = 0;
  std::function<void(std::uint32_t, int)> rec = [&](std::uint32_t cand, int cur) {
    if (cur + __builtin_popcount(cand) <= best) return;
    if (cand == 0) {
      best = std::max(best, cur);
      return;
    }
    int v = __builtin_ctz(cand);
    rec(cand & adj[v] & ~((1u << (v + 1)) - 1), cur + 1);  // take v
    rec(cand & ~(1u << v), cur);                           // skip v
  };
  rec(n == 32 ? ~0u : ((1u << n) - 1), 0);
  return best;
}

// minimum number of open eps-balls centered at points that cover all points
inline int min_cover_exact(const PointCloud& a, double eps) {
  const int n = a.size();
  if (n == 0) return 0;
  std::vector<std::uint32_t> ball(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (a.dist(i, j) < eps) ball[i] |= (1u << j);
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::vector<int> dp(static_cast<size_t>(full) + 1, -1);
  dp[0] = 0;
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    if (dp[mask] < 0) continue;
    int missing = __builtin_ctz(~mask & full);
    for (int i = 0; i < n; ++i) {
      if (!(ball[i] & (1u << missing))) continue;
      std::uint32_t next = mask | ball[i];
      if (dp[next] < 0 || dp[next] > dp[mask] + 1) dp[next] = dp[mask] + 1;
    }
  }
  if (dp[full] < 0) throw std::runtime_error("min_cover_exact: some point covers nothing (eps too small?)");
  return dp[full];
}

}  // namespace detail

// N_eps: maximum cardinality of an eps-separated subset (pairwise
// distance strictly > eps). Greedy mode scans in input order and returns
// a maximal (not maximum) set, a lower bound.
inline CountBound max_separated_count(const PointCloud& a, double eps, SearchMode mode) {
  if (eps <= 0.0) throw std::invalid_argument("max_separated_count: eps must be positive");
  if (a.size() == 0) return {0, BoundDirection::Exact};
  if (mode == SearchMode::Exact) {
    if (a.size() > 20) throw std::invalid_argument("exact separation search limited to 20 points");
    return {detail::max_separated_exact(a, eps), BoundDirection::Exact};
  }
  std::vector<int> kept;
  for (int i = 0; i < a.size(); ++i) {
    bool ok = true;
    for (int k : kept)
      if (a.dist(i, k) <= eps) {
        ok = false;
        break;
      }
    if (ok) kept.push_back(i);
  }
  return {static_cast<std::int64_t>(kept.size()), BoundDirection::Lower};
}

// S_eps: smallest cardinality of an eps-dense subset (every point within
// distance < eps of the net). Greedy mode returns an upper bound.
inline CountBound min_covering_count(const PointCloud& a, double eps, SearchMode mode) {
  if (eps <= 0.0) throw std::invalid_argument("min_covering_count: eps must be positive");
  if (a.size() == 0) return {0, BoundDirection::Exact};
  if (mode == SearchMode::Exact) {
    if (a.size() > 20) throw std::invalid_argument("exact cover search limited to 20 points");
    return {detail::min_cover_exact(a, eps), BoundDirection::Exact};
  }
  const int n = a.size();
  std::vector<char> covered(n, 0);
  std::int64_t picks = 0;
  int remaining = n;
  while (remaining > 0) {
    int best = -1, best_gain = -1;
    for (int i = 0; i < n; ++i) {
      int gain = 0;
      for (int j = 0; j < n; ++j)
        if (!covered[j] && a.dist(i, j) < eps) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best_gain <= 0) throw std::runtime_error("greedy cover stalled (eps too small?)");
    for (int j = 0; j < n; ++j)
      if (!covered[j] && a.dist(best, j) < eps) {
        covered[j] = 1;
        --remaining;
      }
    ++picks;
  }
  return {picks, BoundDirection::Upper};
}

// log |A| <= 2 tr(p) n log((3M+eps)/eps) for any eps-separated A inside
// M p Ball(l^2(n,u_n)). Returned in log form.
inline double packing_bound(double M, double eps, double trace_p, int n) {
  if (M <= 0.0 || eps <= 0.0) throw std::invalid_argument("packing_bound: M, eps must be positive");
  if (trace_p < 0.0 || trace_p > 1.0) throw std::invalid_argument("packing_bound: trace_p in [0,1]");
  return 2.0 * trace_p * static_cast<double>(n) * std::log((3.0 * M + eps) / eps);
}

}  // namespace sofic
