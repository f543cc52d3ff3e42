#pragma once

// Finite-support sofic approximations: a map from group elements to
// permutations of {0,...,d-1} together with its multiplicativity and
// freeness defects. Evaluation outside the stored support fails loudly.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sofic/group.hpp"

namespace sofic {

class SoficMap {
public:
  using Perm = std::vector<int>;

  SoficMap(int d, std::map<GroupElement, Perm> table, bool exact_hom = false)
      : d_(d), table_(std::move(table)), exact_hom_(exact_hom) {
    if (d_ < 1) throw std::invalid_argument("SoficMap: d must be positive");
    bool has_identity = false;
    for (const auto& [g, p] : table_) {
      validate_perm(p);
      if (g.is_identity()) {
        has_identity = true;
        for (int j = 0; j < d_; ++j)
          if (p[j] != j) throw std::invalid_argument("SoficMap: identity must map to the identity permutation");
      }
    }
    if (!has_identity) throw std::invalid_argument("SoficMap: support must contain the identity");
  }

  int d() const { return d_; }
  bool exact_homomorphism() const { return exact_hom_; }
  const std::map<GroupElement, Perm>& table() const { return table_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  bool supports(const GroupElement& g) const { return table_.count(g) != 0; }

  const Perm& perm(const GroupElement& g) const {
    auto it = table_.find(g);
    if (it == table_.end())
      throw std::out_of_range("element outside sofic support: " + g.str());
    return it->second;
  }

  Perm inverse_perm(const GroupElement& g) const {
    const Perm& p = perm(g);
    Perm inv(d_);
    for (int j = 0; j < d_; ++j) inv[p[j]] = j;
    return inv;
  }

  // Fraction of points where sigma(g)sigma(h) and sigma(gh) disagree.
  double multiplicativity_defect(const GroupElement& g, const GroupElement& h) const {
    const Perm& pg = perm(g);
    const Perm& ph = perm(h);
    const Perm& pgh = perm(g * h);
    int bad = 0;
    for (int k = 0; k < d_; ++k)
      if (pg[ph[k]] != pgh[k]) ++bad;
    return static_cast<double>(bad) / d_;
  }

  // Fraction of points where sigma(g) and sigma(h) differ (1 is best
  // for g != h).
  double freeness_separation(const GroupElement& g, const GroupElement& h) const {
    const Perm& pg = perm(g);
    const Perm& ph = perm(h);
    int diff = 0;
    for (int k = 0; k < d_; ++k)
      if (pg[k] != ph[k]) ++diff;
    return static_cast<double>(diff) / d_;
  }

  nlohmann::json to_json() const {
    nlohmann::json support = nlohmann::json::array();
    nlohmann::json table = nlohmann::json::object();
    for (const auto& [g, p] : table_) {
      std::string key = g.str();
      support.push_back(key);
      std::vector<int> one_based(p.size());
      for (size_t j = 0; j < p.size(); ++j) one_based[j] = p[j] + 1;
      table[key] = one_based;
    }
    return {{"d", d_}, {"support", support}, {"table", table}};
  }

  static SoficMap from_json(const nlohmann::json& j, const Group& group) {
    std::map<GroupElement, Perm> table;
    for (const auto& [key, arr] : j.at("table").items()) {
      Perm p;
      for (int v : arr) p.push_back(v - 1);
      table[group.parse_element(key)] = std::move(p);
    }
    return SoficMap(j.at("d").get<int>(), std::move(table));
  }

private:
  void validate_perm(const Perm& p) const {
    if (static_cast<int>(p.size()) != d_)
      throw std::invalid_argument("SoficMap: permutation length != d");
    std::vector<char> seen(d_, 0);
    for (int v : p) {
      if (v < 0 || v >= d_ || seen[v])
        throw std::invalid_argument("SoficMap: table entry is not a bijection");
      seen[v] = 1;
    }
  }

  int d_;
  std::map<GroupElement, Perm> table_;
  bool exact_hom_;
  std::vector<std::string> warnings_;
};

// k in Z acts as the k-th power of the d-cycle. Exact homomorphism on
// support {-r,...,r}; rejected when the window wraps.
inline SoficMap cyclic_sofic_map(int d, int support_radius) {
  if (d < 1) throw std::invalid_argument("cyclic_sofic_map: d must be positive");
  if (2 * support_radius >= d)
    throw std::invalid_argument("cyclic_sofic_map: support_radius must be < d/2");
  std::map<GroupElement, SoficMap::Perm> table;
  for (int k = -support_radius; k <= support_radius; ++k) {
    SoficMap::Perm p(d);
    for (int j = 0; j < d; ++j) p[j] = ((j + k) % d + d) % d;
    table[GroupElement::integer(k)] = std::move(p);
  }
  return SoficMap(d, std::move(table), /*exact_hom=*/true);
}

// Left multiplication on a finite quotient. For Z^k the quotient is
// (Z/m_1) x ... x (Z/m_k); support is the box of the given radius.
inline SoficMap quotient_sofic_map(const Group& group, const std::vector<std::int64_t>& moduli,
                                   int support_radius) {
  size_t rank;
  if (group.kind == Group::Kind::Integers) rank = 1;
  else if (group.kind == Group::Kind::Product) {
    for (const auto& f : group.factors)
      if (f.kind != Group::Kind::Integers)
        throw std::invalid_argument("quotient_sofic_map: only Z^k groups supported");
    rank = group.factors.size();
  } else {
    throw std::invalid_argument("quotient_sofic_map: spec does not define a quotient for this group");
  }
  if (moduli.size() != rank)
    throw std::invalid_argument("quotient_sofic_map: moduli arity mismatch");
  std::int64_t d = 1;
  for (auto m : moduli) {
    if (m < 1) throw std::invalid_argument("quotient_sofic_map: moduli must be positive");
    d *= m;
  }

  auto point_index = [&](const std::vector<std::int64_t>& coords) {
    std::int64_t idx = 0;
    for (size_t i = 0; i < coords.size(); ++i)
      idx = idx * moduli[i] + ((coords[i] % moduli[i]) + moduli[i]) % moduli[i];
    return idx;
  };
  auto element_coords = [&](const GroupElement& g) {
    std::vector<std::int64_t> c;
    if (rank == 1) c.push_back(std::get<std::int64_t>(g.payload()));
    else
      for (const auto& q : std::get<GroupElement::Tuple>(g.payload()))
        c.push_back(std::get<std::int64_t>(q.payload()));
    return c;
  };

  // enumerate support box
  std::vector<GroupElement> support;
  std::vector<std::int64_t> coords(rank, -support_radius);
  while (true) {
    if (rank == 1) support.push_back(GroupElement::integer(coords[0]));
    else {
      GroupElement::Tuple t;
      for (auto c : coords) t.push_back(GroupElement::integer(c));
      support.push_back(GroupElement::tuple(std::move(t)));
    }
    size_t i = 0;
    for (; i < rank; ++i) {
      if (++coords[i] <= support_radius) break;
      coords[i] = -support_radius;
    }
    if (i == rank) break;
  }

  std::map<GroupElement, SoficMap::Perm> table;
  for (const auto& g : support) {
    auto gc = element_coords(g);
    SoficMap::Perm p(static_cast<size_t>(d));
    std::vector<std::int64_t> pt(rank, 0);
    for (std::int64_t j = 0; j < d; ++j) {
      // decode j into quotient coordinates
      std::int64_t rem = j;
      for (size_t i = rank; i-- > 0;) {
        pt[i] = rem % moduli[i];
        rem /= moduli[i];
      }
      for (size_t i = 0; i < rank; ++i) pt[i] += gc[i];
      p[static_cast<size_t>(j)] = static_cast<int>(point_index(pt));
    }
    table[g] = std::move(p);
  }
  SoficMap sigma(static_cast<int>(d), std::move(table), /*exact_hom=*/true);
  // flag support elements that collapse onto earlier ones
  for (auto it = sigma.table().begin(); it != sigma.table().end(); ++it)
    for (auto jt = std::next(it); jt != sigma.table().end(); ++jt)
      if (it->second == jt->second)
        sigma.add_warning("support exceeds injectivity radius: " + it->first.str() + " and " +
                          jt->first.str() + " lift to the same permutation");
  return sigma;
}

// Independent uniform random permutation per free generator; words get
// the corresponding permutation product. Per-generator seeds are derived
// from the master seed by mixing in the generator index.
inline SoficMap random_permutation_sofic_map(const Group& free_gp, int d, int word_radius,
                                             std::uint64_t seed) {
  if (free_gp.kind != Group::Kind::Free)
    throw std::invalid_argument("random_permutation_sofic_map: group must be free");
  if (d < 2) throw std::invalid_argument("random_permutation_sofic_map: d must be >= 2");
  int rank = static_cast<int>(free_gp.n);

  std::vector<SoficMap::Perm> gen_perm(rank);
  for (int i = 0; i < rank; ++i) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(i) + 1};
    std::mt19937_64 rng(seq);
    SoficMap::Perm p(d);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    gen_perm[i] = std::move(p);
  }
  auto apply_letter = [&](int letter, const SoficMap::Perm& in) {
    const SoficMap::Perm& g = gen_perm[std::abs(letter) - 1];
    SoficMap::Perm out(d);
    // appending a letter multiplies on the right: perm(w l) = perm(w) o perm(l)
    if (letter > 0)
      for (int j = 0; j < d; ++j) out[j] = in[g[j]];
    else {
      SoficMap::Perm ginv(d);
      for (int j = 0; j < d; ++j) ginv[g[j]] = j;
      for (int j = 0; j < d; ++j) out[j] = in[ginv[j]];
    }
    return out;
  };

  // enumerate reduced words of length <= word_radius
  std::map<GroupElement, SoficMap::Perm> table;
  SoficMap::Perm id(d);
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::pair<GroupElement::Word, SoficMap::Perm>> frontier{{{}, id}};
  table[GroupElement::word({})] = id;
  for (int len = 0; len < word_radius; ++len) {
    std::vector<std::pair<GroupElement::Word, SoficMap::Perm>> next;
    for (const auto& [w, p] : frontier) {
      for (int l = -rank; l <= rank; ++l) {
        if (l == 0) continue;
        if (!w.empty() && w.back() == -l) continue;
        GroupElement::Word w2 = w;
        w2.push_back(l);
        SoficMap::Perm p2 = apply_letter(l, p);
        table[GroupElement::word(w2)] = p2;
        next.emplace_back(std::move(w2), std::move(p2));
      }
    }
    frontier = std::move(next);
  }
  return SoficMap(d, std::move(table), /*exact_hom=*/false);
}

// A sofic approximation sequence presented as a lazy family over an
// increasing list of sizes.
struct SoficFamily {
  enum class Provenance { Cyclic, Quotient, RandomPermutation };

  Group group;
  std::vector<int> sizes;
  Provenance provenance = Provenance::Cyclic;
  std::uint64_t seed = 0;
  std::function<SoficMap(int d)> make;

  SoficFamily(Group g, std::vector<int> ds, Provenance prov, std::uint64_t sd,
              std::function<SoficMap(int)> mk)
      : group(std::move(g)), sizes(std::move(ds)), provenance(prov), seed(sd), make(std::move(mk)) {
    for (size_t i = 1; i < sizes.size(); ++i)
      if (sizes[i] <= sizes[i - 1])
        throw std::invalid_argument("SoficFamily: sizes must strictly increase");
  }

  static SoficFamily cyclic(std::vector<int> sizes, int support_radius) {
    return SoficFamily(Group::integers(), std::move(sizes), Provenance::Cyclic, 0,
                       [support_radius](int d) { return cyclic_sofic_map(d, support_radius); });
  }
  static SoficFamily random_free(int rank, std::vector<int> sizes, int word_radius,
                                 std::uint64_t seed) {
    Group g = Group::free_group(rank);
    return SoficFamily(g, std::move(sizes), Provenance::RandomPermutation, seed,
                       [g, word_radius, seed](int d) {
                         return random_permutation_sofic_map(g, d, word_radius, seed);
                       });
  }
};

}  // namespace sofic
