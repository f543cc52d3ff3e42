#pragma once

// Finite groups as explicit multiplication tables, with their complete
// lists of irreducible unitary representations (characters included).
// Supported: cyclic groups, direct products of supported groups, and the
// symmetric group on three letters.

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sofic/group.hpp"

namespace sofic {

struct FiniteGroup {
  std::string name;
  std::vector<GroupElement> elements;  // elements[0] is the identity
  std::vector<std::vector<int>> mult;  // mult[i][j] = index of elements[i]*elements[j]
  std::vector<int> inverse;
  std::vector<int> generators;  // indices into elements

  int order() const { return static_cast<int>(elements.size()); }

  int index_of(const GroupElement& g) const {
    auto it = index_.find(g);
    if (it == index_.end())
      throw std::invalid_argument("element not in this finite group: " + g.str());
    return it->second;
  }

  void finalize() {
    index_.clear();
    for (int i = 0; i < order(); ++i) index_[elements[i]] = i;
    mult.assign(order(), std::vector<int>(order()));
    inverse.assign(order(), -1);
    for (int i = 0; i < order(); ++i)
      for (int j = 0; j < order(); ++j) {
        mult[i][j] = index_of(elements[i] * elements[j]);
        if (mult[i][j] == 0) inverse[i] = j;
      }
    if (!elements[0].is_identity())
      throw std::invalid_argument("FiniteGroup: elements[0] must be the identity");
  }

  static FiniteGroup cyclic(int n) {
    if (n < 1) throw std::invalid_argument("cyclic: order must be positive");
    FiniteGroup G;
    G.name = "Z/" + std::to_string(n);
    for (int r = 0; r < n; ++r) G.elements.push_back(GroupElement::residue(r, n));
    if (n > 1) G.generators = {1};
    G.finalize();
    return G;
  }

  static FiniteGroup product(const FiniteGroup& A, const FiniteGroup& B) {
    FiniteGroup G;
    G.name = A.name + "x" + B.name;
    for (int i = 0; i < A.order(); ++i)
      for (int j = 0; j < B.order(); ++j)
        G.elements.push_back(GroupElement::tuple({A.elements[i], B.elements[j]}));
    G.finalize();
    for (int g : A.generators)
      G.generators.push_back(G.index_of(GroupElement::tuple({A.elements[g], B.elements[0]})));
    for (int g : B.generators)
      G.generators.push_back(G.index_of(GroupElement::tuple({A.elements[0], B.elements[g]})));
    return G;
  }

  static FiniteGroup symmetric3() {
    FiniteGroup G;
    G.name = "S3";
    const std::vector<std::vector<int>> perms = {
        {0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}};
    for (const auto& p : perms) G.elements.push_back(GroupElement::permutation(p));
    G.generators = {1, 2};  // the two adjacent transpositions
    G.finalize();
    return G;
  }

private:
  std::map<GroupElement, int> index_;
};

// A single irreducible unitary representation, given elementwise.
struct Irrep {
  std::string name;
  int dim = 1;
  std::vector<Eigen::MatrixXcd> matrices;  // one per group element

  std::vector<std::complex<double>> character() const {
    std::vector<std::complex<double>> chi;
    chi.reserve(matrices.size());
    for (const auto& m : matrices) chi.push_back(m.trace());
    return chi;
  }
};

namespace detail {

// 2-dimensional constituent of the permutation representation of S3 on
// the sum-zero subspace of C^3, made unitary via an orthonormal basis.
inline Irrep s3_standard_irrep(const FiniteGroup& G) {
  Eigen::MatrixXcd basis(3, 2);
  basis << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0),
      -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0),
      0.0, -2.0 / std::sqrt(6.0);
  Irrep rep{"standard", 2, {}};
  for (const auto& g : G.elements) {
    const auto& p = std::get<GroupElement::Perm>(g.payload());
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(3, 3);
    for (int i = 0; i < 3; ++i) P(p[i], i) = 1.0;
    rep.matrices.push_back(basis.adjoint() * P * basis);
  }
  return rep;
}

inline int s3_sign(const GroupElement& g) {
  auto p = std::get<GroupElement::Perm>(g.payload());
  int sign = 1;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) sign = -sign;
  return sign;
}

}  // namespace detail

// The complete list of irreducibles. Cyclic groups get their characters,
// products get tensor products of factor irreps, S3 gets its classical
// three (trivial, sign, standard).
inline std::vector<Irrep> irreducible_reps(const FiniteGroup& G) {
  std::vector<Irrep> reps;
  if (G.name.rfind("Z/", 0) == 0 && G.name.find('x') == std::string::npos) {
    const int n = G.order();
    for (int k = 0; k < n; ++k) {
      Irrep rep{"chi" + std::to_string(k), 1, {}};
      for (int r = 0; r < n; ++r) {
        double theta = 2.0 * std::numbers::pi * k * r / n;
        Eigen::MatrixXcd m(1, 1);
        m(0, 0) = std::complex<double>(std::cos(theta), std::sin(theta));
        rep.matrices.push_back(m);
      }
      reps.push_back(std::move(rep));
    }
    return reps;
  }
  if (G.name == "S3") {
    Irrep triv{"trivial", 1, {}}, sign{"sign", 1, {}};
    for (const auto& g : G.elements) {
      triv.matrices.push_back(Eigen::MatrixXcd::Ones(1, 1));
      Eigen::MatrixXcd m(1, 1);
      m(0, 0) = static_cast<double>(detail::s3_sign(g));
      sign.matrices.push_back(m);
    }
    reps.push_back(std::move(triv));
    reps.push_back(std::move(sign));
    reps.push_back(detail::s3_standard_irrep(G));
    return reps;
  }
  // product group: split each element into its two coordinates and take
  // tensor products of the factor irreps
  auto split = G.name.find('x');
  if (split == std::string::npos)
    throw std::invalid_argument("irreducible_reps: unsupported group " + G.name);
  // reconstruct the factors from the element payloads
  std::vector<GroupElement> first_parts, second_parts;
  std::map<GroupElement, int> seen1, seen2;
  for (const auto& g : G.elements) {
    const auto& t = std::get<GroupElement::Tuple>(g.payload());
    if (t.size() != 2) throw std::invalid_argument("irreducible_reps: only binary products supported");
    if (!seen1.count(t[0])) {
      seen1[t[0]] = static_cast<int>(first_parts.size());
      first_parts.push_back(t[0]);
    }
    if (!seen2.count(t[1])) {
      seen2[t[1]] = static_cast<int>(second_parts.size());
      second_parts.push_back(t[1]);
    }
  }
  FiniteGroup A, B;
  A.name = G.name.substr(0, split);
  A.elements = first_parts;
  A.finalize();
  B.name = G.name.substr(split + 1);
  B.elements = second_parts;
  B.finalize();
  auto ra = irreducible_reps(A);
  auto rb = irreducible_reps(B);
  for (const auto& pa : ra)
    for (const auto& pb : rb) {
      Irrep rep{pa.name + "*" + pb.name, pa.dim * pb.dim, {}};
      for (const auto& g : G.elements) {
        const auto& t = std::get<GroupElement::Tuple>(g.payload());
        const auto& ma = pa.matrices[A.index_of(t[0])];
        const auto& mb = pb.matrices[B.index_of(t[1])];
        Eigen::MatrixXcd m(pa.dim * pb.dim, pa.dim * pb.dim);
        for (int i = 0; i < pa.dim; ++i)
          for (int j = 0; j < pa.dim; ++j)
            m.block(i * pb.dim, j * pb.dim, pb.dim, pb.dim) = ma(i, j) * mb;
        rep.matrices.push_back(std::move(m));
      }
      reps.push_back(std::move(rep));
    }
  return reps;
}

// <chi1, chi2> = (1/|G|) sum over g of chi1(g) * conj(chi2(g))
inline std::complex<double> character_inner_product(const FiniteGroup& G,
                                                    const std::vector<std::complex<double>>& chi1,
                                                    const std::vector<std::complex<double>>& chi2) {
  std::complex<double> s = 0.0;
  for (int i = 0; i < G.order(); ++i) s += chi1[i] * std::conj(chi2[i]);
  return s / static_cast<double>(G.order());
}

}  // namespace sofic
