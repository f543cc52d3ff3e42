#pragma once

// The group algebra C(Gamma) with involution and canonical trace, formal
// *-polynomials, and lifts through sofic maps into matrix algebras. All
// matrix traces and norms are tracial (tr = Tr/n).

#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "sofic/group.hpp"
#include "sofic/sofic_map.hpp"

namespace sofic {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class GroupAlgebraElement {
public:
  GroupAlgebraElement() = default;
  GroupAlgebraElement(std::map<GroupElement, Complex> coeffs) : coeffs_(std::move(coeffs)) {
    prune();
  }
  static GroupAlgebraElement monomial(const GroupElement& g, Complex c = 1.0) {
    return GroupAlgebraElement({{g, c}});
  }

  const std::map<GroupElement, Complex>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  GroupAlgebraElement& operator+=(const GroupAlgebraElement& o) {
    for (const auto& [g, c] : o.coeffs_) coeffs_[g] += c;
    prune();
    return *this;
  }
  GroupAlgebraElement operator+(const GroupAlgebraElement& o) const {
    GroupAlgebraElement r = *this;
    r += o;
    return r;
  }
  GroupAlgebraElement operator-(const GroupAlgebraElement& o) const {
    return *this + o * Complex(-1.0);
  }
  GroupAlgebraElement operator*(Complex s) const {
    std::map<GroupElement, Complex> c = coeffs_;
    for (auto& [g, v] : c) v *= s;
    return GroupAlgebraElement(std::move(c));
  }

private:
  void prune() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();)
      it = (it->second == Complex(0.0)) ? coeffs_.erase(it) : std::next(it);
  }
  std::map<GroupElement, Complex> coeffs_;
};

inline GroupAlgebraElement convolve(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
  std::map<GroupElement, Complex> c;
  for (const auto& [g, cg] : a.coeffs())
    for (const auto& [h, ch] : b.coeffs()) c[g * h] += cg * ch;
  return GroupAlgebraElement(std::move(c));
}

inline GroupAlgebraElement star(const GroupAlgebraElement& a) {
  std::map<GroupElement, Complex> c;
  for (const auto& [g, cg] : a.coeffs()) c[g.inverse()] += std::conj(cg);
  return GroupAlgebraElement(std::move(c));
}

// tau(a) = coefficient of the identity.
inline Complex canonical_trace(const GroupAlgebraElement& a) {
  for (const auto& [g, c] : a.coeffs())
    if (g.is_identity()) return c;
  return 0.0;
}

inline nlohmann::json algebra_element_to_json(const GroupAlgebraElement& a) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [g, c] : a.coeffs())
    arr.push_back({{"g", g.str()}, {"re", c.real()}, {"im", c.imag()}});
  return {{"coeffs", arr}};
}

inline GroupAlgebraElement algebra_element_from_json(const nlohmann::json& j, const Group& group) {
  std::map<GroupElement, Complex> c;
  for (const auto& term : j.at("coeffs"))
    c[group.parse_element(term.at("g").get<std::string>())] +=
        Complex(term.at("re").get<double>(), term.at("im").get<double>());
  return GroupAlgebraElement(std::move(c));
}

// Lift stored as (coefficient, permutation) pairs; densified on demand.
class SparseLift {
public:
  SparseLift(int d, std::vector<std::pair<Complex, SoficMap::Perm>> terms)
      : d_(d), terms_(std::move(terms)) {}

  int d() const { return d_; }

  Matrix dense() const {
    Matrix m = Matrix::Zero(d_, d_);
    for (const auto& [c, p] : terms_)
      for (int j = 0; j < d_; ++j) m(p[j], j) += c;  // column j has 1 at p[j]
    return m;
  }

  Vector apply(const Vector& v) const {
    Vector out = Vector::Zero(d_);
    for (const auto& [c, p] : terms_)
      for (int j = 0; j < d_; ++j) out(p[j]) += c * v(j);
    return out;
  }

private:
  int d_;
  std::vector<std::pair<Complex, SoficMap::Perm>> terms_;
};

inline SparseLift lift_sparse(const SoficMap& sigma, const GroupAlgebraElement& a) {
  std::vector<std::pair<Complex, SoficMap::Perm>> terms;
  for (const auto& [g, c] : a.coeffs()) terms.emplace_back(c, sigma.perm(g));
  return SparseLift(sigma.d(), std::move(terms));
}

inline Matrix lift(const SoficMap& sigma, const GroupAlgebraElement& a) {
  return lift_sparse(sigma, a).dense();
}

inline Complex matrix_trace(const Matrix& m) { return m.trace() / static_cast<double>(m.rows()); }

inline double hs_norm(const Matrix& m) {
  return m.norm() / std::sqrt(static_cast<double>(m.rows()));
}

// Largest singular value by power iteration on A*A.
inline double op_norm(const Matrix& m, double tol = 1e-10, int max_iter = 10000) {
  if (m.rows() == 0) return 0.0;
  Matrix ata = m.adjoint() * m;
  Vector v = Vector::Ones(m.cols());
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = ata * v;
    double nl = w.norm();
    if (nl == 0.0) return 0.0;
    w /= nl;
    if (std::abs(nl - lambda) < tol * std::max(1.0, nl)) {
      lambda = nl;
      break;
    }
    lambda = nl;
    v = w;
  }
  return std::sqrt(lambda);
}

// Formal *-polynomial: a sum of monomials, each a coefficient times a
// word over the indeterminates and their stars.
class StarPolynomial {
public:
  struct Letter {
    int index;  // 0-based indeterminate
    bool starred;
  };
  struct Monomial {
    Complex coeff;
    std::vector<Letter> word;
  };

  StarPolynomial() = default;
  StarPolynomial(std::vector<Monomial> ms) : monomials_(std::move(ms)) { prune(); }

  static StarPolynomial variable(int index) {
    return StarPolynomial(std::vector<Monomial>{{1.0, {{index, false}}}});
  }

  const std::vector<Monomial>& monomials() const { return monomials_; }

  // Evaluate over any *-algebra given multiply/star/axpy callbacks and
  // additive/multiplicative units.
  GroupAlgebraElement evaluate(const std::vector<GroupAlgebraElement>& args,
                               const GroupElement& identity) const {
    GroupAlgebraElement sum;
    for (const auto& mono : monomials_) {
      GroupAlgebraElement term = GroupAlgebraElement::monomial(identity, 1.0);
      for (const auto& l : mono.word) {
        const GroupAlgebraElement& x = args.at(l.index);
        term = convolve(term, l.starred ? star(x) : x);
      }
      sum += term * mono.coeff;
    }
    return sum;
  }

  Matrix evaluate(const std::vector<Matrix>& args) const {
    if (args.empty()) throw std::invalid_argument("StarPolynomial: no arguments");
    const auto n = args.front().rows();
    Matrix sum = Matrix::Zero(n, n);
    for (const auto& mono : monomials_) {
      Matrix term = Matrix::Identity(n, n);
      for (const auto& l : mono.word) {
        const Matrix& x = args.at(l.index);
        term = l.starred ? Matrix(term * x.adjoint()) : Matrix(term * x);
      }
      sum += mono.coeff * term;
    }
    return sum;
  }

private:
  void prune() {
    std::erase_if(monomials_, [](const Monomial& m) { return m.coeff == Complex(0.0); });
  }
  std::vector<Monomial> monomials_;
};

// || P(sigma(a_1),...,sigma(a_n)) - sigma(P(a_1,...,a_n)) ||_2
inline double embedding_defect(const SoficMap& sigma, const StarPolynomial& P,
                               const std::vector<GroupAlgebraElement>& args,
                               const GroupElement& identity) {
  std::vector<Matrix> lifted;
  lifted.reserve(args.size());
  for (const auto& a : args) lifted.push_back(lift(sigma, a));
  Matrix lhs = P.evaluate(lifted);
  Matrix rhs = lift(sigma, P.evaluate(args, identity));
  return hs_norm(lhs - rhs);
}

}  // namespace sofic
