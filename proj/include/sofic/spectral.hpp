#pragma once

// Finite-dimensional unitary representations: left-regular and Koopman
// constructions, intertwiner spaces, singularity tests and witnesses,
// the singular/absolutely-continuous decomposition against a reference
// representation, and the spectral-window machinery certifying entropy
// upper bounds.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sofic/algebra.hpp"
#include "sofic/finite_group.hpp"

namespace sofic {

class FiniteDimRep {
public:
  // matrices: one unitary per group element, homomorphism property and
  // unitarity validated to 1e-10.
  FiniteDimRep(FiniteGroup group, std::vector<Matrix> matrices, bool constants_removed = false)
      : group_(std::move(group)), matrices_(std::move(matrices)),
        constants_removed_(constants_removed) {
    if (static_cast<int>(matrices_.size()) != group_.order())
      throw std::invalid_argument("FiniteDimRep: need one matrix per group element");
    dim_ = static_cast<int>(matrices_.at(0).rows());
    for (const auto& m : matrices_) {
      if (m.rows() != dim_ || m.cols() != dim_)
        throw std::invalid_argument("FiniteDimRep: matrices must be square of equal size");
      if (dim_ > 0 && (m.adjoint() * m - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("FiniteDimRep: generator image is not unitary to 1e-10");
    }
    for (int i = 0; i < group_.order(); ++i)
      for (int j = 0; j < group_.order(); ++j)
        if (dim_ > 0 && (matrices_[i] * matrices_[j] - matrices_[group_.mult[i][j]])
                                .cwiseAbs()
                                .maxCoeff() > 1e-10)
          throw std::invalid_argument("FiniteDimRep: group relations violated beyond 1e-10");
  }

  // Build from generator images by multiplying along the group's table.
  static FiniteDimRep from_generators(const FiniteGroup& group,
                                      const std::vector<Matrix>& gen_images,
                                      bool constants_removed = false) {
    if (gen_images.size() != group.generators.size())
      throw std::invalid_argument("from_generators: one matrix per generator required");
    const int n = static_cast<int>(gen_images.empty() ? 1 : gen_images.front().rows());
    std::vector<Matrix> mats(group.order());
    std::vector<char> known(group.order(), 0);
    mats[0] = Matrix::Identity(n, n);
    known[0] = 1;
    bool progress = true;
    while (progress) {
      progress = false;
      for (size_t gi = 0; gi < group.generators.size(); ++gi) {
        int g = group.generators[gi];
        for (int i = 0; i < group.order(); ++i) {
          if (!known[i]) continue;
          int k = group.mult[g][i];
          if (!known[k]) {
            mats[k] = gen_images[gi] * mats[i];
            known[k] = 1;
            progress = true;
          }
        }
      }
    }
    for (char k : known)
      if (!k) throw std::invalid_argument("from_generators: generators do not generate the group");
    return FiniteDimRep(group, std::move(mats), constants_removed);
  }

  const FiniteGroup& group() const { return group_; }
  int dim() const { return dim_; }
  bool constants_removed() const { return constants_removed_; }
  const Matrix& at(int element_index) const { return matrices_.at(element_index); }
  const std::vector<Matrix>& matrices() const { return matrices_; }

  std::vector<Complex> character() const {
    std::vector<Complex> chi;
    chi.reserve(matrices_.size());
    for (const auto& m : matrices_) chi.push_back(m.trace());
    return chi;
  }

  nlohmann::json to_json() const {
    nlohmann::json gens = nlohmann::json::array();
    for (int g : group_.generators) {
      nlohmann::json rows = nlohmann::json::array();
      for (int i = 0; i < dim_; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < dim_; ++j)
          row.push_back({matrices_[g](i, j).real(), matrices_[g](i, j).imag()});
        rows.push_back(row);
      }
      gens.push_back({{"name", group_.elements[g].str()}, {"matrix", rows}});
    }
    return {{"group", group_.name},
            {"dim", dim_},
            {"generators", gens},
            {"constants_removed", constants_removed_}};
  }

  static FiniteDimRep from_json(const nlohmann::json& j, const FiniteGroup& group) {
    std::vector<Matrix> gen_images;
    for (const auto& gen : j.at("generators")) {
      const auto& rows = gen.at("matrix");
      const int n = static_cast<int>(rows.size());
      Matrix m(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          m(r, c) = Complex(rows[r][c][0].get<double>(), rows[r][c][1].get<double>());
      gen_images.push_back(std::move(m));
    }
    return from_generators(group, gen_images, j.value("constants_removed", false));
  }

private:
  FiniteGroup group_;
  std::vector<Matrix> matrices_;
  int dim_ = 0;
  bool constants_removed_ = false;
};

// Permutation matrices of left translation on l^2(G).
inline FiniteDimRep left_regular_rep(const FiniteGroup& G) {
  const int n = G.order();
  std::vector<Matrix> mats;
  mats.reserve(n);
  for (int g = 0; g < n; ++g) {
    Matrix m = Matrix::Zero(n, n);
    for (int x = 0; x < n; ++x) m(G.mult[g][x], x) = 1.0;
    mats.push_back(std::move(m));
  }
  return FiniteDimRep(G, std::move(mats));
}

// Unitaries (rho(g) f)(x) = f(g^{-1} x) on the weighted function space of
// a measure-preserving action; with remove_constants, restricted to the
// orthogonal complement of the constants.
inline FiniteDimRep koopman_rep(const FiniteGroup& G, const std::vector<std::vector<int>>& action,
                                const std::vector<double>& weights, bool remove_constants) {
  const int n = static_cast<int>(weights.size());
  if (static_cast<int>(action.size()) != G.order())
    throw std::invalid_argument("koopman_rep: need one point map per group element");
  double total = 0.0;
  for (double w : weights) {
    if (w <= 0.0) throw std::invalid_argument("koopman_rep: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("koopman_rep: weights must sum to 1");
  for (int g = 0; g < G.order(); ++g) {
    std::vector<char> hit(n, 0);
    for (int x = 0; x < n; ++x) {
      int y = action[g][x];
      if (y < 0 || y >= n || hit[y])
        throw std::invalid_argument("koopman_rep: action maps are not bijections");
      hit[y] = 1;
      if (std::abs(weights[y] - weights[x]) > 1e-12)
        throw std::invalid_argument("koopman_rep: the measure is not invariant under the action");
    }
    // homomorphism check is delegated to the FiniteDimRep constructor
  }
  std::vector<Matrix> mats;
  mats.reserve(G.order());
  for (int g = 0; g < G.order(); ++g) {
    Matrix m = Matrix::Zero(n, n);
    for (int x = 0; x < n; ++x) m(action[g][x], x) = 1.0;
    mats.push_back(std::move(m));
  }
  if (!remove_constants) return FiniteDimRep(G, std::move(mats));
  // orthonormal complement of the constants in the weighted inner product
  Vector c(n);
  for (int x = 0; x < n; ++x) c(x) = std::sqrt(weights[x]);
  Eigen::HouseholderQR<Matrix> qr(c);
  Matrix full = qr.householderQ() * Matrix::Identity(n, n);
  Matrix Q = full.rightCols(n - 1);
  std::vector<Matrix> restricted;
  restricted.reserve(mats.size());
  for (const auto& m : mats) restricted.push_back(Q.adjoint() * m * Q);
  return FiniteDimRep(G, std::move(restricted), /*constants_removed=*/true);
}

// translation action of G on itself (for Koopman = left regular checks)
inline std::vector<std::vector<int>> translation_action(const FiniteGroup& G) {
  return G.mult;
}

// Dimension of {T : T rho1(g) = rho2(g) T for all g}, via the nullspace
// of the stacked vectorized equations over the generators.
inline int hom_dimension(const FiniteDimRep& rho1, const FiniteDimRep& rho2) {
  if (rho1.group().name != rho2.group().name || rho1.group().order() != rho2.group().order())
    throw std::invalid_argument("hom_dimension: representations of different groups");
  const int n1 = rho1.dim(), n2 = rho2.dim();
  if (n1 == 0 || n2 == 0) return 0;
  std::vector<int> gens = rho1.group().generators;
  if (gens.empty()) return n1 * n2;  // trivial group
  Matrix stacked(static_cast<int>(gens.size()) * n1 * n2, n1 * n2);
  int row = 0;
  for (int g : gens) {
    // vec(T rho1(g) - rho2(g) T) = (rho1(g)^T kron I - I kron rho2(g)) vec(T)
    Matrix block = Matrix::Zero(n1 * n2, n1 * n2);
    const Matrix& a = rho1.at(g);
    const Matrix& b = rho2.at(g);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n1; ++j)
        block.block(i * n2, j * n2, n2, n2) = a(j, i) * Matrix::Identity(n2, n2);
    for (int j = 0; j < n1; ++j) block.block(j * n2, j * n2, n2, n2) -= b;
    stacked.block(row, 0, n1 * n2, n1 * n2) = block;
    row += n1 * n2;
  }
  Eigen::JacobiSVD<Matrix> svd(stacked);
  double thresh = 1e-8 * std::max(1.0, svd.singularValues().size() > 0
                                           ? svd.singularValues()(0)
                                           : 0.0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thresh) ++rank;
  return n1 * n2 - rank;
}

inline bool is_singular(const FiniteDimRep& rho1, const FiniteDimRep& rho2) {
  return hom_dimension(rho1, rho2) == 0;
}

struct DecompositionResult {
  Matrix singular_basis;    // dim(rho1) x k_s, orthonormal columns
  Matrix continuous_basis;  // dim(rho1) x k_c
  std::vector<std::string> singular_constituents;
  std::vector<std::string> continuous_constituents;
};

// Split rho1 into the block singular to rho2 (isotypic components whose
// irreducible is absent from rho2) and the absolutely continuous rest.
inline DecompositionResult lebesgue_decompose(const FiniteDimRep& rho1, const FiniteDimRep& rho2) {
  const FiniteGroup& G = rho1.group();
  if (G.name != rho2.group().name)
    throw std::invalid_argument("lebesgue_decompose: group mismatch");
  const int n = rho1.dim();
  auto irreps = irreducible_reps(G);
  auto chi2 = rho2.character();
  std::vector<Vector> sing_cols, cont_cols;
  DecompositionResult out;
  for (const auto& pi : irreps) {
    auto chi_pi = pi.character();
    // isotypic projection inside rho1
    Matrix e = Matrix::Zero(n, n);
    for (int g = 0; g < G.order(); ++g) e += std::conj(chi_pi[g]) * rho1.at(g);
    e *= static_cast<double>(pi.dim) / G.order();
    Eigen::SelfAdjointEigenSolver<Matrix> es(e);
    // multiplicity of pi inside rho2 by character inner product
    double m2 = std::real(character_inner_product(G, chi2, pi.character()));
    bool in_rho2 = m2 > 0.5;
    int count = 0;
    for (int i = 0; i < n; ++i)
      if (es.eigenvalues()(i) > 0.5) {
        (in_rho2 ? cont_cols : sing_cols).push_back(es.eigenvectors().col(i));
        ++count;
      }
    if (count > 0)
      (in_rho2 ? out.continuous_constituents : out.singular_constituents).push_back(pi.name);
  }
  out.singular_basis = Matrix(n, static_cast<int>(sing_cols.size()));
  for (size_t i = 0; i < sing_cols.size(); ++i) out.singular_basis.col(static_cast<int>(i)) = sing_cols[i];
  out.continuous_basis = Matrix(n, static_cast<int>(cont_cols.size()));
  for (size_t i = 0; i < cont_cols.size(); ++i)
    out.continuous_basis.col(static_cast<int>(i)) = cont_cols[i];
  return out;
}

// Evaluate a group-algebra element through a representation.
inline Matrix rep_evaluate(const FiniteDimRep& rho, const GroupAlgebraElement& a) {
  Matrix m = Matrix::Zero(rho.dim(), rho.dim());
  for (const auto& [g, c] : a.coeffs()) m += c * rho.at(rho.group().index_of(g));
  return m;
}

// x with rho1(x*x) = 1, rho2(x*x) = 0, and both images contractions:
// the sum of the central idempotents of rho1's irreducible constituents.
inline GroupAlgebraElement singularity_witness(const FiniteDimRep& rho1,
                                               const FiniteDimRep& rho2) {
  if (!is_singular(rho1, rho2))
    throw std::invalid_argument(
        "witness cannot exist: the representations share a constituent (a nonzero "
        "intertwiner exists)");
  const FiniteGroup& G = rho1.group();
  auto chi1 = rho1.character();
  std::map<GroupElement, Complex> coeffs;
  for (const auto& pi : irreducible_reps(G)) {
    double mult = std::real(character_inner_product(G, chi1, pi.character()));
    if (mult < 0.5) continue;
    auto chi_pi = pi.character();
    for (int g = 0; g < G.order(); ++g)
      coeffs[G.elements[g]] +=
          static_cast<double>(pi.dim) / G.order() * std::conj(chi_pi[g]);
  }
  GroupAlgebraElement x(std::move(coeffs));
  GroupAlgebraElement xx = convolve(star(x), x);
  Matrix one = rep_evaluate(rho1, xx);
  Matrix zero = rep_evaluate(rho2, xx);
  if ((one - Matrix::Identity(rho1.dim(), rho1.dim())).cwiseAbs().maxCoeff() > 1e-10)
    throw std::runtime_error("singularity_witness: rho1(x*x) is not the identity to 1e-10");
  if (rho2.dim() > 0 && zero.cwiseAbs().maxCoeff() > 1e-10)
    throw std::runtime_error("singularity_witness: rho2(x*x) is not zero to 1e-10");
  if (op_norm(rep_evaluate(rho1, x)) > 1.0 + 1e-10 ||
      (rho2.dim() > 0 && op_norm(rep_evaluate(rho2, x)) > 1.0 + 1e-10))
    throw std::runtime_error("singularity_witness: witness image is not a contraction");
  return x;
}

// Spectral projection of a self-adjoint matrix onto [lo, hi].
inline Matrix spectral_window_projection(const Matrix& A, double lo, double hi) {
  if (A.rows() != A.cols()) throw std::invalid_argument("spectral_window_projection: square input required");
  double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A - A.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::invalid_argument("spectral_window_projection: input is not self-adjoint to 1e-9");
  Eigen::SelfAdjointEigenSolver<Matrix> es((A + A.adjoint()) / 2.0);
  Matrix p = Matrix::Zero(A.rows(), A.cols());
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) >= lo && es.eigenvalues()(i) <= hi)
      p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return p;
}

struct WindowReport {
  double trace_A = 0.0;   // normalized trace of lift(alpha)* lift(alpha)
  double trace_p = 0.0;   // normalized trace of the window projection
  double trace_bound = 0.0;  // (1 - sqrt(eps))^{-1} * trace_A
  bool trace_ok = false;
  struct VectorCheck {
    double residual_in = 0.0;   // ||A v - v||
    double residual_out = 0.0;  // ||p v - v||
    bool within_chebyshev = false;
  };
  std::vector<VectorCheck> vectors;
};

// The window projection of A = lift(alpha)* lift(alpha) over
// [1-sqrt(eps), 1+sqrt(eps)]: its normalized trace is bounded by
// (1-sqrt(eps))^{-1} tr(A) (an eigenvalue-wise fact), and vectors nearly
// fixed by A are nearly fixed by p (||pv - v|| <= 6 sqrt(eps) whenever
// ||Av - v|| < 6 eps).
inline WindowReport window_trace_bound_check(const GroupAlgebraElement& alpha,
                                             const SoficMap& sigma, double eps,
                                             const std::vector<Vector>& test_vectors = {}) {
  if (eps <= 0.0 || eps >= 1.0)
    throw std::invalid_argument("window_trace_bound_check: eps must lie in (0,1)");
  Matrix L = lift(sigma, alpha);
  Matrix A = L.adjoint() * L;
  double root = std::sqrt(eps);
  Matrix p = spectral_window_projection(A, 1.0 - root, 1.0 + root);
  WindowReport rep;
  rep.trace_A = std::real(matrix_trace(A));
  rep.trace_p = std::real(matrix_trace(p));
  rep.trace_bound = rep.trace_A / (1.0 - root);
  rep.trace_ok = rep.trace_p <= rep.trace_bound + 1e-12;
  for (const auto& v : test_vectors) {
    WindowReport::VectorCheck c;
    c.residual_in = (A * v - v).norm();
    c.residual_out = (p * v - v).norm();
    c.within_chebyshev = !(c.residual_in < 6.0 * eps) || c.residual_out <= 6.0 * root;
    rep.vectors.push_back(c);
  }
  return rep;
}

// Certified upper bound 2 N tr(p) log((3M + eps)/eps) on the normalized
// log of a separated-set count compressed through N window projections.
inline double entropy_upper_certificate(int N, double M, double eps, double trace_p) {
  if (N < 1 || M <= 0.0 || eps <= 0.0)
    throw std::invalid_argument("entropy_upper_certificate: N, M, eps must be positive");
  if (trace_p < 0.0 || trace_p > 1.0)
    throw std::invalid_argument("entropy_upper_certificate: trace_p must lie in [0,1]");
  return 2.0 * N * trace_p * std::log((3.0 * M + eps) / eps);
}

namespace detail {

inline double chebyshev_T(int n, double u) {
  if (u >= 1.0) return std::cosh(n * std::acosh(u));
  if (u <= -1.0) {
    double v = std::cosh(n * std::acosh(-u));
    return (n % 2 == 0) ? v : -v;
  }
  return std::cos(n * std::acos(u));
}

}  // namespace detail

// A self-adjoint element of the integer-group algebra whose symbol
// theta -> alpha^(theta) equals 1 at theta = pi and is uniformly small
// outside [pi - halfwidth, pi + halfwidth]: an equiripple (Chebyshev)
// notch of the given degree. Coefficients are recovered by inverse DFT
// of the symbol, which is a trigonometric polynomial of that degree.
inline GroupAlgebraElement spectral_concentration_filter(int degree, double passband_halfwidth) {
  if (degree < 1) throw std::invalid_argument("spectral_concentration_filter: degree must be >= 1");
  if (passband_halfwidth <= 0.0 || passband_halfwidth >= std::numbers::pi)
    throw std::invalid_argument("spectral_concentration_filter: halfwidth must lie in (0, pi)");
  const double x0 = (1.0 + std::cos(passband_halfwidth)) / 2.0;
  const double norm = detail::chebyshev_T(degree, 2.0 / x0 - 1.0);
  auto symbol = [&](double theta) {
    double x = (1.0 - std::cos(theta)) / 2.0;
    return detail::chebyshev_T(degree, 2.0 * x / x0 - 1.0) / norm;
  };
  const int K = 4 * (degree + 1) < 4096 ? 4096 : 8 * (degree + 1);
  std::map<GroupElement, Complex> coeffs;
  for (int m = -degree; m <= degree; ++m) {
    double c = 0.0;
    for (int t = 0; t < K; ++t) {
      double theta = 2.0 * std::numbers::pi * t / K;
      c += symbol(theta) * std::cos(m * theta);
    }
    coeffs[GroupElement::integer(m)] = c / K;
  }
  return GroupAlgebraElement(std::move(coeffs));
}

}  // namespace sofic
