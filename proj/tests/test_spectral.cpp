#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sofic/spectral.hpp"

using namespace sofic;

namespace {

Matrix random_unitary(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q;
}

Matrix random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  return (g + g.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("left regular representation of Z/2 and Z/3") {
  FiniteGroup z2 = FiniteGroup::cyclic(2);
  FiniteDimRep lam2 = left_regular_rep(z2);
  Matrix swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  CHECK((lam2.at(1) - swap).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(lam2.at(1).trace()) < 1e-14);  // no fixed points off the identity

  FiniteGroup z3 = FiniteGroup::cyclic(3);
  FiniteDimRep lam3 = left_regular_rep(z3);
  CHECK(std::abs(lam3.at(1).trace()) < 1e-14);
  CHECK(std::abs(lam3.at(2).trace()) < 1e-14);
  // eigenvalues of the 3-cycle are the cube roots of unity
  Eigen::ComplexEigenSolver<Matrix> ev(lam3.at(1));
  std::vector<double> args;
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(std::abs(ev.eigenvalues()(i)) - 1.0) < 1e-10);
    args.push_back(std::arg(ev.eigenvalues()(i)));
  }
  std::sort(args.begin(), args.end());
  CHECK(std::abs(args[0] + 2.0 * std::numbers::pi / 3.0) < 1e-10);
  CHECK(std::abs(args[1]) < 1e-10);
  CHECK(std::abs(args[2] - 2.0 * std::numbers::pi / 3.0) < 1e-10);
}

TEST_CASE("left regular character is |G| at the identity, zero elsewhere") {
  FiniteGroup G = FiniteGroup::symmetric3();
  auto chi = left_regular_rep(G).character();
  CHECK(std::abs(chi[0] - Complex(6.0)) < 1e-12);
  for (int g = 1; g < 6; ++g) CHECK(std::abs(chi[g]) < 1e-12);
}

TEST_CASE("Koopman of the translation action is the left regular representation") {
  FiniteGroup z4 = FiniteGroup::cyclic(4);
  std::vector<double> uniform(4, 0.25);
  FiniteDimRep koop = koopman_rep(z4, translation_action(z4), uniform, false);
  FiniteDimRep lam = left_regular_rep(z4);
  auto c1 = koop.character(), c2 = lam.character();
  for (int g = 0; g < 4; ++g) CHECK(std::abs(c1[g] - c2[g]) < 1e-12);
  // with constants removed, the character drops by exactly one trivial copy
  FiniteDimRep koop0 = koopman_rep(z4, translation_action(z4), uniform, true);
  CHECK(koop0.dim() == 3);
  CHECK(koop0.constants_removed());
  auto c0 = koop0.character();
  for (int g = 0; g < 4; ++g) CHECK(std::abs(c0[g] - (c2[g] - 1.0)) < 1e-10);
}

TEST_CASE("Koopman of the trivial action acts by the identity off the constants") {
  FiniteGroup z2 = FiniteGroup::cyclic(2);
  std::vector<std::vector<int>> trivial{{0, 1, 2}, {0, 1, 2}};
  std::vector<double> w{0.2, 0.3, 0.5};
  FiniteDimRep koop0 = koopman_rep(z2, trivial, w, true);
  CHECK(koop0.dim() == 2);
  for (const auto& m : koop0.matrices())
    CHECK((m - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Koopman of the two-point swap is the sign representation") {
  FiniteGroup z2 = FiniteGroup::cyclic(2);
  std::vector<std::vector<int>> swap_action{{0, 1}, {1, 0}};
  std::vector<double> uniform{0.5, 0.5};
  FiniteDimRep koop0 = koopman_rep(z2, swap_action, uniform, true);
  REQUIRE(koop0.dim() == 1);
  CHECK(std::abs(koop0.at(0)(0, 0) - Complex(1.0)) < 1e-12);
  CHECK(std::abs(koop0.at(1)(0, 0) - Complex(-1.0)) < 1e-12);
}

TEST_CASE("Koopman rejects non-invariant measures") {
  FiniteGroup z2 = FiniteGroup::cyclic(2);
  std::vector<std::vector<int>> swap_action{{0, 1}, {1, 0}};
  CHECK_THROWS_AS(koopman_rep(z2, swap_action, {0.3, 0.7}, false), std::invalid_argument);
}

TEST_CASE("intertwiner dimensions on reference pairs") {
  FiniteGroup z2 = FiniteGroup::cyclic(2);
  auto irreps2 = irreducible_reps(z2);
  FiniteDimRep triv(z2, irreps2[0].matrices), sign(z2, irreps2[1].matrices);
  CHECK(hom_dimension(triv, sign) == 0);
  CHECK(is_singular(triv, sign));

  FiniteDimRep lam2 = left_regular_rep(z2);
  CHECK(hom_dimension(lam2, lam2) == 2);  // triv + sign, one intertwiner each
  CHECK_FALSE(is_singular(lam2, lam2));

  FiniteGroup z3 = FiniteGroup::cyclic(3);
  auto irreps3 = irreducible_reps(z3);
  FiniteDimRep triv3(z3, irreps3[0].matrices);
  FiniteDimRep lam3 = left_regular_rep(z3);
  CHECK(hom_dimension(triv3, lam3) == 1);

  CHECK_THROWS_AS(hom_dimension(triv, triv3), std::invalid_argument);
}

TEST_CASE("distinct irreducibles of S3 are pairwise singular") {
  FiniteGroup s3 = FiniteGroup::symmetric3();
  auto irreps = irreducible_reps(s3);
  REQUIRE(irreps.size() == 3);
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j) {
      FiniteDimRep a(s3, irreps[i].matrices), b(s3, irreps[j].matrices);
      CHECK(is_singular(a, b) == (i != j));
    }
}

TEST_CASE("Koopman complement of the Z/4 translation is not singular to the regular rep") {
  FiniteGroup z4 = FiniteGroup::cyclic(4);
  std::vector<double> uniform(4, 0.25);
  FiniteDimRep koop0 = koopman_rep(z4, translation_action(z4), uniform, true);
  FiniteDimRep lam = left_regular_rep(z4);
  CHECK_FALSE(is_singular(koop0, lam));  // the nontrivial characters are shared
  CHECK(hom_dimension(koop0, lam) == 3);
}

TEST_CASE("Schur consistency across the supported groups") {
  std::vector<FiniteGroup> groups;
  groups.push_back(FiniteGroup::cyclic(2));
  groups.push_back(FiniteGroup::cyclic(3));
  groups.push_back(FiniteGroup::cyclic(4));
  groups.push_back(FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)));
  groups.push_back(FiniteGroup::symmetric3());
  for (const auto& G : groups) {
    auto irreps = irreducible_reps(G);
    for (const auto& p : irreps)
      for (const auto& q : irreps) {
        FiniteDimRep a(G, p.matrices), b(G, q.matrices);
        double ip = std::real(character_inner_product(G, p.character(), q.character()));
        CHECK(hom_dimension(a, b) == static_cast<int>(std::llround(ip)));
      }
  }
}

TEST_CASE("Lebesgue decomposition of the regular rep of Z/2 against the sign rep") {
  FiniteGroup z2 = FiniteGroup::cyclic(2);
  auto irreps = irreducible_reps(z2);
  FiniteDimRep lam = left_regular_rep(z2);
  FiniteDimRep sign(z2, irreps[1].matrices);
  DecompositionResult dec = lebesgue_decompose(lam, sign);
  CHECK(dec.singular_basis.cols() == 1);
  CHECK(dec.continuous_basis.cols() == 1);
  REQUIRE(dec.singular_constituents.size() == 1);
  CHECK(dec.singular_constituents[0] == "chi0");
  // the singular block really carries the trivial character
  Vector v = dec.singular_basis.col(0);
  CHECK((lam.at(1) * v - v).norm() < 1e-10);
}

TEST_CASE("decomposition against the regular rep has no singular part") {
  FiniteGroup s3 = FiniteGroup::symmetric3();
  FiniteDimRep lam = left_regular_rep(s3);
  auto irreps = irreducible_reps(s3);
  for (const auto& pi : irreps) {
    FiniteDimRep rho(s3, pi.matrices);
    DecompositionResult dec = lebesgue_decompose(rho, lam);
    CHECK(dec.singular_basis.cols() == 0);
    CHECK(dec.continuous_basis.cols() == rho.dim());
  }
  // and an irreducible singular to the reference has no continuous part
  FiniteDimRep triv(s3, irreps[0].matrices), sign(s3, irreps[1].matrices);
  DecompositionResult dec = lebesgue_decompose(triv, sign);
  CHECK(dec.continuous_basis.cols() == 0);
  CHECK(dec.singular_basis.cols() == 1);
}

TEST_CASE("decomposition completeness on random representation pairs") {
  std::mt19937_64 rng(17);
  std::vector<FiniteGroup> groups;
  groups.push_back(FiniteGroup::cyclic(3));
  groups.push_back(FiniteGroup::cyclic(4));
  groups.push_back(FiniteGroup::symmetric3());
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_int_distribution<int> copies(0, 2);
  for (int t = 0; t < 30; ++t) {
    const FiniteGroup& G = groups[pick(rng)];
    auto irreps = irreducible_reps(G);
    // random direct sums of irreps, conjugated by a random unitary
    auto build = [&](std::vector<int>& mult) {
      int dim = 0;
      for (size_t i = 0; i < irreps.size(); ++i) {
        mult.push_back(copies(rng));
        dim += mult.back() * irreps[i].dim;
      }
      if (dim == 0) {
        mult[0] = 1;
        dim = irreps[0].dim;
      }
      Matrix u = random_unitary(rng, dim);
      std::vector<Matrix> mats;
      for (int g = 0; g < G.order(); ++g) {
        Matrix m = Matrix::Zero(dim, dim);
        int off = 0;
        for (size_t i = 0; i < irreps.size(); ++i)
          for (int c = 0; c < mult[i]; ++c) {
            m.block(off, off, irreps[i].dim, irreps[i].dim) = irreps[i].matrices[g];
            off += irreps[i].dim;
          }
        mats.push_back(u.adjoint() * m * u);
      }
      return FiniteDimRep(G, std::move(mats));
    };
    std::vector<int> m1, m2;
    FiniteDimRep rho1 = build(m1), rho2 = build(m2);
    DecompositionResult dec = lebesgue_decompose(rho1, rho2);
    CHECK(dec.singular_basis.cols() + dec.continuous_basis.cols() == rho1.dim());
    // blocks are orthogonal and invariant
    if (dec.singular_basis.cols() > 0 && dec.continuous_basis.cols() > 0)
      CHECK((dec.singular_basis.adjoint() * dec.continuous_basis).cwiseAbs().maxCoeff() < 1e-9);
    for (int g = 0; g < G.order(); ++g) {
      if (dec.singular_basis.cols() > 0) {
        Matrix moved = rho1.at(g) * dec.singular_basis;
        Matrix back = dec.singular_basis * (dec.singular_basis.adjoint() * moved);
        CHECK((moved - back).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
    // the singular block is genuinely singular to rho2
    if (dec.singular_basis.cols() > 0) {
      std::vector<Matrix> restricted;
      for (int g = 0; g < G.order(); ++g)
        restricted.push_back(dec.singular_basis.adjoint() * rho1.at(g) * dec.singular_basis);
      FiniteDimRep sing(G, std::move(restricted));
      CHECK(hom_dimension(sing, rho2) == 0);
    }
    // every continuous constituent appears in rho2
    for (const auto& name : dec.continuous_constituents) {
      bool found = false;
      for (size_t i = 0; i < irreps.size(); ++i)
        if (irreps[i].name == name && m2[i] > 0) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("singularity witness for the sign/trivial pair of Z/2") {
  FiniteGroup z2 = FiniteGroup::cyclic(2);
  auto irreps = irreducible_reps(z2);
  FiniteDimRep triv(z2, irreps[0].matrices), sign(z2, irreps[1].matrices);
  GroupAlgebraElement x = singularity_witness(triv, sign);
  // x = (e + g)/2
  CHECK(std::abs(x.coeffs().at(GroupElement::residue(0, 2)) - Complex(0.5)) < 1e-12);
  CHECK(std::abs(x.coeffs().at(GroupElement::residue(1, 2)) - Complex(0.5)) < 1e-12);
  GroupAlgebraElement y = singularity_witness(sign, triv);
  // y = (e - g)/2
  CHECK(std::abs(y.coeffs().at(GroupElement::residue(0, 2)) - Complex(0.5)) < 1e-12);
  CHECK(std::abs(y.coeffs().at(GroupElement::residue(1, 2)) - Complex(-0.5)) < 1e-12);
}

TEST_CASE("witnesses exist for each character of Z/3 against the other two") {
  FiniteGroup z3 = FiniteGroup::cyclic(3);
  auto irreps = irreducible_reps(z3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      FiniteDimRep a(z3, irreps[i].matrices), b(z3, irreps[j].matrices);
      GroupAlgebraElement x = singularity_witness(a, b);  // throws on certificate failure
      // discrete Fourier coefficients of the central idempotent: |c_g| = 1/3
      for (const auto& [g, c] : x.coeffs()) CHECK(std::abs(std::abs(c) - 1.0 / 3.0) < 1e-12);
    }
}

TEST_CASE("witness request on a non-singular pair is refused") {
  FiniteGroup z2 = FiniteGroup::cyclic(2);
  FiniteDimRep lam = left_regular_rep(z2);
  try {
    singularity_witness(lam, lam);
    FAIL("expected an error");
  } catch (const std::invalid_argument& ex) {
    CHECK(std::string(ex.what()).find("cannot exist") != std::string::npos);
  }
}

TEST_CASE("spectral window projection on reference matrices") {
  Matrix id = Matrix::Identity(3, 3);
  CHECK((spectral_window_projection(id, 0.5, 1.5) - id).cwiseAbs().maxCoeff() < 1e-12);
  Matrix diag = Matrix::Zero(2, 2);
  diag(1, 1) = 1.0;
  Matrix p = spectral_window_projection(diag, 0.9, 1.1);
  CHECK((p - diag).cwiseAbs().maxCoeff() < 1e-12);
  Matrix skew(2, 2);
  skew << 0.0, 1.0, -1.0, 0.0;
  CHECK_THROWS_AS(spectral_window_projection(skew, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("projection laws hold on 100 random self-adjoint inputs") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 100; ++t) {
    int n = 2 + (t % 7);
    Matrix a = random_hermitian(rng, n);
    double lo = u(rng), hi = lo + std::abs(u(rng));
    Matrix p = spectral_window_projection(a, lo, hi);
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((p * a - a * p).cwiseAbs().maxCoeff() < 1e-9);
    // normalized trace counts window eigenvalues
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    int count = 0;
    for (int i = 0; i < n; ++i)
      if (es.eigenvalues()(i) >= lo && es.eigenvalues()(i) <= hi) ++count;
    CHECK(std::abs(std::real(matrix_trace(p)) - static_cast<double>(count) / n) < 1e-9);
  }
}

TEST_CASE("window trace bound: identity element gives the full projection") {
  SoficMap sigma = cyclic_sofic_map(16, 1);
  GroupAlgebraElement e = GroupAlgebraElement::monomial(GroupElement::integer(0));
  WindowReport rep = window_trace_bound_check(e, sigma, 0.25);
  CHECK(std::abs(rep.trace_A - 1.0) < 1e-12);
  CHECK(std::abs(rep.trace_p - 1.0) < 1e-12);
  CHECK(rep.trace_ok);  // 1 <= 1/(1 - 0.5)
}

TEST_CASE("window trace bound for a small-trace element through a cyclic lift") {
  SoficMap sigma = cyclic_sofic_map(64, 1);
  // alpha = (e - g)/2: the symbol vanishes at theta = 0 and peaks at pi
  auto alpha = (GroupAlgebraElement::monomial(GroupElement::integer(0)) +
                GroupAlgebraElement::monomial(GroupElement::integer(1), -1.0)) *
               Complex(0.5);
  WindowReport rep = window_trace_bound_check(alpha, sigma, 0.2);
  CHECK(rep.trace_ok);
  CHECK(rep.trace_p <= rep.trace_bound + 1e-12);
  CHECK(rep.trace_p >= 0.0);
}

TEST_CASE("vectors nearly fixed by A are nearly fixed by the window projection") {
  std::mt19937_64 rng(31);
  SoficMap sigma = cyclic_sofic_map(64, 1);
  auto alpha = GroupAlgebraElement::monomial(GroupElement::integer(0));  // A = identity
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> vs;
  for (int t = 0; t < 20; ++t) {
    Vector v(64);
    for (int i = 0; i < 64; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    v.normalize();
    vs.push_back(std::move(v));
  }
  WindowReport rep = window_trace_bound_check(alpha, sigma, 0.1, vs);
  for (const auto& c : rep.vectors) {
    CHECK(c.within_chebyshev);
    if (c.residual_in < 6.0 * 0.1) CHECK(c.residual_out <= 6.0 * std::sqrt(0.1));
  }
}

TEST_CASE("entropy upper certificate reference values") {
  CHECK(entropy_upper_certificate(3, 1.0, 0.5, 0.0) == 0.0);
  CHECK(std::abs(entropy_upper_certificate(1, 1.0, 1.0, 0.5) - std::log(4.0)) < 1e-14);
  CHECK_THROWS_AS(entropy_upper_certificate(0, 1.0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(entropy_upper_certificate(1, 1.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("concentration filter: self-adjoint, unit at the notch, small outside") {
  GroupAlgebraElement alpha = spectral_concentration_filter(63, 0.3);
  // self-adjoint: coefficients real and symmetric under negation
  for (const auto& [g, c] : alpha.coeffs()) {
    CHECK(std::abs(c.imag()) < 1e-12);
    auto it = alpha.coeffs().find(g.inverse());
    REQUIRE(it != alpha.coeffs().end());
    CHECK(std::abs(c - it->second) < 1e-12);
  }
  auto symbol = [&](double theta) {
    Complex s = 0.0;
    for (const auto& [g, c] : alpha.coeffs()) {
      auto m = std::get<std::int64_t>(g.payload());
      s += c * std::exp(Complex(0.0, 1.0) * static_cast<double>(m) * theta);
    }
    return s.real();
  };
  CHECK(std::abs(symbol(std::numbers::pi) - 1.0) < 1e-9);
  // equiripple outside the passband: uniformly small
  for (double theta = 0.0; theta < std::numbers::pi - 0.31; theta += 0.05)
    CHECK(std::abs(symbol(theta)) < 0.05);
}

TEST_CASE("end-to-end certificate on the rotation system at d=256") {
  // the filter concentrates near the -1 eigenvalue of the shift; its
  // window projection is low-rank, certifying a small entropy bound
  const int d = 256;
  const int degree = 127;
  const double halfwidth = 0.8 * 2.0 * std::numbers::pi / d;
  GroupAlgebraElement alpha = spectral_concentration_filter(degree, halfwidth);
  SoficMap sigma = cyclic_sofic_map(d, degree);
  WindowReport rep = window_trace_bound_check(alpha, sigma, 0.2);
  CHECK(rep.trace_ok);
  double bound = entropy_upper_certificate(1, 1.0, 0.2, rep.trace_p);
  // measured entropy of the two-microstate rotation system at d=256
  double measured = std::log(2.0) / d;
  CHECK(bound >= measured);
  CHECK(bound <= 0.05);
}

TEST_CASE("representation JSON round-trip") {
  FiniteGroup s3 = FiniteGroup::symmetric3();
  auto irreps = irreducible_reps(s3);
  FiniteDimRep rho(s3, irreps[2].matrices);  // the 2-dimensional constituent
  auto j = rho.to_json();
  CHECK(j.at("group") == "S3");
  CHECK(j.at("dim") == 2);
  FiniteDimRep back = FiniteDimRep::from_json(j, s3);
  REQUIRE(back.dim() == rho.dim());
  for (int g = 0; g < s3.order(); ++g)
    CHECK((back.at(g) - rho.at(g)).cwiseAbs().maxCoeff() < 1e-12);
}
