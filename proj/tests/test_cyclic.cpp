#include "cqt/cyclic.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace cqt;

namespace {

const std::vector<int> kNs{3, 5, 7, 9};

TEST(RootData, RejectsEvenAndNonPositiveN) {
  for (int N : {0, -3, 2, 4, 10}) {
    try {
      make_root_data(N);
      FAIL() << "N = " << N << " accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.code, Errc::EvenN);
    }
  }
  EXPECT_THROW(make_root_data(9, 1e-9, 3), Error);
}

TEST(RootData, MatchesPrimitiveRoot) {
  for (int N : kNs) {
    auto rd = make_root_data(N);
    oracle::Roots r(N);
    EXPECT_EQ(rd.M, (N + 1) / 2);
    EXPECT_LT(std::abs(rd.q2 - r.q2(1)), 1e-14);
    EXPECT_LT(std::abs(rd.q - r.q(1)), 1e-14);
    // q is a primitive N-th root with q^2 = q2
    EXPECT_LT(std::abs(rd.q * rd.q - rd.q2), 1e-14);
    EXPECT_LT(std::abs(std::pow(rd.q, N) - 1.0), 1e-12);
    for (int k = -2 * N; k < 2 * N; ++k) EXPECT_LT(std::abs(rd.gamma(k) - r.gamma(k)), 1e-13);
  }
}

TEST(RootData, OtherRootIndex) {
  auto rd = make_root_data(7, 1e-9, 3);
  EXPECT_LT(std::abs(rd.q2 - std::polar(1.0, 6.0 * std::numbers::pi / 7.0)), 1e-14);
}

TEST(Weyl, SingleSiteMatchesOracle) {
  for (int N : kNs) {
    auto rd = make_root_data(N);
    oracle::Roots r(N);
    StateSpace sp({0}, N);
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b) {
        auto w = weyl_operator(rd, sp, Weyl::UP(0, a, b));
        EXPECT_LT(oracle::rel(w.m, oracle::weyl(r, a, b)), 1e-12) << a << "," << b;
      }
  }
}

TEST(Weyl, TwoSitesKronecker) {
  int N = 5;
  auto rd = make_root_data(N);
  oracle::Roots r(N);
  StateSpace sp({3, 8}, N);
  auto w = weyl_operator(rd, sp, Weyl::UP(3, 1, -1) + Weyl::UP(8, 2, 1));
  Mat ref = oracle::kron(oracle::weyl(r, 1, -1), oracle::weyl(r, 2, 1));
  EXPECT_LT(oracle::rel(w.m, ref), 1e-12);
  EXPECT_LT(oracle::rel(site_operator(rd, sp, 8, Kind::P, 1).m, oracle::on_site(r, 2, 1, oracle::P(r))), 1e-14);
}

TEST(Weyl, CommutationAndProductRule) {
  int N = 7;
  auto rd = make_root_data(N);
  StateSpace sp({0, 1}, N);
  auto U = site_operator(rd, sp, 0, Kind::U, 1), P = site_operator(rd, sp, 0, Kind::P, 1);
  EXPECT_LT(rel_err((U * P).m, (P * U * rd.q2).m), 1e-13);
  Weyl x = Weyl::UP(0, 1, 2) + Weyl::P(1), y = Weyl::UP(0, -1, 1) + Weyl::U(1, 3);
  auto lhs = weyl_operator(rd, sp, x) * weyl_operator(rd, sp, y);
  auto rhs = weyl_operator(rd, sp, x + y) * rd.qp(omega(x, y));
  EXPECT_LT(rel_err(lhs.m, rhs.m), 1e-12);
  // Weyl-ordered monomials are cyclic
  EXPECT_LT(cyclic_defect(rd, weyl_operator(rd, sp, x)), 1e-10);
}

TEST(Weyl, MonomialOrderingMatchesExponentForm) {
  int N = 5;
  auto rd = make_root_data(N);
  StateSpace sp({0}, N);
  auto m = weyl_monomial(rd, sp, {{0, Kind::U, 1}, {0, Kind::P, 1}});
  EXPECT_LT(rel_err(m.m, weyl_operator(rd, sp, Weyl::UP(0, 1, 1)).m), 1e-13);
}

TEST(FunctionalCalculus, MonomialAndDensePathsAgree) {
  int N = 5;
  auto rd = make_root_data(N);
  oracle::Roots r(N);
  StateSpace sp({0, 1}, N);
  auto x = weyl_operator(rd, sp, Weyl::UP(0, 1, -1) + Weyl::P(1));
  // A dense conjugate of x takes the generic path.
  Mat g = Mat::Random(sp.dim(), sp.dim()) + 3.0 * Mat::Identity(sp.dim(), sp.dim());
  CyclicOperator y{sp, g * x.m * g.inverse()};
  ASSERT_FALSE(monomial_form(y.m));
  std::vector<cplx> f(N);
  for (int k = 0; k < N; ++k) f[k] = cplx(1.0 + k, 0.5 * k * k);
  auto fx = apply_cyclic_function(rd, x, f), fy = apply_cyclic_function(rd, y, f);
  EXPECT_LT(rel_err(fy.m, g * fx.m * g.inverse()), 1e-9);
  auto ref = oracle::function_of(r, x.m, [&](int k) { return f[k]; });
  EXPECT_LT(oracle::rel(fx.m, ref), 1e-10);
}

TEST(FunctionalCalculus, RejectsNonCyclic) {
  auto rd = make_root_data(3);
  StateSpace sp({0}, 3);
  CyclicOperator x{sp, Mat::Identity(3, 3) * 2.0};
  EXPECT_THROW(apply_cyclic_function(rd, x, std::vector<cplx>(3, 1.0)), Error);
}

TEST(FunctionalCalculus, SpectralProjectors) {
  int N = 7;
  auto rd = make_root_data(N);
  StateSpace sp({0}, N);
  auto u = site_operator(rd, sp, 0, Kind::U, 1);
  Mat sum = Mat::Zero(N, N);
  for (int k = 0; k < N; ++k) {
    auto p = spectral_projector(rd, u, k);
    EXPECT_LT(rel_err((p * p).m, p.m), 1e-12);
    EXPECT_NEAR(std::abs(p.m(k, k)), 1.0, 1e-12);
    sum += p.m;
  }
  EXPECT_LT(rel_err(sum, Mat::Identity(N, N)), 1e-12);
}

TEST(FunctionalCalculus, SquareRootAndGamma) {
  for (int N : {3, 5, 7}) {
    auto rd = make_root_data(N);
    oracle::Roots r(N);
    StateSpace sp({0}, N);
    auto x = weyl_operator(rd, sp, Weyl::UP(0, 1, 1));
    auto s = sqrt_operator(rd, x);
    EXPECT_LT(rel_err((s * s).m, x.m), 1e-12);
    // gamma(X) acts as gamma(k) on the q^{2k} eigenspace, and its half as the square root
    auto g = gamma_operator(rd, x, 1, false);
    auto ref = oracle::function_of(r, x.m, [&](int k) { return r.gamma(k); });
    EXPECT_LT(oracle::rel(g.m, ref), 1e-10);
    auto h = gamma_operator(rd, x, 1, true);
    EXPECT_LT(rel_err((h * h).m, g.m), 1e-10);
    EXPECT_LT(rel_err((g * gamma_operator(rd, x, -1, false)).m, Mat::Identity(N, N)), 1e-10);
  }
}

TEST(Gauss, ClosedForms) {
  for (int N : kNs) {
    auto rd = make_root_data(N);
    oracle::Roots r(N);
    double sq = std::sqrt(static_cast<double>(N));
    EXPECT_LT(std::abs(gauss_sum(rd, 1, 1) - oracle::gauss(r, 1, 1)), 1e-12);
    EXPECT_LT(std::abs(oracle::gauss(r, 1, 1) - sq * ipow(-(N - 1) / 2.0)), 1e-10);
    EXPECT_LT(std::abs(oracle::gauss(r, -1, 1) - sq * ipow((N - 1) / 2.0)), 1e-10);
    cplx z2 = ((N + 1) / 2 % 2 == 0 ? cplx(0.0, 1.0) : cplx(1.0)) * sq;
    EXPECT_LT(std::abs(gauss_sum(rd, 1, 2) - z2), 1e-10);
    EXPECT_LT(std::abs(gauss_sum(rd, -1, 2) - std::conj(z2)), 1e-10);
  }
}

TEST(Bases, MomentumAndSlantEigenvectors) {
  int N = 5;
  auto rd = make_root_data(N);
  StateSpace sp({0}, N);
  auto P = site_operator(rd, sp, 0, Kind::P, 1);
  auto UP = weyl_operator(rd, sp, Weyl::UP(0, 1, -1));
  for (int k = 0; k < N; ++k) {
    Vec m = basis_vector(rd, sp, {{BasisKind::Momentum, k}}).v;
    Vec s = basis_vector(rd, sp, {{BasisKind::Slant, k}}).v;
    EXPECT_LT((P.m * m - rd.q2p(k) * m).norm(), 1e-12);
    cplx lam = (s.adjoint() * UP.m * s)(0, 0) / s.squaredNorm();
    EXPECT_LT((UP.m * s - lam * s).norm(), 1e-12);
  }
}

TEST(Permutations, SwapAndDiagonal) {
  int N = 3;
  auto rd = make_root_data(N);
  StateSpace sp({0, 1, 2}, N);
  auto s = swap_operator(sp, 0, 2);
  auto u0 = site_operator(rd, sp, 0, Kind::U, 1), u2 = site_operator(rd, sp, 2, Kind::U, 1);
  EXPECT_LT(rel_err(s.conj(u0).m, u2.m), 1e-14);
  auto d = diagonal_site(sp, 1, [&](int k) { return rd.q2p(k); });
  EXPECT_LT(rel_err(d.m, site_operator(rd, sp, 1, Kind::U, 1).m), 1e-14);
  EXPECT_THROW(sp.pos(7), Error);
}

}  // namespace
