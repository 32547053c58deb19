#include "cqt/repfun.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace cqt;

namespace {

TEST(Operators, SMatchesOracle) {
  for (int N : {3, 5, 7}) {
    auto rd = make_root_data(N);
    oracle::Roots r(N);
    StateSpace sp({0, 1}, N);
    EXPECT_LT(oracle::rel(op_S(rd, sp, 0, 1).m, oracle::S(r)), 1e-12) << N;
  }
}

TEST(Operators, AMatchesOracleAndHasOrderThree) {
  for (int N : {3, 5, 7, 9}) {
    auto rd = make_root_data(N);
    oracle::Roots r(N);
    StateSpace sp({0}, N);
    Mat a = op_A(rd, sp, 0).m;
    EXPECT_LT(oracle::rel(a, oracle::A(r)), 1e-12) << N;
    EXPECT_LT(oracle::rel(a * a * a, Mat::Identity(N, N)), 1e-10) << N;
    EXPECT_LT(oracle::rel(op_A(rd, sp, 0, true).m * a, Mat::Identity(N, N)), 1e-10) << N;
    EXPECT_NEAR(std::abs(a.determinant()), 1.0, 1e-10);
  }
}

TEST(Operators, TMatchesOracle) {
  for (int N : {3, 5}) {
    auto rd = make_root_data(N);
    oracle::Roots r(N);
    StateSpace sp({0, 1}, N);
    std::mt19937_64 g(N);
    Mat x = oracle::kron(oracle::weyl(r, 1, -1), oracle::P(r));
    for (int i = 0; i < 5; ++i) {
      auto p = random_fermat(rd, g);
      Mat ref = oracle::psi_of(r, p.pp, p.pm, x) * oracle::S(r);
      EXPECT_LT(oracle::rel(op_T(rd, sp, 0, 1, p).m, ref), 1e-9);
    }
  }
}

TEST(Relations, TATAndATA) {
  for (int N : {3, 5, 7}) {
    auto rd = make_root_data(N);
    StateSpace sp({0, 1}, N);
    std::mt19937_64 g(3 * N);
    auto Av = op_A(rd, sp, 0), Aw = op_A(rd, sp, 1);
    for (int i = 0; i < 10; ++i) {
      auto p = random_fermat_branch_safe(rd, g);
      auto T = op_T(rd, sp, 0, 1, p);
      auto lhs = T * Av * op_T(rd, sp, 1, 0, fermat_inverse(p));
      EXPECT_LT(rel_err(lhs.m, (Av * Aw * swap_operator(sp, 0, 1) * zeta_TAT(rd)).m), 1e-9);
      EXPECT_LT(rel_err((Av * T * Aw).m, (Aw * op_T(rd, sp, 1, 0, p) * Av).m), 1e-9);
      EXPECT_LT(std::abs(T.m.determinant() - 1.0), 1e-9);
    }
  }
}

TEST(Relations, PrimedRealizationIsConjugate) {
  int N = 5;
  auto rd = make_root_data(N);
  StateSpace sp({0, 1}, N);
  std::mt19937_64 g(2);
  auto G = conjugator_G(rd, sp);
  auto p = random_fermat(rd, g);
  EXPECT_LT(rel_err(op_T(rd, sp, 0, 1, p, Realization::Primed).m, G.conj(op_T(rd, sp, 0, 1, p)).m), 1e-9);
  EXPECT_LT(rel_err(op_A(rd, sp, 1, false, Realization::Primed).m, G.conj(op_A(rd, sp, 1)).m), 1e-10);
  auto Ap = op_A(rd, sp, 0, false, Realization::Primed);
  EXPECT_LT(rel_err((Ap * Ap * Ap).m, Mat::Identity(sp.dim(), sp.dim())), 1e-10);
}

TEST(Intertwiner, NonInvariantTupleRejected) {
  auto rd = make_root_data(3);
  std::mt19937_64 g(1);
  CoefficientTuple t{{1, random_fermat(rd, g)}, {2, random_fermat(rd, g)}, {3, random_fermat(rd, g)}};
  try {
    intertwiner(rd, builtin_mapping_class("Ta"), t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code, Errc::NotInvariant);
  }
  // without the check the operator is still built
  auto v = intertwiner(rd, builtin_mapping_class("Ta"), t, Realization::Standard, false);
  EXPECT_EQ(v.op.m.rows(), 9);
}

// closed forms evaluated with the oracle's product formula
double oracle_dehn(const RootData& rd, const std::string& mc) {
  oracle::Roots r(rd.N);
  auto p = builtin_invariant_tuple(rd, mc).at(1);
  cplx s = 0.0;
  for (int u = 0; u < rd.N; ++u) {
    cplx psi = oracle::psi(r, p.pp, p.pm, u);
    s += mc == "Ta" ? psi * std::conj(r.gamma(u)) : psi;
  }
  return std::abs(s);
}

TEST(Dehn, TracesMatchClosedForms) {
  for (int N : {3, 5, 7, 9}) {
    auto rd = make_root_data(N);
    for (std::string mc : {"Ta", "Tb_inv"}) {
      auto V = intertwiner(rd, builtin_mapping_class(mc), builtin_invariant_tuple(rd, mc));
      double ex = oracle_dehn(rd, mc);
      EXPECT_LT(std::abs(quantum_trace(V) - ex) / std::max(1.0, ex), 1e-8) << mc << " N=" << N;
      EXPECT_NEAR(std::abs(V.op.m.determinant()), 1.0, 1e-8) << mc << " N=" << N;
    }
  }
}

TEST(Dehn, MatrixCoefficients) {
  for (int N : {3, 5}) {
    auto rd = make_root_data(N);
    oracle::Roots r(N);
    auto sp = builtin_surface("torus1").space(N);
    for (std::string mc : {"Ta", "Tb_inv"}) {
      auto t = builtin_invariant_tuple(rd, mc);
      auto V = intertwiner(rd, builtin_mapping_class(mc), t);
      auto p = t.at(1);
      for (int m = 0; m < N; ++m)
        for (int n = 0; n < N; ++n)
          for (int k = 0; k < N; ++k)
            for (int l = 0; l < N; ++l) {
              auto bra = basis_vector(rd, sp, {{BasisKind::Slant, m}, {BasisKind::Momentum, n}});
              auto ket = basis_vector(rd, sp, {{BasisKind::Slant, k}, {BasisKind::Momentum, l}});
              cplx val = (bra.v.adjoint() * V.op.m * ket.v)(0, 0);
              cplx psi = oracle::psi(r, p.pp, p.pm, n - m);
              cplx want;
              if (mc == "Ta")
                want = static_cast<double>(N) * std::polar(1.0, std::numbers::pi / 2.0 * (1.0 - N) / 3.0) * psi *
                       std::conj(r.gamma(m - l)) * r.q2(static_cast<long long>(n - l) * k);
              else
                want = static_cast<double>(N) * psi * r.gamma(k - m) * r.q2(-static_cast<long long>(n - m - l) * (k - m));
              EXPECT_LT(std::abs(val - want) / std::max(1.0, std::abs(want)), 1e-8)
                  << mc << " N=" << N << " " << m << n << k << l;
            }
    }
  }
}

TEST(Pentagon, TwoPathsGiveTheSameOperator) {
  int N = 3;
  auto rd = make_root_data(N);
  std::mt19937_64 g(5);
  auto d = builtin_surface("pentagon_disk");
  auto sp = d.space(N);
  auto run = [&](const CoefficientTuple& t, const std::vector<Move>& moves) {
    CyclicOperator v = CyclicOperator::identity(sp);
    auto cur = d;
    auto ct = t;
    for (auto& m : moves) {
      v = v * move_operator(rd, cur, m, ct);
      ct = mutate_coefficients(rd, exchange_matrix(cur), ct, flip_square(cur, m.v, m.w).kappa);
      cur = apply_move(cur, m);
    }
    return v;
  };
  for (int i = 0; i < 5; ++i) {
    CoefficientTuple t;
    for (int e = 1; e <= 5; ++e) t[e] = FermatPoint{};
    t[6] = random_fermat_branch_safe(rd, g);
    t[7] = random_fermat_branch_safe(rd, g);
    auto L = run(t, {Move::flip(1, 2), Move::flip(0, 1)});
    auto R = run(t, {Move::flip(0, 1), Move::flip(0, 2), Move::flip(1, 2)});
    EXPECT_LT(rel_err(L.m, R.m), 1e-9);
  }
}

}  // namespace
