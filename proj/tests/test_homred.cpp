#include "cqt/homred.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

using namespace cqt;

namespace {

const auto torus = [] { return builtin_surface("torus1"); };

TEST(Homology, IntersectionAndCentrality) {
  for (int N : {3, 5, 7}) {
    auto rd = make_root_data(N);
    auto d = torus();
    auto ha = homology_operator(rd, d, builtin_path("torus1", "a"));
    auto hb = homology_operator(rd, d, builtin_path("torus1", "b"));
    EXPECT_LT(rel_err((ha * hb).m, (hb * ha * rd.qp(4)).m), 1e-10);
    for (int e : d.edge_ids()) {
      auto x = xbar(rd, d, e);
      EXPECT_LT(rel_err((x * ha).m, (ha * x).m), 1e-10);
      EXPECT_LT(rel_err((x * hb).m, (hb * x).m), 1e-10);
    }
    // h^N = 1
    auto pw = cyclic_powers(rd, ha);
    EXPECT_LT(rel_err((pw.back() * ha.m), Mat::Identity(ha.m.rows(), ha.m.cols())), 1e-10);
  }
}

TEST(Homology, PuncturePathGivesTheta) {
  int N = 3;
  auto rd = make_root_data(N);
  for (std::string name : {"torus1", "sphere3", "disk1_2"}) {
    auto d = builtin_surface(name);
    auto ps = punctures(d);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      auto h = homology_operator(rd, d, puncture_path(d, ps[i]));
      auto th = central_element(rd, d, {}, CentralKind::ThetaPuncture, static_cast<int>(i));
      EXPECT_LT(rel_err(h.m, th.op.m), 1e-10) << name << " puncture " << i;
    }
  }
}

TEST(Homology, InvalidPathsRejected) {
  auto d = torus();
  for (EdgePath p : {EdgePath{{}, true}, EdgePath{{{0, 1, 1}}, true}, EdgePath{{{0, 2, 1}, {1, 1, 0}}, true},
                     EdgePath{{{7, 2, 1}, {1, 2, 0}}, true}}) {
    try {
      validate_path(d, p);
      FAIL();
    } catch (const Error& e) {
      EXPECT_TRUE(e.code == Errc::InvalidPath || e.code == Errc::UnknownSite);
    }
  }
  EXPECT_THROW(builtin_path("sphere3", "a"), Error);
}

TEST(Polarization, TorusEigenspaces) {
  for (int N : {3, 5}) {
    auto rd = make_root_data(N);
    auto d = torus();
    int total = 0;
    for (int lam = 0; lam < N; ++lam) {
      auto s = polarized_subspace(rd, d, torus_polarization("a", lam));
      EXPECT_EQ(s.dim, N);
      Mat g = s.basis.adjoint() * s.basis;
      EXPECT_LT(rel_err(g, Mat::Identity(s.dim, s.dim)), 1e-10);
      total += s.dim;
    }
    EXPECT_EQ(total, N * N);
  }
}

TEST(Polarization, Errors) {
  auto rd = make_root_data(3);
  auto d = torus();
  PolarizationSpec both;
  both.generators = {builtin_path("torus1", "a"), builtin_path("torus1", "b")};
  both.weights = {0, 0};
  try {
    polarized_subspace(rd, d, both);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code, Errc::NonCommutingGenerators);
  }
  auto s3 = builtin_surface("sphere3");
  PolarizationSpec blocks;
  for (int v : punctures(s3)) blocks.peripheral.push_back(puncture_path(s3, v));
  blocks.peripheral_weights = {1, 0, 0};
  try {
    polarized_subspace(rd, s3, blocks);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code, Errc::EmptyCharacter);
  }
  blocks.peripheral_weights = {1, 1, 1};
  EXPECT_EQ(polarized_subspace(rd, s3, blocks).dim, 1);
}

double oracle_reduced(const RootData& rd, const std::string& mc, int lambda) {
  oracle::Roots r(rd.N);
  auto p = builtin_invariant_tuple(rd, mc).at(1);
  cplx s = 0.0;
  for (int k = 0; k < rd.N; ++k)
    s += mc == "Ta" ? oracle::psi(r, p.pp, p.pm, k) * std::conj(r.gamma(k)) : oracle::psi(r, p.pp, p.pm, 2 * k - lambda);
  return std::abs(s) / std::sqrt(static_cast<double>(rd.N));
}

TEST(Reduced, TracesMatchClosedForms) {
  for (int N : {3, 5, 7}) {
    auto rd = make_root_data(N);
    auto d = torus();
    for (std::string mc : {"Ta", "Tb_inv"}) {
      auto V = intertwiner(rd, builtin_mapping_class(mc), builtin_invariant_tuple(rd, mc));
      auto F = builtin_F(rd, mc);
      for (int lam = 0; lam < N; ++lam) {
        auto s = polarized_subspace(rd, d, torus_polarization("a", lam));
        auto red = reduced_intertwiner(rd, V, s, F);
        double ex = oracle_reduced(rd, mc, lam);
        EXPECT_LT(std::abs(reduced_quantum_trace(red) - ex) / std::max(1.0, ex), 1e-8)
            << mc << " N=" << N << " lambda=" << lam;
        EXPECT_LT(red.leak, 1e-8);
      }
    }
  }
}

TEST(Reduced, TransvectionIsNeededForTb) {
  int N = 5;
  auto rd = make_root_data(N);
  auto d = torus();
  auto V = intertwiner(rd, builtin_mapping_class("Tb_inv"), builtin_invariant_tuple(rd, "Tb_inv"));
  auto s = polarized_subspace(rd, d, torus_polarization("a", 1));
  try {
    reduced_intertwiner(rd, V, s, CyclicOperator::identity(d.space(N)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code, Errc::SubspaceMismatch);
  }
  auto F = builtin_F(rd, "Tb_inv");
  EXPECT_NEAR(std::abs(F.m.determinant()), 1.0, 1e-9);
}

TEST(Transvection, ConjugatesAIntoAPlusB) {
  int N = 5;
  auto rd = make_root_data(N);
  auto d = torus();
  auto ha = homology_operator(rd, d, builtin_path("torus1", "a"));
  auto hb = homology_operator(rd, d, builtin_path("torus1", "b"));
  auto F = transvection(rd, d, builtin_path("torus1", "b"), 1);
  auto img = F.conj(ha);
  // the image is proportional to a Weyl-ordered product h_a h_b up to a root of unity
  bool found = false;
  for (int s : {1, -1})
    for (int k = 0; k < N && !found; ++k) {
      Mat cand = ha.m * cyclic_powers(rd, hb)[mod(s, N)] * rd.q2p(k);
      if (rel_err(img.m, cand) < 1e-9) found = true;
    }
  EXPECT_TRUE(found);
}

TEST(Uqsl2, WeightModuleRelations) {
  int N = 5;
  auto rd = make_root_data(N);
  std::mt19937_64 g(12);
  std::uniform_real_distribution<double> u(0.5, 1.5), ph(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 5; ++i) {
    cplx r = std::polar(u(g), ph(g)), s = std::polar(u(g), ph(g)), lam = std::polar(u(g), ph(g));
    for (int p : {0, 2}) {
      auto rep = uqsl2_module(rd, p, r, s, lam);
      EXPECT_EQ(rep.subspace_dim, N);
      for (auto& [k, v] : rep.residuals) EXPECT_LT(v, 1e-9) << k;
    }
  }
}

}  // namespace
