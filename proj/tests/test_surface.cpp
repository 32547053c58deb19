#include "cqt/surface.hpp"

#include <gtest/gtest.h>

using namespace cqt;

namespace {

int count_boundary(const DottedTriangulation& d) {
  int n = 0;
  for (auto& [e, b] : d.edges) n += b;
  return n;
}

int count_punctures(const DottedTriangulation& d) {
  int n = 0;
  for (auto& v : vertices(d)) n += v.boundary ? 0 : 1;
  return n;
}

TEST(Builtins, CountsMatchEulerCharacteristic) {
  struct Want {
    std::string name;
    int tris, edges, boundary, punctures;
  };
  for (auto w : std::vector<Want>{{"torus1", 2, 3, 0, 1},
                                  {"sphere3", 2, 3, 0, 3},
                                  {"disk1_2", 2, 4, 2, 1},
                                  {"annulus_1_1", 2, 4, 2, 0},
                                  {"pentagon_disk", 3, 7, 5, 0}}) {
    auto d = builtin_surface(w.name);
    EXPECT_EQ(static_cast<int>(d.tris.size()), w.tris) << w.name;
    EXPECT_EQ(static_cast<int>(d.edges.size()), w.edges) << w.name;
    EXPECT_EQ(count_boundary(d), w.boundary) << w.name;
    EXPECT_EQ(count_punctures(d), w.punctures) << w.name;
    // 3|t| = 2|interior| + |boundary|
    EXPECT_EQ(3 * w.tris, 2 * (w.edges - w.boundary) + w.boundary) << w.name;
  }
  EXPECT_THROW(builtin_surface("klein"), Error);
}

TEST(Builtins, AnnulusAndDiskBoundaryComponents) {
  auto a = builtin_surface("annulus_1_1");
  EXPECT_EQ(boundary_components(a, vertices(a)).size(), 2u);
  auto d = builtin_surface("disk1_2");
  EXPECT_EQ(boundary_components(d, vertices(d)).size(), 1u);
  auto p = builtin_surface("pentagon_disk");
  auto comps = boundary_components(p, vertices(p));
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_EQ(comps[0].size(), 5u);
}

TEST(ExchangeMatrix, TorusIsTwoRegular) {
  auto e = exchange_matrix(builtin_surface("torus1"));
  EXPECT_EQ(e(1, 2), 2);
  EXPECT_EQ(e(2, 3), 2);
  EXPECT_EQ(e(3, 1), 2);
  for (int a : {1, 2, 3}) {
    EXPECT_EQ(e(a, a), 0);
    for (int b : {1, 2, 3}) EXPECT_EQ(e(a, b), -e(b, a));
  }
}

TEST(ExchangeMatrix, SkewAndIntegralOnAllBuiltins) {
  for (auto& n : builtin_surface_names()) {
    auto e = exchange_matrix(builtin_surface(n));
    EXPECT_EQ(e.e, Eigen::MatrixXi(-e.e.transpose())) << n;
  }
}

TEST(ExchangeMatrix, MutationMatchesFlip) {
  for (auto& n : builtin_surface_names()) {
    auto d = builtin_surface(n);
    for (int v : d.labels())
      for (int w : d.labels()) {
        if (v == w) continue;
        FlipSquare sq;
        try {
          sq = flip_square(d, v, w);
        } catch (const Error&) {
          continue;
        }
        auto mut = matrix_mutation(exchange_matrix(d), sq.kappa);
        auto after = exchange_matrix(apply_move(d, Move::flip(v, w)));
        EXPECT_EQ(mut.e, after.e) << n << " flip " << v << "," << w;
      }
  }
}

TEST(Flip, TorusSquares) {
  auto d = builtin_surface("torus1");
  auto sq = flip_square(d, 0, 1);
  // kappa is the side after the dot of v
  EXPECT_EQ(sq.kappa, d.tri(0).sides[(d.tri(0).dot + 1) % 3]);
  auto f = apply_move(d, Move::flip(0, 1));
  EXPECT_EQ(f.tri(0).dot, 0);
  EXPECT_EQ(f.tri(1).dot, 1);
  EXPECT_EQ(f.tri(0).sides[0], sq.kappa);
  EXPECT_EQ(f.tri(1).sides[2], sq.kappa);
  validate(f);
}

TEST(Flip, Errors) {
  auto d = builtin_surface("torus1");
  auto rotated = apply_move(d, Move::rot(1));
  try {
    flip_square(rotated, 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code, Errc::DotPositionMismatch);
  }
  auto p = builtin_surface("pentagon_disk");
  try {
    flip_square(p, 0, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code, Errc::NotAdjacent);
  }
  auto disk = builtin_surface("disk1_2");
  auto r = apply_move(disk, Move::rot(0, -1));
  try {
    flip_square(r, 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code, Errc::BoundaryFlip);
  }
}

TEST(Moves, RotationHasOrderThree) {
  auto d = builtin_surface("sphere3");
  auto r = d;
  for (int i = 0; i < 3; ++i) r = apply_move(r, Move::rot(0));
  EXPECT_EQ(r.tri(0).dot, d.tri(0).dot);
  EXPECT_EQ(apply_move(apply_move(d, Move::rot(1)), Move::rot(1, -1)).tri(1).dot, d.tri(1).dot);
}

TEST(Moves, PermutationMustBeBijective) {
  auto d = builtin_surface("torus1");
  Move m;
  m.type = MoveType::Permute;
  m.perm = {{0, 1}};
  EXPECT_THROW(apply_move(d, m), Error);
  auto s = apply_move(d, Move::swap(0, 1));
  EXPECT_EQ(s.tri(0).sides, d.tri(1).sides);
}

TEST(Validation, SelfFoldedAndCountErrors) {
  try {
    make_triangulation("bad", {{0, "v", {1, 1, 2}, 0}, {1, "w", {2, 3, 3}, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code, Errc::SelfFolded);
  }
  EXPECT_THROW(make_triangulation("bad", {{0, "v", {1, 2, 3}, 0}}), Error);
  EXPECT_THROW(make_triangulation("bad", {{0, "v", {1, 2, 3}, 4}, {1, "w", {1, 2, 3}, 0}}), Error);
}

TEST(Pentagon, TwoFlipPathsAgree) {
  auto d = builtin_surface("pentagon_disk");
  auto a = run_moves(d, {Move::flip(1, 2), Move::flip(0, 1)}).back();
  auto b = run_moves(d, {Move::flip(0, 1), Move::flip(0, 2), Move::flip(1, 2)}).back();
  auto id = find_identification(b, a);
  ASSERT_TRUE(id);
  for (auto& [e, f] : id->edge_map) EXPECT_EQ(d.is_boundary(e), d.is_boundary(f));
}

TEST(MappingClasses, BuiltinsCloseUp) {
  auto ta = builtin_mapping_class("Ta");
  EXPECT_EQ(ta.moves.size(), 4u);
  EXPECT_EQ(ta.ident.edge_map, (std::map<int, int>{{1, 2}, {2, 1}, {3, 3}}));
  auto tb = builtin_mapping_class("Tb_inv");
  EXPECT_EQ(tb.moves.size(), 1u);
  EXPECT_EQ(tb.ident.edge_map, (std::map<int, int>{{1, 3}, {2, 2}, {3, 1}}));
  auto w = builtin_mapping_class("word:Ta,Tb_inv");
  EXPECT_EQ(w.moves.size(), 5u);
  EXPECT_EQ(w.ident.edge_map, (std::map<int, int>{{1, 2}, {2, 3}, {3, 1}}));
  EXPECT_TRUE(same_dotted(run_moves(w.initial, w.moves).back(), w.initial));
  EXPECT_THROW(builtin_mapping_class("Tc"), Error);
  EXPECT_THROW(builtin_mapping_class("word:"), Error);
}

TEST(MappingClasses, OpenSequenceRejected) {
  try {
    close_sequence("half", builtin_surface("sphere3"), {Move::rot(0)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code, Errc::UnknownMapClass);
  }
}

TEST(DualGraph, NodesAndLinks) {
  auto g = dual_graph(builtin_surface("disk1_2"));
  EXPECT_EQ(g.nodes.size(), 2u);
  EXPECT_EQ(g.links.size(), 4u);
  int open = 0;
  for (auto& l : g.links) open += l.b ? 0 : 1;
  EXPECT_EQ(open, 2);
}

}  // namespace
