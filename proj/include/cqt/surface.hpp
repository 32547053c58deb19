#pragma once

#include "cqt/cyclic.hpp"

#include <array>
#include <optional>
#include <set>
#include <sstream>

namespace cqt {

// Side i of a triangle runs from corner i to corner i+1 (counter-clockwise).
struct Triangle {
  int label = 0;
  std::string name;
  std::array<int, 3> sides{};
  int dot = 0;
};

struct SideRef {
  int tri;   // index into triangles
  int side;  // 0..2
  bool operator==(const SideRef&) const = default;
};

struct Vertex {
  std::vector<std::pair<int, int>> corners;  // (triangle index, corner)
  bool boundary = false;
  std::string name;
};

struct DottedTriangulation {
  std::string name;
  std::vector<Triangle> tris;  // sorted by label
  std::map<int, bool> edges;   // edge id -> is boundary

  int tri_index(int label) const {
    for (std::size_t i = 0; i < tris.size(); ++i)
      if (tris[i].label == label) return static_cast<int>(i);
    throw Error(Errc::UnknownSite, "triangle " + std::to_string(label));
  }
  const Triangle& tri(int label) const { return tris[tri_index(label)]; }
  Triangle& tri(int label) { return tris[tri_index(label)]; }

  std::vector<int> labels() const {
    std::vector<int> l;
    for (auto& t : tris) l.push_back(t.label);
    return l;
  }
  std::vector<int> edge_ids() const {
    std::vector<int> e;
    for (auto& [id, b] : edges) e.push_back(id);
    return e;
  }
  bool is_boundary(int e) const { return edges.at(e); }

  std::vector<SideRef> occurrences(int e) const {
    std::vector<SideRef> r;
    for (std::size_t t = 0; t < tris.size(); ++t)
      for (int s = 0; s < 3; ++s)
        if (tris[t].sides[s] == e) r.push_back({static_cast<int>(t), s});
    return r;
  }
  // The other occurrence of an interior edge.
  std::optional<SideRef> glued(SideRef r) const {
    int e = tris[r.tri].sides[r.side];
    if (is_boundary(e)) return std::nullopt;
    for (auto& o : occurrences(e))
      if (!(o == r)) return o;
    return std::nullopt;
  }
  StateSpace space(int N) const { return {labels(), N}; }
  void sort() {
    std::sort(tris.begin(), tris.end(), [](auto& a, auto& b) { return a.label < b.label; });
  }
};

inline void validate(const DottedTriangulation& d) {
  std::map<int, int> count;
  for (auto& t : d.tris) {
    std::set<int> s(t.sides.begin(), t.sides.end());
    if (s.size() != 3) throw Error(Errc::SelfFolded, "triangle " + std::to_string(t.label) + " repeats an edge");
    if (t.dot < 0 || t.dot > 2) throw Error(Errc::ParseError, "dot must be 0, 1 or 2");
    for (int e : t.sides) ++count[e];
  }
  for (auto& [e, b] : d.edges) {
    int want = b ? 1 : 2;
    if (count[e] != want)
      throw Error(Errc::ParseError, "edge " + std::to_string(e) + " has " + std::to_string(count[e]) +
                                        " occurrences, expected " + std::to_string(want));
  }
  for (auto& [e, c] : count)
    if (!d.edges.count(e)) throw Error(Errc::ParseError, "edge " + std::to_string(e) + " not declared");
}

// Marked points as classes of corners.
inline std::vector<Vertex> vertices(const DottedTriangulation& d) {
  int n = static_cast<int>(d.tris.size()) * 3;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (std::size_t t = 0; t < d.tris.size(); ++t)
    for (int i = 0; i < 3; ++i) {
      auto g = d.glued({static_cast<int>(t), i});
      if (!g) continue;
      unite(3 * static_cast<int>(t) + i, 3 * g->tri + (g->side + 1) % 3);
      unite(3 * static_cast<int>(t) + (i + 1) % 3, 3 * g->tri + g->side);
    }
  std::map<int, int> cls;
  std::vector<Vertex> vs;
  for (int c = 0; c < n; ++c) {
    int r = find(c);
    if (!cls.count(r)) {
      cls[r] = static_cast<int>(vs.size());
      vs.emplace_back();
    }
    Vertex& v = vs[cls[r]];
    int t = c / 3, i = c % 3;
    v.corners.push_back({t, i});
    const auto& tr = d.tris[t];
    if (d.is_boundary(tr.sides[i]) || d.is_boundary(tr.sides[(i + 2) % 3])) v.boundary = true;
  }
  for (std::size_t i = 0; i < vs.size(); ++i) vs[i].name = (vs[i].boundary ? "m" : "p") + std::to_string(i);
  return vs;
}

inline int vertex_of(const std::vector<Vertex>& vs, int tri, int corner) {
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (auto& c : vs[i].corners)
      if (c.first == tri && c.second == corner) return static_cast<int>(i);
  return -1;
}

// Boundary components as sets of boundary marked points.
inline std::vector<std::vector<int>> boundary_components(const DottedTriangulation& d,
                                                         const std::vector<Vertex>& vs) {
  int n = static_cast<int>(vs.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (std::size_t t = 0; t < d.tris.size(); ++t)
    for (int i = 0; i < 3; ++i)
      if (d.is_boundary(d.tris[t].sides[i])) {
        int a = vertex_of(vs, static_cast<int>(t), i), b = vertex_of(vs, static_cast<int>(t), (i + 1) % 3);
        parent[find(a)] = find(b);
      }
  std::map<int, std::vector<int>> comp;
  for (int i = 0; i < n; ++i)
    if (vs[i].boundary) comp[find(i)].push_back(i);
  std::vector<std::vector<int>> r;
  for (auto& [k, v] : comp) r.push_back(v);
  return r;
}

// Number of endpoints of edge e at the given marked points.
inline std::map<int, int> incidence(const DottedTriangulation& d, const std::vector<Vertex>& vs,
                                    const std::vector<int>& points) {
  std::map<int, int> inc;
  for (int e : d.edge_ids()) inc[e] = 0;
  std::set<int> pts(points.begin(), points.end());
  for (int e : d.edge_ids()) {
    auto occ = d.occurrences(e);
    auto& o = occ.front();
    if (pts.count(vertex_of(vs, o.tri, o.side))) ++inc[e];
    if (pts.count(vertex_of(vs, o.tri, (o.side + 1) % 3))) ++inc[e];
  }
  return inc;
}

struct ExchangeMatrix {
  std::vector<int> edges;
  Eigen::MatrixXi e;

  int idx(int edge) const {
    auto it = std::find(edges.begin(), edges.end(), edge);
    if (it == edges.end()) throw Error(Errc::UnknownSite, "edge " + std::to_string(edge));
    return static_cast<int>(it - edges.begin());
  }
  int operator()(int a, int b) const { return e(idx(a), idx(b)); }
};

inline ExchangeMatrix exchange_matrix(const DottedTriangulation& d) {
  for (auto& t : d.tris) {
    std::set<int> s(t.sides.begin(), t.sides.end());
    if (s.size() != 3) throw Error(Errc::SelfFolded, "triangle " + std::to_string(t.label));
  }
  ExchangeMatrix m;
  m.edges = d.edge_ids();
  int n = static_cast<int>(m.edges.size());
  m.e = Eigen::MatrixXi::Zero(n, n);
  for (auto& t : d.tris)
    for (int i = 0; i < 3; ++i) {
      int a = m.idx(t.sides[i]), b = m.idx(t.sides[(i + 1) % 3]);
      m.e(a, b) += 1;
      m.e(b, a) -= 1;
    }
  return m;
}

inline ExchangeMatrix matrix_mutation(const ExchangeMatrix& m, int kappa) {
  ExchangeMatrix r = m;
  int k = m.idx(kappa), n = static_cast<int>(m.edges.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == k || j == k)
        r.e(i, j) = -m.e(i, j);
      else
        r.e(i, j) = m.e(i, j) + (std::abs(m.e(i, k)) * m.e(k, j) + m.e(i, k) * std::abs(m.e(k, j))) / 2;
    }
  return r;
}

struct DualGraph {
  struct Node {
    int label;
    std::array<int, 3> clockwise;  // edge ids, clockwise from the dotted corner's first side
    int dot;
  };
  struct Link {
    int edge;
    SideRef a;
    std::optional<SideRef> b;
  };
  std::vector<Node> nodes;
  std::vector<Link> links;
};

inline DualGraph dual_graph(const DottedTriangulation& d) {
  DualGraph g;
  for (auto& t : d.tris)
    g.nodes.push_back({t.label, {t.sides[t.dot], t.sides[(t.dot + 2) % 3], t.sides[(t.dot + 1) % 3]}, t.dot});
  for (int e : d.edge_ids()) {
    auto occ = d.occurrences(e);
    DualGraph::Link l{e, occ[0], std::nullopt};
    if (occ.size() > 1) l.b = occ[1];
    g.links.push_back(l);
  }
  return g;
}

enum class MoveType { Rotate, Flip, Permute };

struct Move {
  MoveType type = MoveType::Rotate;
  int v = 0, w = 0;
  int steps = 1;              // rotation: +1 or -1
  std::map<int, int> perm;    // old label -> new label

  static Move rot(int v, int s = 1) { Move m; m.type = MoveType::Rotate; m.v = v; m.steps = s; return m; }
  static Move flip(int v, int w) { Move m; m.type = MoveType::Flip; m.v = v; m.w = w; return m; }
  static Move swap(int v, int w) {
    Move m;
    m.type = MoveType::Permute;
    m.v = v;
    m.w = w;
    m.perm = {{v, w}, {w, v}};
    return m;
  }
};

struct FlipSquare {
  int kappa, alpha, beta, gamma, delta;
};

// Square labels relative to the dots: v = [beta, kappa, alpha], w = [gamma, delta, kappa].
inline FlipSquare flip_square(const DottedTriangulation& d, int v, int w) {
  const Triangle& tv = d.tri(v);
  int kappa = tv.sides[(tv.dot + 1) % 3];
  if (d.is_boundary(kappa)) throw Error(Errc::BoundaryFlip, "edge " + std::to_string(kappa) + " is on the boundary");
  auto g = d.glued({d.tri_index(v), (tv.dot + 1) % 3});
  if (!g || d.tris[g->tri].label == v || d.tris[g->tri].label != w)
    throw Error(Errc::NotAdjacent, "triangles " + std::to_string(v) + " and " + std::to_string(w) +
                                       " do not share the edge opposite the dot");
  const Triangle& tw = d.tri(w);
  if (g->side != (tw.dot + 2) % 3)
    throw Error(Errc::DotPositionMismatch, "dot of triangle " + std::to_string(w) + " is misplaced for the flip");
  return {kappa, tv.sides[(tv.dot + 2) % 3], tv.sides[tv.dot], tw.sides[tw.dot], tw.sides[(tw.dot + 1) % 3]};
}

inline DottedTriangulation apply_move(const DottedTriangulation& d, const Move& m) {
  DottedTriangulation r = d;
  switch (m.type) {
    case MoveType::Rotate: {
      Triangle& t = r.tri(m.v);
      t.dot = mod(t.dot + m.steps, 3);
      break;
    }
    case MoveType::Flip: {
      auto s = flip_square(d, m.v, m.w);
      Triangle& tv = r.tri(m.v);
      Triangle& tw = r.tri(m.w);
      tv.sides = {s.kappa, s.delta, s.alpha};
      tv.dot = 0;
      tw.sides = {s.beta, s.gamma, s.kappa};
      tw.dot = 1;
      break;
    }
    case MoveType::Permute: {
      for (auto& t : r.tris) {
        auto it = m.perm.find(t.label);
        if (it != m.perm.end()) t.label = it->second;
      }
      std::set<int> l;
      for (auto& t : r.tris) l.insert(t.label);
      if (l.size() != r.tris.size()) throw Error(Errc::ParseError, "permutation is not a bijection");
      r.sort();
      break;
    }
  }
  return r;
}

// Combinatorial identification: tri_map and edge_map send labels of `from` to labels of `to`.
struct Identification {
  std::map<int, int> tri_map;
  std::map<int, int> edge_map;
};

inline std::optional<Identification> match_with(const DottedTriangulation& from, const DottedTriangulation& to,
                                                const std::map<int, int>& tri_map) {
  Identification id{tri_map, {}};
  for (auto& t : from.tris) {
    const Triangle& u = to.tri(tri_map.at(t.label));
    for (int i = 0; i < 3; ++i) {
      int a = t.sides[(t.dot + i) % 3], b = u.sides[(u.dot + i) % 3];
      auto it = id.edge_map.find(a);
      if (it != id.edge_map.end() && it->second != b) return std::nullopt;
      if (from.is_boundary(a) != to.is_boundary(b)) return std::nullopt;
      id.edge_map[a] = b;
    }
  }
  std::set<int> img;
  for (auto& [a, b] : id.edge_map) img.insert(b);
  if (img.size() != id.edge_map.size() || img.size() != to.edges.size()) return std::nullopt;
  return id;
}

// Searches triangle bijections, identity first.
inline std::optional<Identification> find_identification(const DottedTriangulation& from,
                                                         const DottedTriangulation& to) {
  if (from.tris.size() != to.tris.size() || from.edges.size() != to.edges.size()) return std::nullopt;
  auto a = from.labels();
  auto b = to.labels();
  std::vector<int> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::map<int, int> tm;
    for (std::size_t i = 0; i < a.size(); ++i) tm[a[i]] = b[perm[i]];
    if (auto id = match_with(from, to, tm)) return id;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

inline bool same_dotted(const DottedTriangulation& a, const DottedTriangulation& b) {
  return find_identification(a, b).has_value();
}

inline DottedTriangulation make_triangulation(std::string name, std::vector<Triangle> tris,
                                              std::set<int> boundary = {}) {
  DottedTriangulation d;
  d.name = std::move(name);
  d.tris = std::move(tris);
  for (auto& t : d.tris)
    for (int e : t.sides) d.edges[e] = boundary.count(e) > 0;
  d.sort();
  validate(d);
  return d;
}

inline DottedTriangulation builtin_surface(const std::string& name) {
  if (name == "torus1")
    return make_triangulation(name, {{0, "v", {3, 1, 2}, 0}, {1, "w", {2, 3, 1}, 0}});
  if (name == "sphere3")
    return make_triangulation(name, {{0, "v", {1, 2, 3}, 2}, {1, "w", {1, 3, 2}, 0}});
  if (name == "disk1_2")
    return make_triangulation(name, {{0, "v", {1, 4, 2}, 0}, {1, "w", {2, 4, 3}, 0}}, {1, 3});
  if (name == "annulus_1_1")
    return make_triangulation(name, {{0, "v", {3, 1, 2}, 0}, {1, "w", {2, 4, 1}, 0}}, {3, 4});
  if (name == "pentagon_disk")
    return make_triangulation(name, {{0, "u", {1, 2, 6}, 1}, {1, "v", {6, 3, 7}, 1}, {2, "w", {7, 4, 5}, 1}},
                              {1, 2, 3, 4, 5});
  throw Error(Errc::UnknownSurface, name);
}

inline std::vector<std::string> builtin_surface_names() {
  return {"torus1", "sphere3", "disk1_2", "annulus_1_1", "pentagon_disk"};
}

// Identification maps labels of the final triangulation to labels of the initial one.
struct MappingClassSpec {
  std::string name;
  DottedTriangulation initial;
  std::vector<Move> moves;
  Identification ident;
};

inline std::vector<DottedTriangulation> run_moves(const DottedTriangulation& d, const std::vector<Move>& ms) {
  std::vector<DottedTriangulation> seq{d};
  for (auto& m : ms) seq.push_back(apply_move(seq.back(), m));
  return seq;
}

inline MappingClassSpec close_sequence(std::string name, const DottedTriangulation& d, std::vector<Move> moves) {
  MappingClassSpec s{std::move(name), d, std::move(moves), {}};
  auto seq = run_moves(d, s.moves);
  auto id = find_identification(seq.back(), d);
  if (!id) throw Error(Errc::UnknownMapClass, s.name + ": sequence does not close up");
  s.ident = *id;
  return s;
}

// Moves of a mapping class, expressed on a triangulation identified with its initial one.
inline std::vector<Move> translate_moves(const std::vector<Move>& ms, const std::map<int, int>& tri_map) {
  auto tr = [&](int x) { return tri_map.count(x) ? tri_map.at(x) : x; };
  std::vector<Move> r;
  for (auto m : ms) {
    m.v = tr(m.v);
    m.w = tr(m.w);
    std::map<int, int> p;
    for (auto& [a, b] : m.perm) p[tr(a)] = tr(b);
    m.perm = p;
    r.push_back(m);
  }
  return r;
}

inline MappingClassSpec builtin_single(const std::string& name) {
  auto torus = builtin_surface("torus1");
  if (name == "Ta") return close_sequence(name, torus, {Move::flip(0, 1), Move::rot(1), Move::rot(1), Move::swap(0, 1)});
  if (name == "Tb_inv") return close_sequence(name, torus, {Move::flip(0, 1)});
  if (name == "id") return close_sequence(name, torus, {});
  throw Error(Errc::UnknownMapClass, name);
}

inline std::vector<std::string> split_word(const std::string& w) {
  std::vector<std::string> r;
  std::stringstream ss(w);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) r.push_back(item);
  return r;
}

inline MappingClassSpec builtin_mapping_class(const std::string& name) {
  if (name.rfind("word:", 0) != 0) return builtin_single(name);
  auto parts = split_word(name.substr(5));
  if (parts.empty()) throw Error(Errc::UnknownMapClass, name);
  auto torus = builtin_surface("torus1");
  std::vector<Move> moves;
  DottedTriangulation cur = torus;
  std::map<int, int> to_current;  // initial triangle label -> current label
  for (auto l : torus.labels()) to_current[l] = l;
  for (auto& p : parts) {
    auto spec = builtin_single(p);
    auto tm = translate_moves(spec.moves, to_current);
    for (auto& m : tm) {
      cur = apply_move(cur, m);
      moves.push_back(m);
    }
    auto id = find_identification(cur, torus);
    if (!id) throw Error(Errc::UnknownMapClass, name + ": word does not close up");
    for (auto& [c, i] : id->tri_map) to_current[i] = c;
  }
  return close_sequence(name, torus, moves);
}

}  // namespace cqt
