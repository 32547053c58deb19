#pragma once

#include "cqt/cfalg.hpp"

namespace cqt {

struct PathStep {
  int tri;    // triangle label
  int entry;  // side index
  int exit;   // side index
  bool operator==(const PathStep&) const = default;
};

// A closed edge path, or for boundary classes a chain of arcs between boundary sides.
struct EdgePath {
  std::vector<PathStep> steps;
  bool closed = true;
};

inline int turn_sign(const PathStep& s) {
  if (s.exit == mod(s.entry - 1, 3)) return 1;
  if (s.exit == mod(s.entry + 1, 3)) return -1;
  throw Error(Errc::InvalidPath, "step enters and exits through the same side");
}

inline void validate_path(const DottedTriangulation& d, const EdgePath& p) {
  if (p.steps.empty()) throw Error(Errc::InvalidPath, "empty path");
  std::size_t n = p.steps.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = p.steps[i];
    int ti = d.tri_index(s.tri);
    if (s.entry < 0 || s.entry > 2 || s.exit < 0 || s.exit > 2) throw Error(Errc::InvalidPath, "side index");
    turn_sign(s);
    if (i + 1 == n && !p.closed) break;
    const auto& nx = p.steps[(i + 1) % n];
    auto g = d.glued({ti, s.exit});
    if (g) {
      if (!(d.tris[g->tri].label == nx.tri && g->side == nx.entry))
        throw Error(Errc::InvalidPath, "consecutive steps are not adjacent");
    } else {
      int nti = d.tri_index(nx.tri);
      if (p.closed || !d.is_boundary(d.tris[nti].sides[nx.entry]))
        throw Error(Errc::InvalidPath, "path leaves through the boundary");
    }
  }
  if (!p.closed) {
    const auto& f = p.steps.front();
    const auto& l = p.steps.back();
    if (!d.is_boundary(d.tri(f.tri).sides[f.entry]) || !d.is_boundary(d.tri(l.tri).sides[l.exit]))
      throw Error(Errc::InvalidPath, "boundary arcs must start and end on the boundary");
  }
}

inline Weyl homology_exponent(const DottedTriangulation& d, const EdgePath& p,
                              Realization re = Realization::Standard) {
  validate_path(d, p);
  Weyl x;
  for (auto& s : p.steps) {
    const Triangle& t = d.tri(s.tri);
    Weyl w = weyl_weight(t, s.entry, re) + weyl_weight(t, s.exit, re);
    x = x + w.scaled(turn_sign(s));
  }
  return x;
}

inline CyclicOperator homology_operator(const RootData& rd, const DottedTriangulation& d, const EdgePath& p,
                                        Realization re = Realization::Standard) {
  return weyl_operator(rd, d.space(rd.N), homology_exponent(d, p, re));
}

// Loop around an interior marked point, turning at every corner.
inline EdgePath puncture_path(const DottedTriangulation& d, int vertex) {
  auto vs = vertices(d);
  const Vertex& v = vs.at(vertex);
  if (v.boundary) throw Error(Errc::InvalidPath, "marked point is on the boundary");
  EdgePath p;
  auto [t0, c0] = v.corners.front();
  int t = t0, c = c0;
  do {
    int ex = mod(c - 1, 3);
    p.steps.push_back({d.tris[t].label, c, ex});
    auto g = d.glued({t, ex});
    t = g->tri;
    c = g->side;
  } while (!(t == t0 && c == c0));
  return p;
}

// Arcs around each marked point of a boundary component, same rotational sense as puncture loops.
inline EdgePath boundary_path(const DottedTriangulation& d, int component) {
  auto vs = vertices(d);
  auto comps = boundary_components(d, vs);
  EdgePath p;
  p.closed = false;
  for (int pt : comps.at(component)) {
    for (auto [t, c] : vs[pt].corners) {
      if (!d.is_boundary(d.tris[t].sides[c])) continue;
      int tt = t, cc = c;
      for (;;) {
        int ex = mod(cc - 1, 3);
        p.steps.push_back({d.tris[tt].label, cc, ex});
        auto g = d.glued({tt, ex});
        if (!g) break;
        tt = g->tri;
        cc = g->side;
      }
    }
  }
  return p;
}

inline std::vector<int> punctures(const DottedTriangulation& d) {
  auto vs = vertices(d);
  std::vector<int> r;
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (!vs[i].boundary) r.push_back(static_cast<int>(i));
  return r;
}

// Horizontal and vertical classes on torus1 (and the annulus core).
inline EdgePath builtin_path(const std::string& surface, const std::string& name) {
  if (surface == "torus1" && name == "a") return {{{0, 2, 1}, {1, 2, 0}}, true};
  if (surface == "torus1" && name == "b") return {{{0, 0, 1}, {1, 2, 1}}, true};
  if (surface == "annulus_1_1" && name == "a") return {{{0, 2, 1}, {1, 2, 0}}, true};
  throw Error(Errc::InvalidPath, "no built-in path " + name + " on " + surface);
}

// Reroute a path across a flip. Sides are labelled by their occurrence in the square.
inline EdgePath reroute_path(const DottedTriangulation& before, const Move& m, const EdgePath& p) {
  if (m.type == MoveType::Rotate) return p;
  if (m.type == MoveType::Permute) {
    EdgePath r = p;
    for (auto& s : r.steps)
      if (m.perm.count(s.tri)) s.tri = m.perm.at(s.tri);
    return r;
  }
  if (!p.closed) throw Error(Errc::InvalidPath, "rerouting is implemented for closed paths");
  const Triangle& tv = before.tri(m.v);
  const Triangle& tw = before.tri(m.w);
  enum Lab { A, B, C, D, K };
  auto label = [&](int tri, int side) {
    int rel = mod(side - (tri == m.v ? tv.dot : tw.dot), 3);
    if (tri == m.v) return rel == 0 ? B : rel == 1 ? K : A;
    return rel == 0 ? C : rel == 1 ? D : K;
  };
  // new side indices: v' = [K, D, A], w' = [B, C, K]
  auto in_v = [](int l) { return l == A || l == D || l == K; };
  auto side_v = [](int l) { return l == K ? 0 : l == D ? 1 : 2; };
  auto side_w = [](int l) { return l == B ? 0 : l == C ? 1 : 2; };
  std::size_t n = p.steps.size();
  auto inside = [&](const PathStep& s) { return s.tri == m.v || s.tri == m.w; };
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& cur = p.steps[i];
    const auto& prv = p.steps[(i + n - 1) % n];
    bool internal = inside(cur) && inside(prv) && label(prv.tri, prv.exit) == K;
    if (!internal) { start = i; break; }
  }
  std::vector<PathStep> out;
  if (start == n) throw Error(Errc::InvalidPath, "path does not leave the flipped square");
  for (std::size_t k = 0; k < n;) {
    const auto& s = p.steps[(start + k) % n];
    if (!inside(s)) {
      out.push_back(s);
      ++k;
      continue;
    }
    int x = label(s.tri, s.entry);
    std::size_t j = k;
    while (label(p.steps[(start + j) % n].tri, p.steps[(start + j) % n].exit) == K) ++j;
    const auto& e = p.steps[(start + j) % n];
    int y = label(e.tri, e.exit);
    k = j + 1;
    if (x == y) {
      out.push_back({m.v, -1, -1});
      continue;
    }
    bool xv = in_v(x), yv = in_v(y);
    if (xv && yv) out.push_back({m.v, side_v(x), side_v(y)});
    else if (!xv && !yv) out.push_back({m.w, side_w(x), side_w(y)});
    else if (xv) {
      out.push_back({m.v, side_v(x), 0});
      out.push_back({m.w, 2, side_w(y)});
    } else {
      out.push_back({m.w, side_w(x), 2});
      out.push_back({m.v, 0, side_v(y)});
    }
  }
  // Remove backtracks: a marker {-1,-1} or a step entering and leaving through the same side.
  bool changed = true;
  while (changed && out.size() > 1) {
    changed = false;
    for (std::size_t i = 0; i < out.size(); ++i) {
      auto& s = out[i];
      bool marker = s.entry < 0;
      bool same = !marker && s.entry == s.exit;
      if (!marker && !same) continue;
      std::size_t pi = (i + out.size() - 1) % out.size();
      std::size_t ni = (i + 1) % out.size();
      PathStep merged{out[pi].tri, out[pi].entry, out[ni].exit};
      std::vector<PathStep> nw;
      for (std::size_t k = 0; k < out.size(); ++k) {
        if (k == i || k == ni) continue;
        nw.push_back(k == pi ? merged : out[k]);
      }
      if (pi == ni) nw = {merged};
      out = nw;
      changed = true;
      break;
    }
  }
  return {out, true};
}

struct PolarizationSpec {
  std::vector<EdgePath> generators;
  std::vector<int> weights;
  std::vector<EdgePath> peripheral;
  std::vector<int> peripheral_weights;
};

struct PolarizedSubspace {
  Mat basis;  // orthonormal columns
  int dim = 0;
  CyclicOperator projector;
};

inline PolarizedSubspace polarized_subspace(const RootData& rd, const DottedTriangulation& d,
                                            const PolarizationSpec& spec, Realization re = Realization::Standard) {
  std::vector<CyclicOperator> hs;
  std::vector<int> ws;
  for (std::size_t i = 0; i < spec.generators.size(); ++i) {
    hs.push_back(homology_operator(rd, d, spec.generators[i], re));
    ws.push_back(spec.weights.at(i));
  }
  for (std::size_t i = 0; i < spec.peripheral.size(); ++i) {
    hs.push_back(homology_operator(rd, d, spec.peripheral[i], re));
    ws.push_back(spec.peripheral_weights.at(i));
  }
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = i + 1; j < hs.size(); ++j)
      if (rel_err(hs[i].m * hs[j].m, hs[j].m * hs[i].m) > 1e-9)
        throw Error(Errc::NonCommutingGenerators, "polarization generators do not commute");
  StateSpace sp = d.space(rd.N);
  CyclicOperator proj = CyclicOperator::identity(sp);
  for (std::size_t i = 0; i < hs.size(); ++i) proj = proj * spectral_projector(rd, hs[i], ws[i]);
  Eigen::JacobiSVD<Mat> svd(proj.m, Eigen::ComputeThinU);
  double thr = 1e-8 * rd.N;
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thr) ++rank;
  if (rank == 0) throw Error(Errc::EmptyCharacter, "character has an empty eigenspace");
  return {svd.matrixU().leftCols(rank), rank, proj};
}

inline CyclicOperator transvection(const RootData& rd, const DottedTriangulation& d, const EdgePath& p, int sign,
                                   Realization re = Realization::Standard) {
  return gamma_operator(rd, homology_operator(rd, d, p, re), sign, true);
}

struct ReducedIntertwiner {
  Mat block;
  PolarizedSubspace subspace;
  double leak = 0.0;
};

inline ReducedIntertwiner reduced_intertwiner(const RootData& rd, const Intertwiner& v, const PolarizedSubspace& s,
                                              const CyclicOperator& F) {
  Mat img = F.m * v.op.m * s.basis;
  Mat out = img - s.projector.m * img;
  double leak = out.norm() / std::max(1.0, img.norm());
  if (leak > 1e-8) throw Error(Errc::SubspaceMismatch, "intertwiner does not preserve the polarized subspace");
  (void)rd;
  return {s.basis.adjoint() * img, s, leak};
}

inline double reduced_quantum_trace(const ReducedIntertwiner& r) { return std::abs(r.block.trace()); }

// Built-in transvection word for the reduced intertwiners on torus1 with L = <a>.
inline CyclicOperator builtin_F(const RootData& rd, const std::string& mapclass) {
  auto t = builtin_surface("torus1");
  if (mapclass == "Tb_inv") return transvection(rd, t, builtin_path("torus1", "b"), 1);
  return CyclicOperator::identity(t.space(rd.N));
}

inline PolarizationSpec torus_polarization(const std::string& lag, int lambda) {
  PolarizationSpec s;
  s.generators = {builtin_path("torus1", lag)};
  s.weights = {lambda};
  return s;
}


struct UqReport {
  std::map<std::string, double> residuals;
  int subspace_dim = 0;
  double max_residual() const {
    double m = 0.0;
    for (auto& [k, v] : residuals) m = std::max(m, v);
    return m;
  }
};

// Cyclic representation of U_q(sl2) on the weight-p subspace of disk1_2.
inline UqReport uqsl2_module(const RootData& rd, int p, cplx r, cplx s, cplx lambda) {
  auto d = builtin_surface("disk1_2");
  StateSpace sp = d.space(rd.N);
  cplx q = rd.q, qi = 1.0 / rd.q, qh = rd.qp(rd.M);
  cplx y1 = -qi / r * lambda, y2 = -q * r * r, y3 = 1.0 / (s * lambda) * rd.q2p(p),
       y4 = -s * s * rd.q2p(-p) * q;
  auto x = [&](int e) { return cluster_exponent(d, e); };
  auto W = [&](const Weyl& w) { return weyl_operator(rd, sp, w); };
  auto E = W(x(1)) * y1 + W(x(1) + x(2)) * (y1 * y2);
  auto F = W(x(3)) * y3 + W(x(3) + x(4)) * (y3 * y4);
  auto K = W(x(1) + x(2) + x(3)) * (y1 * y2 * y3);
  auto Kp = W(x(1) + x(4) + x(3)) * (y1 * y4 * y3);
  cplx dq = q - qi;
  auto Et = E * (qh / dq);
  auto Ft = F * (1.0 / (-qh * dq));

  // psi_m and phi_l bases of the weight-p subspace
  std::vector<Vec> psi(rd.N), phi(rd.N);
  for (int m = 0; m < rd.N; ++m) {
    psi[m] = Vec::Zero(sp.dim());
    for (int n = 0; n < rd.N; ++n) psi[m](sp.index({m, n})) = rd.q2p(static_cast<long long>(p - m) * n);
  }
  for (int l = 0; l < rd.N; ++l) {
    phi[l] = Vec::Zero(sp.dim());
    for (int m = 0; m < rd.N; ++m) phi[l] += rd.q2p(-static_cast<long long>(l) * m) * psi[m];
    phi[l] *= rd.qp(static_cast<long long>(rd.M) * l * l);
  }
  Mat B(sp.dim(), rd.N);
  for (int l = 0; l < rd.N; ++l) B.col(l) = phi[l];

  UqReport rep;
  PolarizationSpec ps;
  ps.peripheral = {puncture_path(d, punctures(d).at(0))};
  ps.peripheral_weights = {p};
  auto sub = polarized_subspace(rd, d, ps);
  rep.subspace_dim = sub.dim;
  rep.residuals["phi_in_subspace"] = rel_err(Mat(sub.projector.m * B), B);

  auto on = [&](const CyclicOperator& a, const CyclicOperator& b) { return rel_err(Mat(a.m * B), Mat(b.m * B)); };
  rep.residuals["KE=q^2EK"] = on(K * E, E * K * rd.q2);
  rep.residuals["KF=q^-2FK"] = on(K * F, F * K * rd.q2p(-1));
  rep.residuals["[E,F]=(q-q^-1)(K'-K)"] = on(E * F - F * E, (Kp - K) * dq);
  rep.residuals["[Et,Ft]=(K-K')/(q-q^-1)"] = on(Et * Ft - Ft * Et, (K - Kp) * (1.0 / dq));
  rep.residuals["KK'=1"] = on(K * Kp, CyclicOperator::identity(sp));

  double ea = 0.0, fa = 0.0, ka = 0.0;
  for (int l = 0; l < rd.N; ++l) {
    cplx ce = (r * rd.qp(l + 1) - 1.0 / r * rd.qp(-l - 1)) / dq * lambda;
    cplx cf = (s * rd.qp(-l + 1) - 1.0 / s * rd.qp(l - 1)) / dq / lambda;
    cplx ck = r / s * rd.q2p(l);
    ea = std::max(ea, rel_err(Vec(Et.m * phi[l]), Vec(ce * phi[mod(l + 1, rd.N)])));
    fa = std::max(fa, rel_err(Vec(Ft.m * phi[l]), Vec(cf * phi[mod(l - 1, rd.N)])));
    ka = std::max(ka, rel_err(Vec(K.m * phi[l]), Vec(ck * phi[l])));
  }
  rep.residuals["Et action"] = ea;
  rep.residuals["Ft action"] = fa;
  rep.residuals["K action"] = ka;
  return rep;
}

}  // namespace cqt
