#pragma once

#include "cqt/repfun.hpp"

namespace cqt {

// Weight on a half-edge, by position of the side relative to the dot.
inline Weyl weyl_weight(const Triangle& t, int side, Realization re) {
  int rel = mod(side - t.dot, 3);
  if (re == Realization::Standard) {
    if (rel == 0) return Weyl::U(t.label, -1);
    if (rel == 2) return Weyl::P(t.label);
    return Weyl::UP(t.label, 1, -1);
  }
  if (rel == 0) return Weyl::U(t.label, -1);
  if (rel == 2) return Weyl::UP(t.label, 1, 1);
  return Weyl::P(t.label, -1);
}

inline Weyl half_edge_weight(const DottedTriangulation& d, SideRef r, Realization re) {
  return weyl_weight(d.tris[r.tri], r.side, re);
}

inline Weyl cluster_exponent(const DottedTriangulation& d, int alpha, Realization re = Realization::Standard) {
  Weyl x;
  for (auto& o : d.occurrences(alpha)) x = x + half_edge_weight(d, o, re);
  return x;
}

struct ClusterGenerator {
  int edge;
  Weyl exponent;
  CyclicOperator xbar;
  cplx y;
  CyclicOperator x;
};

inline ClusterGenerator embed_cluster_variable(const RootData& rd, const DottedTriangulation& d,
                                               const CoefficientTuple& t, int alpha,
                                               Realization re = Realization::Standard) {
  Weyl e = cluster_exponent(d, alpha, re);
  auto xb = weyl_operator(rd, d.space(rd.N), e);
  cplx y = t.count(alpha) ? t.at(alpha).ratio() : cplx(1.0);
  return {alpha, e, xb, y, xb * y};
}

inline CyclicOperator xbar(const RootData& rd, const DottedTriangulation& d, int alpha,
                           Realization re = Realization::Standard) {
  return weyl_operator(rd, d.space(rd.N), cluster_exponent(d, alpha, re));
}

// Image of the generator on the mutated side under the quantum mutation at kappa.
inline CyclicOperator quantum_mutation_image(const RootData& rd, const DottedTriangulation& d,
                                             const CoefficientTuple& t, int kappa, int alpha,
                                             Realization re = Realization::Standard) {
  auto eps = exchange_matrix(d);
  auto xk = xbar(rd, d, kappa, re);
  const FermatPoint& p = t.at(kappa);
  if (alpha == kappa) return xk.inverse();
  auto xa = xbar(rd, d, alpha, re);
  int e = eps(alpha, kappa);
  CyclicOperator id = CyclicOperator::identity(xa.space);
  CyclicOperator r = xa;
  if (e < 0) {
    for (int j = 1; j <= -e; ++j) r = r * (id * p.pm + xk * (rd.qp(2 * j - 1) * p.pp));
  } else if (e > 0) {
    auto xki = xk.inverse();
    for (int j = 1; j <= e; ++j) {
      auto f = id * p.pp + xki * (rd.qp(2 * j - 1) * p.pm);
      if (std::abs(f.m.determinant()) < kDegenerate) throw Error(Errc::DegenerateParameter, "singular factor");
      r = r * f.inverse();
    }
  }
  return r;
}

// Ad_{Psi_{p_kappa}(Xbar_kappa)} applied to the monomial part.
inline CyclicOperator mutation_decomposition_image(const RootData& rd, const DottedTriangulation& d,
                                                   const CoefficientTuple& t, int kappa, int alpha,
                                                   Realization re = Realization::Standard) {
  auto eps = exchange_matrix(d);
  auto xk = xbar(rd, d, kappa, re);
  Weyl mono;
  if (alpha == kappa) {
    mono = -cluster_exponent(d, kappa, re);
  } else {
    int e = std::max(eps(alpha, kappa), 0);
    mono = cluster_exponent(d, alpha, re) + cluster_exponent(d, kappa, re).scaled(e);
  }
  auto m = weyl_operator(rd, xk.space, mono);
  auto psi = psi_operator(rd, t.at(kappa), xk);
  return psi.conj(m);
}

struct CompatibilityReport {
  double max_residual = 0.0;
  std::map<int, double> per_edge;
};

inline CompatibilityReport compatibility_check(const RootData& rd, const DottedTriangulation& before,
                                               const Move& m, const CoefficientTuple& t,
                                               Realization re = Realization::Standard) {
  CompatibilityReport rep;
  auto after = apply_move(before, m);
  auto op = move_operator(rd, before, m, t, re);
  int kappa = m.type == MoveType::Flip ? flip_square(before, m.v, m.w).kappa : -1;
  for (int a : after.edge_ids()) {
    auto lhs = op.conj(xbar(rd, after, a, re));
    CyclicOperator rhs = m.type == MoveType::Flip ? quantum_mutation_image(rd, before, t, kappa, a, re)
                                                  : xbar(rd, before, a, re);
    double r = rel_err(lhs.m, rhs.m);
    rep.per_edge[a] = r;
    rep.max_residual = std::max(rep.max_residual, r);
  }
  return rep;
}

enum class CentralKind { ThetaPuncture, ThetaBoundary, Hbar, H };

struct CentralElement {
  CyclicOperator op;
  cplx scalar = 1.0;
  Weyl exponent;
};

inline CentralElement central_element(const RootData& rd, const DottedTriangulation& d, const CoefficientTuple& t,
                                      CentralKind which, int index = 0, Realization re = Realization::Standard) {
  auto vs = vertices(d);
  std::map<int, int> inc;
  if (which == CentralKind::ThetaPuncture) {
    std::vector<int> punct;
    for (std::size_t i = 0; i < vs.size(); ++i)
      if (!vs[i].boundary) punct.push_back(static_cast<int>(i));
    inc = incidence(d, vs, {punct.at(index)});
  } else if (which == CentralKind::ThetaBoundary) {
    inc = incidence(d, vs, boundary_components(d, vs).at(index));
  } else {
    for (int e : d.edge_ids()) inc[e] = 1;
  }
  CentralElement c;
  for (auto& [e, k] : inc) c.exponent = c.exponent + cluster_exponent(d, e, re).scaled(k);
  c.op = weyl_operator(rd, d.space(rd.N), c.exponent);
  if (which == CentralKind::H) {
    for (int e : d.edge_ids())
      if (!d.is_boundary(e) && t.count(e)) c.scalar *= t.at(e).ratio();
    c.op = c.op * c.scalar;
  }
  return c;
}

inline int puncture_count(const DottedTriangulation& d) {
  int n = 0;
  for (auto& v : vertices(d)) n += v.boundary ? 0 : 1;
  return n;
}

}  // namespace cqt
