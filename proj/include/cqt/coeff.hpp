#pragma once

#include "cqt/dilog.hpp"
#include "cqt/surface.hpp"

namespace cqt {

using CoefficientTuple = std::map<int, FermatPoint>;
using ClassicalShadow = std::map<int, cplx>;

inline bool same_point(const FermatPoint& a, const FermatPoint& b, double tol) {
  return close(a.pp, b.pp, tol) && close(a.pm, b.pm, tol);
}

inline double point_distance(const FermatPoint& a, const FermatPoint& b) {
  return std::max(std::abs(a.pp - b.pp), std::abs(a.pm - b.pm));
}

// Candidate fiber points, tried before the principal section when the ratio matches.
using FiberHints = std::vector<FermatPoint>;

inline FermatPoint resection(const RootData& rd, cplx y, const FiberHints& hints) {
  for (auto& h : hints) {
    if (std::abs(h.pm) < kDegenerate) continue;
    if (close(h.ratio(), y, 1e-10)) return h;
  }
  return fermat_from_ratio(rd, y);
}

inline CoefficientTuple mutate_coefficients(const RootData& rd, const ExchangeMatrix& eps,
                                            const CoefficientTuple& t, int kappa, const FiberHints& hints = {}) {
  const FermatPoint& pk = t.at(kappa);
  if (pk.frozen()) throw Error(Errc::FrozenFlip, "edge " + std::to_string(kappa) + " carries the frozen point");
  if (std::abs(pk.pp) < kDegenerate || std::abs(pk.pm) < kDegenerate)
    throw Error(Errc::DegenerateParameter, "flipped coefficient has a vanishing component");
  CoefficientTuple r;
  for (auto& [a, p] : t) {
    if (a == kappa) {
      r[a] = fermat_inverse(p);
      continue;
    }
    int e = eps(a, kappa);
    if (e == 0) {
      r[a] = p;
      continue;
    }
    if (std::abs(p.pm) < kDegenerate) throw Error(Errc::DegenerateParameter, "ratio undefined");
    cplx y = p.ratio() * std::pow(e > 0 ? pk.pp : pk.pm, e);
    r[a] = resection(rd, y, hints);
  }
  return r;
}

inline FiberHints hints_from(const CoefficientTuple& t) {
  FiberHints h;
  for (auto& [e, p] : t) {
    h.push_back(p);
    h.push_back(fermat_inverse(p));
  }
  return h;
}

// One tuple per triangulation along the sequence.
inline std::vector<CoefficientTuple> transport_along_sequence(const RootData& rd, const MappingClassSpec& spec,
                                                              const CoefficientTuple& t, const FiberHints& hints) {
  std::vector<CoefficientTuple> out{t};
  DottedTriangulation cur = spec.initial;
  for (auto& m : spec.moves) {
    if (m.type == MoveType::Flip) {
      auto sq = flip_square(cur, m.v, m.w);
      out.push_back(mutate_coefficients(rd, exchange_matrix(cur), out.back(), sq.kappa, hints));
    } else {
      out.push_back(out.back());
    }
    cur = apply_move(cur, m);
  }
  return out;
}

inline std::vector<CoefficientTuple> transport_along_sequence(const RootData& rd, const MappingClassSpec& spec,
                                                              const CoefficientTuple& t) {
  return transport_along_sequence(rd, spec, t, hints_from(t));
}

struct InvarianceReport {
  bool invariant = false;
  double residual = 0.0;
  std::map<int, double> per_edge;
};

inline InvarianceReport check_phi_invariance(const RootData& rd, const MappingClassSpec& spec,
                                             const CoefficientTuple& t) {
  InvarianceReport rep;
  auto seq = transport_along_sequence(rd, spec, t);
  const auto& fin = seq.back();
  for (auto& [a, p] : fin) {
    double r = point_distance(p, t.at(spec.ident.edge_map.at(a)));
    rep.per_edge[a] = r;
    rep.residual = std::max(rep.residual, r);
  }
  rep.invariant = rep.residual <= std::max(rd.tol, 1e-9);
  return rep;
}

inline ClassicalShadow classical_shadow(const RootData& rd, const CoefficientTuple& t) {
  ClassicalShadow s;
  for (auto& [a, p] : t) {
    if (std::abs(p.pm) < kDegenerate) throw Error(Errc::DegenerateParameter, "vanishing p-");
    s[a] = std::pow(p.ratio(), rd.N);
  }
  return s;
}

inline ClassicalShadow mutate_classical(const ExchangeMatrix& eps, const ClassicalShadow& s, int kappa) {
  ClassicalShadow r;
  cplx yk = s.at(kappa);
  for (auto& [a, y] : s) {
    if (a == kappa) {
      r[a] = 1.0 / yk;
      continue;
    }
    int e = eps(a, kappa);
    if (e == 0) {
      r[a] = y;
      continue;
    }
    cplx base = 1.0 + (e > 0 ? 1.0 / yk : yk);
    r[a] = y * std::pow(base, -e);
  }
  return r;
}

// Built-in invariant tuples on the once-punctured torus.
inline CoefficientTuple builtin_invariant_tuple(const RootData& rd, const std::string& mapclass) {
  double r = std::pow(2.0, 1.0 / rd.N);
  if (mapclass == "Ta") return {{1, {-1.0, r}}, {2, {r, -1.0}}, {3, {0.0, 1.0}}};
  if (mapclass == "Tb_inv") return {{1, {r, -1.0}}, {2, {0.0, 1.0}}, {3, {-1.0, r}}};
  if (mapclass == "id") return {{1, fermat_from_ratio(rd, 0.5)}, {2, fermat_from_ratio(rd, 2.0)}, {3, {0.0, 1.0}}};
  if (mapclass == "word:Ta,Tb_inv") {
    // a^N + b^N = 1 at ratio 1, and c^N solves A X^2 - A X + 1 = 0 with A = (ab)^N.
    double a = std::pow(0.5, 1.0 / rd.N), b = a;
    cplx A = std::pow(a * b, rd.N);
    cplx X = (A + std::sqrt(A * A - 4.0 * A)) / (2.0 * A);
    cplx c = std::exp(std::log(X) / static_cast<double>(rd.N));
    FermatPoint p1{a, b};
    FermatPoint p3{c, 1.0 / (a * b * c)};
    FermatPoint p2 = fermat_from_ratio(rd, b / (a * c * c));
    return {{1, p1}, {2, p2}, {3, p3}};
  }
  throw Error(Errc::UnknownMapClass, "no built-in invariant tuple for " + mapclass);
}

// Quantum shape assignment along the periodically unrolled sequence.
struct ShapeReport {
  struct Tetra {
    int period, step;
    cplx w0, w1, w2;
    double residual;
  };
  struct EdgeLife {
    int token, created_step, destroyed_step;
    cplx product;
    double residual;
  };
  std::vector<Tetra> tetrahedra;
  std::vector<EdgeLife> edges;
  std::vector<std::string> notes;
  double max_tetra = 0.0, max_edge = 0.0;
  bool ok() const { return max_tetra <= 1e-9 && max_edge <= 1e-9; }
};

inline ShapeReport shape_assignment_check(const RootData& rd, const MappingClassSpec& spec,
                                          const CoefficientTuple& t, int periods = 4) {
  ShapeReport rep;
  auto tuples = transport_along_sequence(rd, spec, t);
  std::map<int, int> token;  // current edge id -> token
  int next_token = 0;
  std::map<int, bool> initial_token;
  for (int e : spec.initial.edge_ids()) {
    token[e] = next_token;
    initial_token[next_token++] = true;
  }
  std::map<int, cplx> prod;
  std::map<int, int> created, destroyed;
  int global = 0;
  for (int per = 0; per < periods; ++per) {
    DottedTriangulation cur = spec.initial;
    for (std::size_t j = 0; j < spec.moves.size(); ++j, ++global) {
      const Move& m = spec.moves[j];
      if (m.type == MoveType::Flip) {
        auto sq = flip_square(cur, m.v, m.w);
        const FermatPoint& p = tuples[j].at(sq.kappa);
        if (std::abs(p.pp) < kDegenerate || std::abs(p.pm) < kDegenerate)
          throw Error(Errc::DegenerateParameter, "flip coefficient has a vanishing component");
        cplx w0 = p.pm, w1 = 1.0 / p.pp, w2 = -rd.q * p.ratio();
        double res = std::abs(w0 * w1 * w2 + rd.q);
        rep.tetrahedra.push_back({per, static_cast<int>(j), w0, w1, w2, res});
        rep.max_tetra = std::max(rep.max_tetra, res);
        auto mul = [&](int edge, cplx w) {
          int tk = token.at(edge);
          auto it = prod.find(tk);
          if (it == prod.end()) prod[tk] = w;
          else it->second *= w;
        };
        mul(sq.beta, w1);
        mul(sq.delta, w1);
        mul(sq.alpha, w0);
        mul(sq.gamma, w0);
        mul(sq.kappa, w2);
        destroyed[token.at(sq.kappa)] = global;
        int nt = next_token++;
        initial_token[nt] = false;
        created[nt] = global;
        prod[nt] = w2;
        token[sq.kappa] = nt;
      }
      cur = apply_move(cur, m);
    }
    std::map<int, int> relabeled;
    for (auto& [e, tk] : token) relabeled[spec.ident.edge_map.at(e)] = tk;
    token = relabeled;
  }
  for (auto& [tk, w] : prod) {
    bool complete = !initial_token[tk] && destroyed.count(tk) && created.count(tk);
    if (!complete) continue;
    double res = std::abs(w - rd.q2);
    rep.edges.push_back({tk, created[tk], destroyed[tk], w, res});
    rep.max_edge = std::max(rep.max_edge, res);
  }
  int incomplete = 0;
  for (auto& [tk, w] : prod)
    if (initial_token[tk] || !destroyed.count(tk)) ++incomplete;
  if (incomplete)
    rep.notes.push_back(std::to_string(incomplete) + " edge(s) with incomplete lifetime skipped");
  if (rep.edges.empty()) rep.notes.push_back("no edge with a complete lifetime in the unrolled window");
  return rep;
}

}  // namespace cqt
