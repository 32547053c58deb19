#pragma once

#include "cqt/coeff.hpp"

namespace cqt {

enum class Realization { Standard, Primed };

inline cplx zeta_A(const RootData& rd) {
  return std::pow(static_cast<double>(rd.N), -0.5) * ipow((1.0 - rd.N) / 6.0);
}

// zeta in T_vw A_v T_wv = zeta A_v A_w P_(vw)
inline cplx zeta_TAT(const RootData& rd) {
  double N = rd.N;
  return std::polar(1.0, std::numbers::pi / 6.0 * (1.0 - 1.0 / N));
}

// Single-site matrix acting on tensor factor `site`.
inline CyclicOperator embed_site(const StateSpace& sp, int site, const Mat& a) {
  int p = sp.pos(site);
  long long d = sp.dim();
  int N = sp.N;
  Mat m = Mat::Zero(d, d);
  for (long long i = 0; i < d; ++i) {
    auto k = sp.digits(i);
    int kin = k[p];
    for (int r = 0; r < N; ++r) {
      if (a(r, kin) == 0.0) continue;
      k[p] = r;
      m(sp.index(k), i) = a(r, kin);
    }
  }
  return {sp, m};
}

inline Mat site_A(const RootData& rd, Realization re) {
  Mat a(rd.N, rd.N);
  cplx z = zeta_A(rd);
  for (int n = 0; n < rd.N; ++n)
    for (int m = 0; m < rd.N; ++m) {
      cplx g = re == Realization::Standard ? std::conj(rd.gamma(n)) : std::conj(rd.gamma(m));
      a(n, m) = z * g * rd.q2p(-static_cast<long long>(m) * n);
    }
  return a;
}

inline CyclicOperator op_A(const RootData& rd, const StateSpace& sp, int v, bool inverse = false,
                           Realization re = Realization::Standard) {
  Mat a = site_A(rd, re);
  if (inverse) a = a * a;
  return embed_site(sp, v, a);
}

inline CyclicOperator op_S(const RootData& rd, const StateSpace& sp, int v, int w) {
  (void)rd;
  int pv = sp.pos(v), pw = sp.pos(w);
  long long d = sp.dim();
  Mat m = Mat::Zero(d, d);
  for (long long i = 0; i < d; ++i) {
    auto k = sp.digits(i);
    k[pv] = mod(k[pv] - k[pw], sp.N);
    m(sp.index(k), i) = 1.0;
  }
  return {sp, m};
}

// Argument of the dilogarithm in T_vw.
inline Weyl flip_argument(int v, int w, Realization re) {
  if (re == Realization::Standard) return Weyl::UP(v, 1, -1) + Weyl::P(w);
  return Weyl::P(v, -1) + Weyl::UP(w, 1, 1);
}

inline CyclicOperator op_S_primed(const RootData& rd, const StateSpace& sp, int v, int w) {
  auto uw = weyl_operator(rd, sp, Weyl::U(w));
  auto x = weyl_operator(rd, sp, Weyl::UP(v, 1, 1));
  auto pw_u = cyclic_powers(rd, uw);
  auto pw_x = cyclic_powers(rd, x);
  Mat m = Mat::Zero(sp.dim(), sp.dim());
  for (int i = 0; i < rd.N; ++i)
    for (int j = 0; j < rd.N; ++j) m += rd.q2p(static_cast<long long>(i) * j) * pw_u[i] * pw_x[j];
  return {sp, m / static_cast<double>(rd.N)};
}

inline CyclicOperator op_T(const RootData& rd, const StateSpace& sp, int v, int w, const FermatPoint& p,
                           Realization re = Realization::Standard) {
  auto x = weyl_operator(rd, sp, flip_argument(v, w, re));
  auto s = re == Realization::Standard ? op_S(rd, sp, v, w) : op_S_primed(rd, sp, v, w);
  return psi_operator(rd, p, x) * s;
}

inline CyclicOperator conjugator_G(const RootData& rd, const StateSpace& sp) {
  CyclicOperator g = CyclicOperator::identity(sp);
  for (int s : sp.sites) g = g * diagonal_site(sp, s, [&](int k) { return rd.gamma(k); });
  return g;
}

// Operator V_{after} -> V_{before} for a label permutation old -> new.
inline CyclicOperator op_permute(const StateSpace& sp, const std::map<int, int>& perm) {
  std::vector<int> p(sp.size());
  for (int i = 0; i < sp.size(); ++i) {
    int v = sp.sites[i];
    int sv = perm.count(v) ? perm.at(v) : v;
    p[sp.pos(sv)] = i;
  }
  return permutation_operator(sp, p);
}

inline CyclicOperator move_operator(const RootData& rd, const DottedTriangulation& before, const Move& m,
                                    const CoefficientTuple& t, Realization re = Realization::Standard) {
  StateSpace sp = before.space(rd.N);
  switch (m.type) {
    case MoveType::Rotate: {
      Mat a = site_A(rd, re);
      Mat r = Mat::Identity(rd.N, rd.N);
      for (int i = 0, n = mod(m.steps, 3); i < n; ++i) r = r * a;
      return embed_site(sp, m.v, r);
    }
    case MoveType::Flip: {
      auto sq = flip_square(before, m.v, m.w);
      return op_T(rd, sp, m.v, m.w, t.at(sq.kappa), re);
    }
    case MoveType::Permute: return op_permute(sp, m.perm);
  }
  return CyclicOperator::identity(sp);
}

// Basis identification V_initial -> V_final from the triangle bijection final -> initial.
inline CyclicOperator identification_operator(const StateSpace& sp, const Identification& id) {
  std::map<int, int> inv;
  for (auto& [f, i] : id.tri_map) inv[i] = f;
  return op_permute(sp, inv).inverse();
}

struct Intertwiner {
  CyclicOperator op;
  MappingClassSpec mapclass;
  CoefficientTuple coeffs;
  std::vector<CoefficientTuple> along;
};

inline Intertwiner intertwiner(const RootData& rd, const MappingClassSpec& spec, const CoefficientTuple& t,
                               Realization re = Realization::Standard, bool require_invariant = true) {
  if (require_invariant) {
    auto inv = check_phi_invariance(rd, spec, t);
    if (!inv.invariant)
      throw Error(Errc::NotInvariant, spec.name + ": coefficient tuple is not invariant (residual " +
                                          std::to_string(inv.residual) + ")");
  }
  auto tuples = transport_along_sequence(rd, spec, t);
  StateSpace sp = spec.initial.space(rd.N);
  CyclicOperator v = CyclicOperator::identity(sp);
  DottedTriangulation cur = spec.initial;
  for (std::size_t i = 0; i < spec.moves.size(); ++i) {
    v = v * move_operator(rd, cur, spec.moves[i], tuples[i], re);
    cur = apply_move(cur, spec.moves[i]);
  }
  v = v * identification_operator(sp, spec.ident);
  return {v, spec, t, tuples};
}

inline double quantum_trace(const Intertwiner& v) { return std::abs(v.op.m.trace()); }

}  // namespace cqt
