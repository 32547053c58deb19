#pragma once

#include "cqt/io.hpp"

#include <functional>

namespace cqt {

struct Check {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  json data = json::object();

  SuiteReport(std::string name = "") : suite(std::move(name)) {}

  void add(const std::string& name, double residual, double tol, const std::string& note = "") {
    checks.push_back({name, residual, tol, std::isfinite(residual) && residual <= tol, note});
  }
  void fail(const std::string& name, const std::string& why) {
    checks.push_back({name, std::numeric_limits<double>::infinity(), 0.0, false, why});
  }
  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
  void append(const SuiteReport& o) {
    for (auto& c : o.checks) checks.push_back(c);
    for (auto& [k, v] : o.data.items()) data[k] = v;
  }
  // Aggregate over checks whose name starts with the prefix.
  Check summary(const std::string& prefix, const std::string& label) const {
    Check s{label, 0.0, 0.0, true, ""};
    int n = 0;
    for (auto& c : checks) {
      if (c.name.rfind(prefix, 0) != 0) continue;
      ++n;
      s.pass = s.pass && c.pass;
      if (!std::isfinite(c.residual) || c.residual / std::max(c.tol, 1e-300) > s.residual / std::max(s.tol, 1e-300)) {
        s.residual = c.residual;
        s.tol = c.tol;
      }
      if (!c.pass && s.note.empty()) s.note = c.name + (c.note.empty() ? "" : ": " + c.note);
    }
    if (n == 0) {
      s.pass = false;
      s.note = "no checks matched";
    }
    return s;
  }
};

inline json to_json(const Check& c) {
  json j{{"name", c.name}, {"tol", c.tol}, {"pass", c.pass}};
  j["residual"] = std::isfinite(c.residual) ? json(c.residual) : json(nullptr);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline json to_json(const SuiteReport& r) {
  json cs = json::array();
  for (auto& c : r.checks) cs.push_back(to_json(c));
  return {{"suite", r.suite}, {"pass", r.ok()}, {"checks", cs}, {"data", r.data}};
}

struct SuiteConfig {
  std::vector<int> Ns{3, 5, 7};
  int samples = 20;
  std::uint64_t seed = 1;
  double tol = 1e-9;
};

namespace detail {

inline std::mt19937_64 rng(const SuiteConfig& c, const std::string& tag, int N) {
  std::seed_seq s{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32),
                  static_cast<std::uint32_t>(std::hash<std::string>{}(tag)), static_cast<std::uint32_t>(N)};
  return std::mt19937_64(s);
}

inline std::string tagN(const std::string& s, int N) { return s + " N=" + std::to_string(N); }

// Runs f, turning a thrown error into a failed check.
inline void guarded(SuiteReport& r, const std::string& name, const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    r.fail(name, e.what());
  }
}

inline cplx random_unit_scale(std::mt19937_64& g) {
  std::uniform_real_distribution<double> mag(-1.0, 1.0), ph(0.0, 2.0 * std::numbers::pi);
  return std::polar(std::exp(mag(g)), ph(g));
}

inline Mat identity(long long d) { return Mat::Identity(d, d); }

}  // namespace detail

// ---- dilogarithm ------------------------------------------------------------------------

inline SuiteReport pentagon_suite(const SuiteConfig& cfg) {
  SuiteReport r{"pentagon"};
  for (int N : cfg.Ns) {
    detail::guarded(r, detail::tagN("pentagon", N), [&] {
      auto rd = make_root_data(N, cfg.tol);
      auto g = detail::rng(cfg, "pentagon", N);
      StateSpace s1({0}, N);
      auto U = weyl_operator(rd, s1, Weyl::U(0));
      auto P = weyl_operator(rd, s1, Weyl::P(0));
      auto UP = weyl_operator(rd, s1, Weyl::UP(0, 1, 1));
      auto sides = [&](const PentagonParams& s) {
        auto lhs = psi_operator(rd, s.p, U) * psi_operator(rd, s.r_prime, P);
        auto rhs = psi_operator(rd, s.r, P) * psi_operator(rd, s.p_prime, UP) * psi_operator(rd, s.p_dprime, U);
        return std::pair{lhs, rhs};
      };
      double op = 0.0, proj = 0.0, par = 0.0, coef = 0.0, ferm = 0.0;
      int jumps = 0;
      for (int i = 0; i < cfg.samples; ++i) {
        auto s = solve_pentagon_params(rd, random_fermat_branch_safe(rd, g), random_fermat_branch_safe(rd, g));
        auto [lhs, rhs] = sides(s);
        op = std::max(op, rel_err(lhs.m, rhs.m));

        // wide domain: the principal branch may cost an N-th root of unity
        auto w = solve_pentagon_params(rd, random_fermat(rd, g), random_fermat(rd, g));
        auto [lw, rw] = sides(w);
        cplx c = (rw.m.inverse() * lw.m).trace() / static_cast<double>(N);
        proj = std::max({proj, rel_err(lw.m, rw.m * c), std::abs(std::pow(c, N) - 1.0)});
        if (std::abs(c - 1.0) > 1e-9) ++jumps;
        for (auto* t : {&s, &w}) {
          for (double x : pentagon_parameter_residuals(*t)) par = std::max(par, x);
          for (double x : pentagon_coeff_residuals(*t)) coef = std::max(coef, x);
          ferm = std::max(ferm, fermat_residual(rd, t->p_dprime));
        }
      }
      r.add(detail::tagN("pentagon operator", N), op, 1e-9, "p, r sampled with |y| <= sin(pi/N)/2");
      r.add(detail::tagN("pentagon up to an N-th root of unity", N), proj, 1e-9, "log|y| in [-1, 1]");
      r.data[detail::tagN("pentagon wide-domain root-of-unity jumps", N)] =
          std::to_string(jumps) + "/" + std::to_string(cfg.samples);
      r.add(detail::tagN("pentagon parameter relations", N), par, 1e-12);
      r.add(detail::tagN("pentagon coefficient relations", N), coef, 1e-10);
      r.add(detail::tagN("pentagon p'' Fermat", N), ferm, 1e-12);
      auto triv = solve_pentagon_params(rd, random_fermat(rd, g), FermatPoint{});
      r.add(detail::tagN("pentagon r=(0,1) special case", N),
            std::max({point_distance(triv.p_prime, {}), point_distance(triv.r_prime, {}),
                      point_distance(triv.p_dprime, triv.p)}),
            1e-12);
    });
  }
  return r;
}

inline SuiteReport inversion_suite(const SuiteConfig& cfg) {
  SuiteReport r{"inversion"};
  for (int N : cfg.Ns) {
    detail::guarded(r, detail::tagN("inversion", N), [&] {
      auto rd = make_root_data(N, cfg.tol);
      auto g = detail::rng(cfg, "inversion", N);
      StateSpace s1({0}, N);
      auto U = weyl_operator(rd, s1, Weyl::U(0));
      double inv = 0.0, winv = 0.0, prod = 0.0, qdiff = 0.0, det = 0.0;
      for (int i = 0; i < cfg.samples; ++i) {
        auto p = random_fermat_branch_safe(rd, g);
        auto a = psi_values(rd, p), b = psi_values(rd, fermat_inverse(p));
        for (int k = 0; k < N; ++k)
          inv = std::max(inv, std::abs(a[k] * b[mod(-k, N)] - rd.gamma(k) * zeta_inv(rd)));

        auto pw = random_fermat(rd, g);
        auto av = psi_values(rd, pw);
        cplx pr = 1.0;
        for (int k = 0; k < N; ++k) {
          winv = std::max(winv, std::abs(w_function(rd, pw, k) * w_function(rd, fermat_inverse(pw), -k) - rd.gamma(k)));
          pr *= av[k];
        }
        prod = std::max(prod, std::abs(pr - 1.0));
        // Psi(q^2 U) Psi(U)^{-1} = diag(p- + q p+ q^{2k})
        auto shifted = psi_operator(rd, pw, U * rd.q2);
        Mat ratio = shifted.m * psi_operator(rd, pw, U).inverse().m;
        Mat expect = Mat::Zero(N, N);
        for (int k = 0; k < N; ++k) expect(k, k) = pw.pm + rd.q * pw.pp * rd.q2p(k);
        qdiff = std::max(qdiff, rel_err(ratio, expect));
        det = std::max(det, std::abs(psi_operator(rd, pw, U).m.determinant() - 1.0));
      }
      r.add(detail::tagN("inversion Psi", N), inv, 1e-10, "p sampled with |y| <= sin(pi/N)/2");
      r.add(detail::tagN("inversion w", N), winv, 1e-10);
      r.add(detail::tagN("Psi product over Z_N", N), prod, 1e-10);
      r.add(detail::tagN("q-difference", N), qdiff, 1e-10);
      r.add(detail::tagN("det Psi(U)", N), det, 1e-10);

      // Principal branch over the wide sampling domain, reported only.
      int bad = 0, total = 4 * cfg.samples;
      for (int i = 0; i < total; ++i) {
        auto p = random_fermat(rd, g);
        auto a = psi_values(rd, p), b = psi_values(rd, fermat_inverse(p));
        double m = 0.0;
        for (int k = 0; k < N; ++k) m = std::max(m, std::abs(a[k] * b[mod(-k, N)] - rd.gamma(k) * zeta_inv(rd)));
        if (m > 1e-10) ++bad;
      }
      r.data[detail::tagN("inversion wide-domain failures", N)] = std::to_string(bad) + "/" + std::to_string(total);
    });
  }
  return r;
}

inline SuiteReport gauss_suite(const SuiteConfig& cfg) {
  SuiteReport r{"gauss"};
  for (int N : cfg.Ns) {
    detail::guarded(r, detail::tagN("gauss", N), [&] {
      auto rd = make_root_data(N, cfg.tol);
      double sq = std::sqrt(static_cast<double>(N));
      double e1 = std::max(std::abs(gauss_sum(rd, 1, 1) - sq * ipow(-(N - 1) / 2.0)),
                           std::abs(gauss_sum(rd, -1, 1) - sq * ipow((N - 1) / 2.0)));
      cplx z2 = ((rd.M % 2) == 0 ? cplx(0.0, 1.0) : cplx(1.0)) * sq;
      double e2 = 0.0;
      for (int l = 0; l < N; ++l) {
        cplx sp = 0.0, sm = 0.0;
        for (int k = 0; k < N; ++k) {
          sp += rd.gamma(k) * rd.gamma(k) * rd.q2p(static_cast<long long>(k) * l);
          sm += std::conj(rd.gamma(k) * rd.gamma(k)) * rd.q2p(static_cast<long long>(k) * l);
        }
        cplx gm = std::pow(rd.gamma(l), rd.M);
        e2 = std::max({e2, std::abs(sp - z2 / gm), std::abs(sm - std::conj(z2) * gm)});
      }
      cplx pg = 1.0;
      for (int k = 0; k < N; ++k) pg /= rd.gamma(k);
      double e3 = std::abs(pg - std::pow(zeta_inv(rd), N));
      r.add(detail::tagN("zeta_pm", N), e1, 1e-10);
      r.add(detail::tagN("zeta^(2) parity and Fourier", N), e2, 1e-10);
      r.add(detail::tagN("prod gamma^-1 = zeta_inv^N", N), e3, 1e-10);
    });
  }
  return r;
}

// ---- groupoid ---------------------------------------------------------------------------

inline SuiteReport groupoid_suite(const SuiteConfig& cfg) {
  SuiteReport r{"groupoid"};
  for (int N : cfg.Ns) {
    detail::guarded(r, detail::tagN("groupoid", N), [&] {
      auto rd = make_root_data(N, cfg.tol);
      auto g = detail::rng(cfg, "groupoid", N);
      StateSpace s2({0, 1}, N);
      Mat id2 = detail::identity(s2.dim());
      double a3 = 0.0;
      for (auto re : {Realization::Standard, Realization::Primed}) {
        auto A = op_A(rd, s2, 0, false, re);
        a3 = std::max(a3, rel_err((A * A * A).m, id2));
      }
      r.add(detail::tagN("A^3 = Id", N), a3, 1e-9);

      double tat = 0.0, ata = 0.0, detT = 0.0, detA = 0.0, gT = 0.0, gA = 0.0;
      auto G = conjugator_G(rd, s2);
      for (int i = 0; i < cfg.samples; ++i) {
        auto p = random_fermat_branch_safe(rd, g);
        auto T = op_T(rd, s2, 0, 1, p);
        auto Av = op_A(rd, s2, 0), Aw = op_A(rd, s2, 1);
        auto lhs = T * Av * op_T(rd, s2, 1, 0, fermat_inverse(p));
        tat = std::max(tat, rel_err(lhs.m, (Av * Aw * swap_operator(s2, 0, 1) * zeta_TAT(rd)).m));
        ata = std::max(ata, rel_err((Av * T * Aw).m, (Aw * op_T(rd, s2, 1, 0, p) * Av).m));
        detT = std::max(detT, std::abs(T.m.determinant() - 1.0));
        detA = std::max(detA, std::abs(std::abs(Av.m.determinant()) - 1.0));
        gT = std::max(gT, rel_err(op_T(rd, s2, 0, 1, p, Realization::Primed).m, G.conj(T).m));
        gA = std::max(gA, rel_err(op_A(rd, s2, 0, false, Realization::Primed).m, G.conj(Av).m));
      }
      r.add(detail::tagN("TAT = zeta AAP", N), tat, 1e-9, "exact phase e^{(pi i/6)(1-1/N)}");
      r.add(detail::tagN("ATA = ATA", N), ata, 1e-9);
      r.add(detail::tagN("det T = 1", N), detT, 1e-9);
      r.add(detail::tagN("|det A| = 1", N), detA, 1e-9);
      r.add(detail::tagN("primed T = G T G^-1", N), gT, 1e-9);
      r.add(detail::tagN("primed A = G A G^-1", N), gA, 1e-9);

      // Pentagon on the pentagon disk: two flip paths with coefficients transported by mutation.
      auto d = builtin_surface("pentagon_disk");
      auto sp = d.space(N);
      double tt = 0.0, ratio = 0.0, same = 0.0;
      int wide_bad = 0;
      auto run = [&](const CoefficientTuple& t, const std::vector<Move>& moves) {
        CyclicOperator v = CyclicOperator::identity(sp);
        DottedTriangulation cur = d;
        CoefficientTuple ct = t;
        for (auto& m : moves) {
          auto sq = flip_square(cur, m.v, m.w);
          v = v * op_T(rd, sp, m.v, m.w, ct.at(sq.kappa));
          ct = mutate_coefficients(rd, exchange_matrix(cur), ct, sq.kappa);
          cur = apply_move(cur, m);
        }
        return std::tuple{v, cur, ct};
      };
      auto tuple_for = [&](const FermatPoint& p, const FermatPoint& q) {
        CoefficientTuple t;
        for (int e = 1; e <= 5; ++e) t[e] = FermatPoint{};
        t[7] = p;
        t[6] = q;
        return t;
      };
      const std::vector<Move> two{Move::flip(1, 2), Move::flip(0, 1)};
      const std::vector<Move> three{Move::flip(0, 1), Move::flip(0, 2), Move::flip(1, 2)};
      for (int i = 0; i < cfg.samples; ++i) {
        auto t = tuple_for(random_fermat_branch_safe(rd, g), random_fermat_branch_safe(rd, g));
        auto [L, dl, tl] = run(t, two);
        auto [R, dr, tr] = run(t, three);
        tt = std::max(tt, rel_err(L.m, R.m));
        auto ident = find_identification(dr, dl);
        same = std::max(same, ident ? 0.0 : 1.0);
        if (ident)
          for (auto& [e, pt] : tr)
            ratio = std::max(ratio, std::abs(pt.ratio() - tl.at(ident->edge_map.at(e)).ratio()) /
                                        std::max(1.0, std::abs(pt.ratio())));
        auto w = tuple_for(random_fermat(rd, g), random_fermat(rd, g));
        if (rel_err(std::get<0>(run(w, two)).m, std::get<0>(run(w, three)).m) > 1e-9) ++wide_bad;
      }
      r.add(detail::tagN("TT = TTT on pentagon_disk", N), tt, 1e-9, "transported coefficients, |y| <= sin(pi/N)/2");
      r.add(detail::tagN("pentagon paths end at the same triangulation", N), same, 0.0);
      r.add(detail::tagN("pentagon paths transported ratios agree", N), ratio, 1e-9);
      r.data[detail::tagN("TT = TTT wide-domain failures", N)] =
          std::to_string(wide_bad) + "/" + std::to_string(cfg.samples);

      // Determinants of built-in intertwiners.
      for (std::string mc : {"Ta", "Tb_inv", "word:Ta,Tb_inv"}) {
        auto spec = builtin_mapping_class(mc);
        auto V = intertwiner(rd, spec, builtin_invariant_tuple(rd, mc));
        r.add(detail::tagN("|det V| " + mc, N), std::abs(std::abs(V.op.m.determinant()) - 1.0), 1e-9);
      }
    });
  }
  return r;
}

// Closed forms of the Dehn twist traces.
inline double dehn_closed_form(const RootData& rd, const std::string& mc) {
  auto t = builtin_invariant_tuple(rd, mc);
  auto ps = psi_values(rd, t.at(1));
  cplx s = 0.0;
  for (int u = 0; u < rd.N; ++u) s += mc == "Ta" ? ps[u] / rd.gamma(u) : ps[u];
  return std::abs(s);
}

inline cplx dehn_coefficient(const RootData& rd, const std::string& mc, const std::vector<cplx>& ps, int m, int n,
                             int k, int l, int sign = -1) {
  int N = rd.N;
  if (mc == "Ta")
    return static_cast<double>(N) * ipow((1.0 - N) / 3.0) * ps[mod(n - m, N)] / rd.gamma(m - l) *
           rd.q2p(static_cast<long long>(n - l) * k);
  return static_cast<double>(N) * ps[mod(n - m, N)] * rd.gamma(k - m) *
         rd.q2p(sign * static_cast<long long>(n - m - l) * (k - m));
}

inline SuiteReport dehn_suite(const SuiteConfig& cfg) {
  SuiteReport r{"dehn"};
  for (int N : cfg.Ns) {
    detail::guarded(r, detail::tagN("dehn", N), [&] {
      auto rd = make_root_data(N, cfg.tol);
      auto g = detail::rng(cfg, "dehn", N);
      auto sp = builtin_surface("torus1").space(N);
      std::uniform_int_distribution<int> ud(0, N - 1);
      for (std::string mc : {"Ta", "Tb_inv"}) {
        auto t = builtin_invariant_tuple(rd, mc);
        auto V = intertwiner(rd, builtin_mapping_class(mc), t);
        double z = quantum_trace(V), ex = dehn_closed_form(rd, mc);
        r.add(detail::tagN("trace " + mc, N), std::abs(z - ex) / std::max(1.0, ex), 1e-8);
        r.data[detail::tagN("Z " + mc, N)] = z;
        auto ps = psi_values(rd, t.at(1));
        double ce = 0.0, flipped = 0.0;
        for (int i = 0; i < 10; ++i) {
          int m = ud(g), n = ud(g), k = ud(g), l = ud(g);
          auto bra = basis_vector(rd, sp, {{BasisKind::Slant, m}, {BasisKind::Momentum, n}});
          auto ket = basis_vector(rd, sp, {{BasisKind::Slant, k}, {BasisKind::Momentum, l}});
          cplx val = (bra.v.adjoint() * V.op.m * ket.v)(0, 0);
          cplx e = dehn_coefficient(rd, mc, ps, m, n, k, l);
          ce = std::max(ce, std::abs(val - e) / std::max(1.0, std::abs(e)));
          cplx ep = dehn_coefficient(rd, mc, ps, m, n, k, l, +1);
          flipped = std::max(flipped, std::abs(val - ep) / std::max(1.0, std::abs(ep)));
        }
        r.add(detail::tagN("matrix coefficients " + mc, N), ce, 1e-8,
              mc == "Tb_inv" ? "phase q^{-2(n-m-l)(k-m)}" : "");
        if (mc == "Tb_inv") r.data[detail::tagN("Tb_inv coefficients with phase q^{+2(n-m-l)(k-m)}", N)] = flipped;
      }
      auto w = intertwiner(rd, builtin_mapping_class("word:Ta,Tb_inv"), builtin_invariant_tuple(rd, "word:Ta,Tb_inv"));
      r.data[detail::tagN("Z word:Ta,Tb_inv", N)] = quantum_trace(w);
    });
  }
  return r;
}

// ---- coefficients -----------------------------------------------------------------------

inline CoefficientTuple random_tuple(const RootData& rd, const DottedTriangulation& d, std::mt19937_64& g) {
  CoefficientTuple t;
  for (int e : d.edge_ids()) t[e] = d.is_boundary(e) ? FermatPoint{} : random_fermat(rd, g);
  return t;
}

inline std::vector<std::pair<int, int>> admissible_flips(const DottedTriangulation& d) {
  std::vector<std::pair<int, int>> f;
  for (int v : d.labels())
    for (int w : d.labels()) {
      if (v == w) continue;
      try {
        flip_square(d, v, w);
        f.emplace_back(v, w);
      } catch (const Error&) {
      }
    }
  return f;
}

inline SuiteReport frobenius_suite(const SuiteConfig& cfg) {
  SuiteReport r{"frobenius"};
  for (int N : cfg.Ns) {
    detail::guarded(r, detail::tagN("frobenius", N), [&] {
      auto rd = make_root_data(N, cfg.tol);
      auto g = detail::rng(cfg, "frobenius", N);
      double sh = 0.0, ferm = 0.0, mat = 0.0;
      int flips = 0;
      for (auto& name : builtin_surface_names()) {
        auto d = builtin_surface(name);
        for (auto [v, w] : admissible_flips(d)) {
          ++flips;
          auto eps = exchange_matrix(d);
          int kappa = flip_square(d, v, w).kappa;
          auto after = apply_move(d, Move::flip(v, w));
          auto mm = matrix_mutation(eps, kappa);
          auto ea = exchange_matrix(after);
          for (int a : d.edge_ids())
            for (int b : d.edge_ids()) mat = std::max(mat, static_cast<double>(std::abs(mm(a, b) - ea(a, b))));
          for (int i = 0; i < cfg.samples; ++i) {
            auto t = random_tuple(rd, d, g);
            auto mt = mutate_coefficients(rd, eps, t, kappa);
            auto lhs = classical_shadow(rd, mt);
            auto rhs = mutate_classical(eps, classical_shadow(rd, t), kappa);
            for (auto& [e, y] : lhs) sh = std::max(sh, std::abs(y - rhs.at(e)) / std::max(1.0, std::abs(y)));
            for (auto& [e, p] : mt) ferm = std::max(ferm, fermat_residual(rd, p));
          }
        }
      }
      r.add(detail::tagN("shadow commuting square", N), sh, 1e-10, std::to_string(flips) + " flips");
      r.add(detail::tagN("Fermat identity after mutation", N), ferm, 1e-10);
      r.add(detail::tagN("exchange matrix mutation", N), mat, 0.0);
    });
  }
  return r;
}

inline SuiteReport shape_suite(const SuiteConfig& cfg) {
  SuiteReport r{"shape"};
  for (int N : cfg.Ns) {
    detail::guarded(r, detail::tagN("shape", N), [&] {
      auto rd = make_root_data(N, cfg.tol);
      for (std::string mc : {"Ta", "word:Ta,Tb_inv"}) {
        auto rep = shape_assignment_check(rd, builtin_mapping_class(mc), builtin_invariant_tuple(rd, mc));
        r.add(detail::tagN("tetrahedron relation " + mc, N), rep.max_tetra, 1e-9,
              std::to_string(rep.tetrahedra.size()) + " tetrahedra");
        if (rep.edges.empty()) r.fail(detail::tagN("edge relation " + mc, N), "no complete edge lifetime");
        else
          r.add(detail::tagN("edge relation " + mc, N), rep.max_edge, 1e-9,
                std::to_string(rep.edges.size()) + " complete edges");
      }
    });
  }
  return r;
}

// ---- Chekhov-Fock -----------------------------------------------------------------------

inline SuiteReport cfalg_suite(const SuiteConfig& cfg) {
  SuiteReport r{"cfalg"};
  for (int N : cfg.Ns) {
    detail::guarded(r, detail::tagN("cfalg", N), [&] {
      auto rd = make_root_data(N, cfg.tol);
      auto g = detail::rng(cfg, "cfalg", N);
      auto torus = builtin_surface("torus1");
      for (auto re : {Realization::Standard, Realization::Primed}) {
        std::string rn = re == Realization::Standard ? "standard" : "primed";
        double rot = 0.0, flip = 0.0, perm = 0.0;
        for (int v : torus.labels())
          for (int s : {1, -1}) rot = std::max(rot, compatibility_check(rd, torus, Move::rot(v, s), {}, re).max_residual);
        perm = compatibility_check(rd, torus, Move::swap(0, 1), {}, re).max_residual;
        for (std::string mc : {"Ta", "Tb_inv"}) {
          auto spec = builtin_mapping_class(mc);
          auto tuples = transport_along_sequence(rd, spec, builtin_invariant_tuple(rd, mc));
          DottedTriangulation cur = spec.initial;
          for (std::size_t i = 0; i < spec.moves.size(); ++i) {
            double x = compatibility_check(rd, cur, spec.moves[i], tuples[i], re).max_residual;
            (spec.moves[i].type == MoveType::Flip ? flip : rot) = std::max(spec.moves[i].type == MoveType::Flip ? flip : rot, x);
            cur = apply_move(cur, spec.moves[i]);
          }
        }
        for (int i = 0; i < cfg.samples; ++i)
          flip = std::max(flip, compatibility_check(rd, torus, Move::flip(0, 1), random_tuple(rd, torus, g), re).max_residual);
        r.add(detail::tagN("compatibility rotation " + rn, N), rot, 1e-9);
        r.add(detail::tagN("compatibility flip " + rn, N), flip, 1e-9);
        r.add(detail::tagN("compatibility permutation " + rn, N), perm, 1e-9);
      }

      double dec = 0.0, comm = 0.0, cas = 0.0, hbar = 0.0, load = 0.0, sq = 0.0, two = 0.0;
      for (auto& name : builtin_surface_names()) {
        auto d = builtin_surface(name);
        auto sp = d.space(N);
        auto eps = exchange_matrix(d);
        auto t = random_tuple(rd, d, g);
        for (auto [v, w] : admissible_flips(d)) {
          int kappa = flip_square(d, v, w).kappa;
          for (int a : d.edge_ids())
            dec = std::max(dec, rel_err(mutation_decomposition_image(rd, d, t, kappa, a).m,
                                        quantum_mutation_image(rd, d, t, kappa, a).m));
        }
        auto G = conjugator_G(rd, sp);
        std::vector<CyclicOperator> xs;
        for (int a : d.edge_ids()) {
          xs.push_back(xbar(rd, d, a));
          two = std::max(two, rel_err(G.conj(xs.back()).m, xbar(rd, d, a, Realization::Primed).m));
        }
        auto ids = d.edge_ids();
        for (std::size_t i = 0; i < ids.size(); ++i)
          for (std::size_t j = 0; j < ids.size(); ++j)
            comm = std::max(comm, rel_err((xs[i] * xs[j]).m, (xs[j] * xs[i] * rd.q2p(eps(ids[i], ids[j]))).m));
        std::vector<CentralElement> cs;
        for (std::size_t i = 0; i < punctures(d).size(); ++i)
          cs.push_back(central_element(rd, d, t, CentralKind::ThetaPuncture, static_cast<int>(i)));
        auto vs = vertices(d);
        for (std::size_t i = 0; i < boundary_components(d, vs).size(); ++i)
          cs.push_back(central_element(rd, d, t, CentralKind::ThetaBoundary, static_cast<int>(i)));
        CyclicOperator prod = CyclicOperator::identity(sp);
        for (auto& c : cs) {
          prod = prod * c.op;
          for (auto& x : xs) cas = std::max(cas, rel_err((x * c.op).m, (c.op * x).m));
        }
        auto hb = central_element(rd, d, t, CentralKind::Hbar);
        hbar = std::max(hbar, rel_err(hb.op.m, detail::identity(sp.dim())));
        sq = std::max(sq, rel_err((hb.op * hb.op).m, prod.m));
        auto h = central_element(rd, d, t, CentralKind::H);
        cplx yl = 1.0;
        for (int e : d.edge_ids())
          if (!d.is_boundary(e)) yl *= t.at(e).ratio();
        load = std::max(load, rel_err(h.op.m, Mat(detail::identity(sp.dim()) * yl)));
      }
      r.add(detail::tagN("mutation decomposition", N), dec, 1e-9);
      r.add(detail::tagN("X commutation from exchange matrix", N), comm, 1e-9);
      r.add(detail::tagN("Ad_G standard -> primed weights", N), two, 1e-9);
      r.add(detail::tagN("theta central", N), cas, 1e-9);
      r.add(detail::tagN("iota(Hbar) = Id", N), hbar, 1e-9);
      r.add(detail::tagN("Hbar^2 = prod theta", N), sq, 1e-9);
      r.add(detail::tagN("central load", N), load, 1e-9);
    });
  }
  return r;
}

// ---- homology and reduction -------------------------------------------------------------

inline SuiteReport homology_suite(const SuiteConfig& cfg) {
  SuiteReport r{"homology"};
  for (int N : cfg.Ns) {
    detail::guarded(r, detail::tagN("homology", N), [&] {
      auto rd = make_root_data(N, cfg.tol);
      auto torus = builtin_surface("torus1");
      auto sp = torus.space(N);
      auto pa = builtin_path("torus1", "a"), pb = builtin_path("torus1", "b");
      auto ha = homology_operator(rd, torus, pa), hb = homology_operator(rd, torus, pb);
      r.add(detail::tagN("intersection h_a h_b = q^4 h_b h_a", N), rel_err((ha * hb).m, (hb * ha * rd.qp(4)).m), 1e-9);
      auto pha = weyl_operator(rd, sp, Weyl::U(0) + Weyl::UP(1, 1, -1));
      auto phb = site_operator(rd, sp, 1, Kind::U, 1) * site_operator(rd, sp, 0, Kind::P, 1);
      r.add(detail::tagN("h_a, h_b explicit forms", N), std::max(rel_err(ha.m, pha.m), rel_err(hb.m, phb.m)), 1e-9);

      double th = 0.0, cas = 0.0;
      for (auto& name : builtin_surface_names()) {
        auto d = builtin_surface(name);
        auto pu = punctures(d);
        std::vector<CyclicOperator> hs;
        for (std::size_t i = 0; i < pu.size(); ++i) {
          auto h = homology_operator(rd, d, puncture_path(d, pu[i]));
          th = std::max(th, rel_err(central_element(rd, d, {}, CentralKind::ThetaPuncture, static_cast<int>(i)).op.m, h.m));
          hs.push_back(h);
        }
        auto vs = vertices(d);
        for (std::size_t i = 0; i < boundary_components(d, vs).size(); ++i) {
          auto h = homology_operator(rd, d, boundary_path(d, static_cast<int>(i)));
          th = std::max(th, rel_err(central_element(rd, d, {}, CentralKind::ThetaBoundary, static_cast<int>(i)).op.m, h.m));
          hs.push_back(h);
        }
        if (name == "torus1") {
          hs.push_back(ha);
          hs.push_back(hb);
        }
        for (int e : d.edge_ids()) {
          auto x = xbar(rd, d, e);
          for (auto& h : hs) cas = std::max(cas, rel_err((x * h).m, (h * x).m));
        }
      }
      r.add(detail::tagN("iota(theta) = h_c on built-ins", N), th, 1e-9);
      r.add(detail::tagN("homology operators commute with X", N), cas, 1e-9);

      auto spec = builtin_mapping_class("Ta");
      auto tuples = transport_along_sequence(rd, spec, builtin_invariant_tuple(rd, "Ta"));
      double nat = 0.0;
      for (auto base : {pa, pb}) {
        EdgePath path = base;
        DottedTriangulation cur = spec.initial;
        for (std::size_t i = 0; i < spec.moves.size(); ++i) {
          auto next = apply_move(cur, spec.moves[i]);
          auto np = reroute_path(cur, spec.moves[i], path);
          auto V = move_operator(rd, cur, spec.moves[i], tuples[i]);
          nat = std::max(nat, rel_err(V.conj(homology_operator(rd, next, np)).m, homology_operator(rd, cur, path).m));
          cur = next;
          path = np;
        }
      }
      r.add(detail::tagN("naturality across Ta", N), nat, 1e-9);

      // transvection: Ad gamma(h_b)^{1/2} sends h_a to h_{a+b} up to the Weyl scalar
      auto F = transvection(rd, torus, pb, 1);
      auto hab = weyl_operator(rd, sp, homology_exponent(torus, pa) + homology_exponent(torus, pb));
      double tv = std::min(rel_err(F.conj(ha).m, hab.m),
                           rel_err(F.conj(ha).m, weyl_operator(rd, sp, homology_exponent(torus, pa) -
                                                                      homology_exponent(torus, pb)).m));
      r.add(detail::tagN("transvection conjugation", N), tv, 1e-9);
      r.add(detail::tagN("|det transvection| = 1", N), std::abs(std::abs(F.m.determinant()) - 1.0), 1e-9);
    });
  }
  return r;
}

inline SuiteReport decomposition_suite(const SuiteConfig& cfg) {
  SuiteReport r{"decomposition"};
  for (int N : cfg.Ns) {
    detail::guarded(r, detail::tagN("decomposition", N), [&] {
      auto rd = make_root_data(N, cfg.tol);
      auto s = builtin_surface("sphere3");
      auto sp = s.space(N);
      auto pu = punctures(s);
      int bad1 = 0, bad0 = 0;
      double block = 0.0;
      for (int l = 0; l < N; ++l)
        for (int m = 0; m < N; ++m)
          for (int shift : {0, 1}) {
            PolarizationSpec ps;
            for (int v : pu) ps.peripheral.push_back(puncture_path(s, v));
            int nu = mod(-l - m + shift, N);
            ps.peripheral_weights = {l, m, nu};
            bool zero = mod(l + m + nu, N) != 0;
            try {
              auto sub = polarized_subspace(rd, s, ps);
              if (zero || sub.dim != 1) ++(zero ? bad0 : bad1);
              if (!zero && l == 0) {
                // sum_{m,n} gamma(m-n)^{-1} q^{-2 m la - 2 n nu} |m,n>, with weights read off the block
                Vec best = sub.basis.col(0);
                double fit = 1.0;
                for (int a = 0; a < N; ++a)
                  for (int b = 0; b < N; ++b) {
                    Vec v = Vec::Zero(sp.dim());
                    for (int x = 0; x < N; ++x)
                      for (int y = 0; y < N; ++y)
                        v(sp.index({x, y})) = std::conj(rd.gamma(x - y)) *
                                              rd.q2p(-static_cast<long long>(x) * a - static_cast<long long>(y) * b);
                    v.normalize();
                    fit = std::min(fit, 1.0 - std::abs(best.dot(v)));
                  }
                block = std::max(block, fit);
              }
            } catch (const Error& e) {
              if (e.code != Errc::EmptyCharacter || !zero) ++(zero ? bad0 : bad1);
            }
          }
      r.add(detail::tagN("sphere3 dim 1 when weights sum to 0", N), bad1, 0.0);
      r.add(detail::tagN("sphere3 dim 0 otherwise", N), bad0, 0.0);
      r.add(detail::tagN("sphere3 conformal block shape", N), block, 1e-9);

      auto torus = builtin_surface("torus1");
      int tbad = 0;
      for (int l = 0; l < N; ++l)
        if (polarized_subspace(rd, torus, torus_polarization("a", l)).dim != N) ++tbad;
      r.add(detail::tagN("torus1 L_a dim N", N), tbad, 0.0);

      auto disk = builtin_surface("disk1_2");
      int dbad = 0;
      for (int p = 0; p < N; ++p) {
        PolarizationSpec ps;
        ps.peripheral = {puncture_path(disk, punctures(disk).at(0))};
        ps.peripheral_weights = {p};
        if (polarized_subspace(rd, disk, ps).dim != N) ++dbad;
      }
      r.add(detail::tagN("disk1_2 weight-p dim N", N), dbad, 0.0);
    });
  }
  return r;
}

inline double reduced_closed_form(const RootData& rd, const std::string& mc, int lambda) {
  auto ps = psi_values(rd, builtin_invariant_tuple(rd, mc).at(1));
  cplx s = 0.0;
  for (int k = 0; k < rd.N; ++k) s += mc == "Ta" ? ps[k] / rd.gamma(k) : ps[mod(2 * k - lambda, rd.N)];
  return std::abs(s) / std::sqrt(static_cast<double>(rd.N));
}

inline SuiteReport reduced_suite(const SuiteConfig& cfg) {
  SuiteReport r{"reduced"};
  for (int N : cfg.Ns) {
    detail::guarded(r, detail::tagN("reduced", N), [&] {
      auto rd = make_root_data(N, cfg.tol);
      auto torus = builtin_surface("torus1");
      auto sp = torus.space(N);
      cplx z2 = ((rd.M % 2) == 0 ? cplx(0.0, 1.0) : cplx(1.0)) * std::sqrt(static_cast<double>(N));
      for (std::string mc : {"Ta", "Tb_inv"}) {
        auto t = builtin_invariant_tuple(rd, mc);
        auto V = intertwiner(rd, builtin_mapping_class(mc), t);
        auto F = builtin_F(rd, mc);
        auto ps = psi_values(rd, t.at(1));
        double tr = 0.0, det = 0.0, coef = 0.0;
        json traces = json::array();
        for (int lam = 0; lam < N; ++lam) {
          auto sub = polarized_subspace(rd, torus, torus_polarization("a", lam));
          auto R = reduced_intertwiner(rd, V, sub, F);
          double z = reduced_quantum_trace(R), ex = reduced_closed_form(rd, mc, lam);
          traces.push_back(z);
          tr = std::max(tr, std::abs(z - ex) / std::max(1.0, ex));
          det = std::max(det, std::abs(std::abs(R.block.determinant()) - 1.0));
          for (int k = 0; k < N; ++k)
            for (int l = 0; l < N; ++l) {
              auto ak = basis_vector(rd, sp, {{BasisKind::Position, k}, {BasisKind::Slant, k - lam}});
              auto al = basis_vector(rd, sp, {{BasisKind::Position, l}, {BasisKind::Slant, l - lam}});
              cplx val = (ak.v.adjoint() * F.m * V.op.m * al.v)(0, 0);
              cplx e;
              if (mc == "Ta") {
                cplx su = 0.0;
                for (int u = 0; u < N; ++u) su += ps[u] / rd.gamma(u) * rd.q2p(static_cast<long long>(u) * (k - l));
                e = ipow((1.0 - N) / 3.0) * rd.gamma(l) / rd.gamma(k) * rd.gamma(l - lam) / rd.gamma(k - lam) *
                    rd.q2p(static_cast<long long>(l) * (lam - l)) * su;
              } else {
                e = z2 * ps[mod(2 * l - lam, N)] / (rd.gamma(l - k) * rd.gamma(l - k));
              }
              coef = std::max(coef, std::abs(val - e) / std::max(1.0, std::abs(e)));
            }
        }
        r.add(detail::tagN("reduced trace " + mc, N), tr, 1e-8, "all lambda");
        r.add(detail::tagN("reduced |det| " + mc, N), det, 1e-8);
        r.add(detail::tagN("reduced coefficients " + mc, N), coef, 1e-8);
        r.data[detail::tagN("Zbar " + mc, N)] = traces;
      }
    });
  }
  return r;
}

inline SuiteReport uqsl2_suite(const SuiteConfig& cfg) {
  SuiteReport r{"uqsl2"};
  for (int N : cfg.Ns) {
    detail::guarded(r, detail::tagN("uqsl2", N), [&] {
      auto rd = make_root_data(N, cfg.tol);
      auto g = detail::rng(cfg, "uqsl2", N);
      std::uniform_int_distribution<int> ud(0, N - 1);
      std::map<std::string, double> worst;
      int dim_bad = 0;
      for (int i = 0; i < std::min(cfg.samples, 10); ++i) {
        cplx rr = detail::random_unit_scale(g), ss = detail::random_unit_scale(g), la = detail::random_unit_scale(g);
        auto rep = uqsl2_module(rd, ud(g), rr, ss, la);
        if (rep.subspace_dim != N) ++dim_bad;
        for (auto& [k, v] : rep.residuals) worst[k] = std::max(worst[k], v);
      }
      for (auto& [k, v] : worst) r.add(detail::tagN("uqsl2 " + k, N), v, 1e-9);
      r.add(detail::tagN("uqsl2 subspace dim N", N), dim_bad, 0.0);
    });
  }
  return r;
}

// ---- grouping ---------------------------------------------------------------------------

inline std::vector<std::string> suite_names() {
  return {"dilog", "groupoid", "cfalg", "homology", "all"};
}

inline SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  using F = SuiteReport (*)(const SuiteConfig&);
  std::map<std::string, std::vector<F>> groups{
      {"dilog", {pentagon_suite, inversion_suite, gauss_suite}},
      {"groupoid", {groupoid_suite, dehn_suite, frobenius_suite, shape_suite}},
      {"cfalg", {cfalg_suite}},
      {"homology", {homology_suite, decomposition_suite, reduced_suite, uqsl2_suite}},
  };
  SuiteReport out{name};
  if (name == "all") {
    for (auto g : {"dilog", "groupoid", "cfalg", "homology"})
      for (auto f : groups.at(g)) out.append(f(cfg));
    return out;
  }
  auto it = groups.find(name);
  if (it == groups.end()) throw std::invalid_argument("unknown suite " + name);
  for (auto f : it->second) out.append(f(cfg));
  return out;
}

}  // namespace cqt
