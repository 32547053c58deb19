#pragma once

#include "cqt/cyclic.hpp"

#include <random>

namespace cqt {

struct FermatPoint {
  cplx pp{0.0, 0.0};
  cplx pm{1.0, 0.0};

  bool frozen() const { return pp == cplx(0.0) && pm == cplx(1.0); }
  cplx ratio() const { return pp / pm; }
};

inline double fermat_residual(const RootData& rd, const FermatPoint& p) {
  return std::abs(std::pow(p.pp, rd.N) + std::pow(p.pm, rd.N) - 1.0);
}

inline constexpr double kDegenerate = 1e-12;

inline FermatPoint fermat_from_ratio(const RootData& rd, cplx y) {
  cplx w = 1.0 + std::pow(y, rd.N);
  if (std::abs(w) < kDegenerate) throw Error(Errc::SectionPole, "1 + y^N vanishes");
  FermatPoint p;
  p.pm = std::exp(-std::log(w) / static_cast<double>(rd.N));
  p.pp = y * p.pm;
  if (y == cplx(0.0)) p = FermatPoint{};
  return p;
}

inline FermatPoint fermat_inverse(const FermatPoint& p) { return {p.pm, p.pp}; }

// Multiply a Fermat point by fiber elements: (p+, p-) -> (q2^a p+, q2^b p-)
inline FermatPoint fiber_shift(const RootData& rd, const FermatPoint& p, int a, int b) {
  return {rd.q2p(a) * p.pp, rd.q2p(b) * p.pm};
}

inline cplx checked_factor(cplx z) {
  if (std::abs(z) < kDegenerate) throw Error(Errc::DegenerateParameter, "vanishing factor");
  return z;
}

inline cplx w_function(const RootData& rd, const FermatPoint& p, long long k) {
  int kk = mod(k, rd.N);
  cplx r = 1.0;
  for (int j = 1; j <= kk; ++j) r *= checked_factor(p.pm + rd.qp(2LL * j - 1) * p.pp);
  return r;
}

inline cplx psi_at_one(const RootData& rd, const FermatPoint& p) {
  cplx lg = 0.0;
  for (int j = 0; j < rd.N; ++j) {
    cplx z = checked_factor(p.pm + rd.qp(2LL * j + 1) * p.pp);
    if (z.real() < 0 && std::abs(z.imag()) <= kDegenerate * std::abs(z))
      throw Error(Errc::DegenerateParameter, "factor on the branch cut");
    lg += static_cast<double>(j) / rd.N * std::log(z);
  }
  return std::exp(lg);
}

// Psi_p(q^{2k}) for k = 0..N-1
inline std::vector<cplx> psi_values(const RootData& rd, const FermatPoint& p) {
  std::vector<cplx> v(rd.N);
  cplx base = psi_at_one(rd, p);
  cplx w = 1.0;
  for (int k = 0; k < rd.N; ++k) {
    v[k] = base * w;
    w *= checked_factor(p.pm + rd.qp(2LL * (k + 1) - 1) * p.pp);
  }
  return v;
}

inline CyclicOperator psi_operator(const RootData& rd, const FermatPoint& p, const CyclicOperator& x) {
  return apply_cyclic_function(rd, x, psi_values(rd, p));
}

inline cplx zeta_inv(const RootData& rd) {
  double N = rd.N;
  return std::polar(1.0, std::numbers::pi / 6.0 * (N - 1.0 / N));
}

struct PentagonParams {
  FermatPoint p, r, p_prime, r_prime, p_dprime;
};

inline PentagonParams solve_pentagon_params(const RootData& rd, const FermatPoint& p, const FermatPoint& r) {
  PentagonParams s;
  s.p = p;
  s.r = r;
  if (std::abs(p.pm) < kDegenerate || std::abs(r.pm) < kDegenerate)
    throw Error(Errc::DegenerateParameter, "vanishing p- or r-");
  s.p_prime = fermat_from_ratio(rd, p.pp / p.pm * r.pp);
  s.r_prime.pm = r.pm * s.p_prime.pm;
  s.r_prime.pp = (r.pp / r.pm) / p.pm * s.r_prime.pm;
  s.p_dprime.pp = p.pp * r.pm;
  s.p_dprime.pm = p.pm / checked_factor(s.p_prime.pm);
  return s;
}

// Residuals of the six parameter relations.
inline std::vector<double> pentagon_parameter_residuals(const PentagonParams& s) {
  const auto &p = s.p, &r = s.r, &pp = s.p_prime, &rp = s.r_prime, &pd = s.p_dprime;
  return {std::abs(p.pm - pp.pm * pd.pm),        std::abs(p.pp * rp.pm - pp.pm * pd.pp),
          std::abs(p.pp * rp.pp - pp.pp),        std::abs(rp.pm - r.pm * pp.pm),
          std::abs(rp.pp * pd.pm - r.pp),        std::abs(rp.pp * pd.pp - r.pm * pp.pp)};
}

// Residuals of the five ratio relations, in cross-multiplied form.
inline std::vector<double> pentagon_coeff_residuals(const PentagonParams& s) {
  const auto &p = s.p, &r = s.r, &pp = s.p_prime, &rp = s.r_prime, &pd = s.p_dprime;
  return {std::abs(rp.pp * r.pm * p.pm - r.pp * rp.pm),
          std::abs(pd.pm * p.pp * rp.pm - p.pm * pd.pp),
          std::abs(pp.pm * rp.pp * pd.pp - rp.pm * pp.pp),
          std::abs(pd.pp * r.pp - r.pm * pp.pp * pd.pm),
          std::abs(pp.pp * p.pm - p.pp * r.pp * pp.pm)};
}

inline bool psi_defined(const RootData& rd, const FermatPoint& p) {
  try {
    psi_values(rd, p);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// Ratio with log-magnitude uniform in [-1,1] and uniform phase, sectioned.
inline FermatPoint random_fermat(const RootData& rd, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> mag(-1.0, 1.0), ph(0.0, 2.0 * std::numbers::pi);
  for (;;) {
    cplx y = std::polar(std::exp(mag(gen)), ph(gen));
    try {
      FermatPoint p = fermat_from_ratio(rd, y);
      if (psi_defined(rd, p) && psi_defined(rd, fermat_inverse(p))) return p;
    } catch (const Error&) {
    }
  }
}

// Radius below which the principal branch of Psi reproduces the inversion constant.
inline double branch_safe_radius(const RootData& rd) { return 0.5 * std::sin(std::numbers::pi / rd.N); }

inline FermatPoint random_fermat_branch_safe(const RootData& rd, std::mt19937_64& gen) {
  double r = branch_safe_radius(rd);
  std::uniform_real_distribution<double> mag(std::log(r) - 2.0, std::log(r)), ph(0.0, 2.0 * std::numbers::pi);
  for (;;) {
    cplx y = std::polar(std::exp(mag(gen)), ph(gen));
    try {
      FermatPoint p = fermat_from_ratio(rd, y);
      if (psi_defined(rd, p) && psi_defined(rd, fermat_inverse(p))) return p;
    } catch (const Error&) {
    }
  }
}

}  // namespace cqt
