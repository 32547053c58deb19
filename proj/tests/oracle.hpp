#pragma once

// Reference implementations for the tests. Nothing here calls into cqt: roots of unity,
// Kronecker products, functional calculus and Fourier sums are redone
// from scratch so that library results can be compared with an independent computation.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline long long md(long long a, long long n) { return ((a % n) + n) % n; }

struct Roots {
  int N, M;
  explicit Roots(int n) : N(n), M((n + 1) / 2) {}
  // q^2 = e^{2 pi i / N}, q = (q^2)^M
  cplx q2(long long k) const { return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(md(k, N)) / N); }
  cplx q(long long k) const { return q2(md(static_cast<long long>(M) * md(k, N), N)); }
  cplx gamma(long long k) const { return q(md(k, N) * md(k, N)); }
};

inline Mat U(const Roots& r) {
  Mat m = Mat::Zero(r.N, r.N);
  for (int k = 0; k < r.N; ++k) m(k, k) = r.q2(k);
  return m;
}

inline Mat P(const Roots& r) {
  Mat m = Mat::Zero(r.N, r.N);
  for (int k = 0; k < r.N; ++k) m((k + 1) % r.N, k) = 1.0;
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

// x acting on factor `pos` of `n` factors, the first factor being the most significant.
inline Mat on_site(const Roots& r, int n, int pos, const Mat& x) {
  Mat out = Mat::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, i == pos ? x : Mat(Mat::Identity(r.N, r.N)));
  return out;
}

inline Mat mpow(const Mat& x, int e) {
  Mat b = e >= 0 ? x : Mat(x.inverse());
  Mat out = Mat::Identity(x.rows(), x.cols());
  for (int i = 0; i < std::abs(e); ++i) out = out * b;
  return out;
}

// q^{-ab} U^a P^b on a single factor
inline Mat weyl(const Roots& r, int a, int b) { return r.q(-static_cast<long long>(a) * b) * mpow(U(r), a) * mpow(P(r), b); }

inline double rel(const Mat& a, const Mat& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

// Principal completion (p+, p-) of a ratio y, with (p-)^N = 1/(1+y^N).
inline std::pair<cplx, cplx> fermat(int N, cplx y) {
  cplx pm = std::pow(1.0 / (1.0 + std::pow(y, N)), 1.0 / N);
  return {y * pm, pm};
}

// Psi_p(q^{2k}) straight from the product formula.
inline cplx psi(const Roots& r, cplx pp, cplx pm, int k) {
  cplx lg = 0.0;
  for (int j = 0; j < r.N; ++j) lg += static_cast<double>(j) / r.N * std::log(pm + r.q(2 * j + 1) * pp);
  cplx v = std::exp(lg);
  for (int j = 1; j <= md(k, r.N); ++j) v *= pm + r.q(2 * j - 1) * pp;
  return v;
}

// f(X) for X with X^N = 1, as a sum over the Fourier projectors (1/N) sum_j q^{-2kj} X^j;
// f is indexed by the exponent of the eigenvalue q^{2k}.
template <class F>
inline Mat function_of(const Roots& r, const Mat& x, F f) {
  std::vector<Mat> pw{Mat::Identity(x.rows(), x.cols())};
  for (int j = 1; j < r.N; ++j) pw.push_back(pw.back() * x);
  Mat out = Mat::Zero(x.rows(), x.cols());
  for (int k = 0; k < r.N; ++k) {
    Mat proj = Mat::Zero(x.rows(), x.cols());
    for (int j = 0; j < r.N; ++j) proj += r.q2(-static_cast<long long>(k) * j) * pw[j];
    out += f(k) * proj / static_cast<double>(r.N);
  }
  return out;
}

inline Mat psi_of(const Roots& r, cplx pp, cplx pm, const Mat& x) {
  return function_of(r, x, [&](int k) { return psi(r, pp, pm, k); });
}

// S on two factors (v, w): sum over k of P_v^{-k} times the projector onto U_w = q^{2k}.
inline Mat S(const Roots& r) {
  int N = r.N;
  Mat out = Mat::Zero(N * N, N * N);
  Mat uw = on_site(r, 2, 1, U(r));
  for (int k = 0; k < N; ++k) {
    Mat proj = Mat::Zero(N * N, N * N);
    for (int j = 0; j < N; ++j) proj += r.q2(-static_cast<long long>(k) * j) * mpow(uw, j);
    out += on_site(r, 2, 0, mpow(P(r), -k)) * proj / static_cast<double>(N);
  }
  return out;
}

// A from its matrix coefficients <n|A|m> = zeta_A gamma(n)^{-1} q^{-2mn}.
inline Mat A(const Roots& r) {
  cplx z = std::pow(static_cast<double>(r.N), -0.5) * std::polar(1.0, std::numbers::pi * (1.0 - r.N) / 12.0);
  Mat a(r.N, r.N);
  for (int n = 0; n < r.N; ++n)
    for (int m = 0; m < r.N; ++m) a(n, m) = z * std::conj(r.gamma(n)) * r.q2(-static_cast<long long>(m) * n);
  return a;
}

// Gauss sum of gamma^{sign * power}.
inline cplx gauss(const Roots& r, int sign, int power) {
  cplx s = 0.0;
  for (int k = 0; k < r.N; ++k) s += std::pow(sign > 0 ? r.gamma(k) : std::conj(r.gamma(k)), power);
  return s;
}

}  // namespace oracle
