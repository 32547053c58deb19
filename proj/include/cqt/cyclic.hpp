#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cqt {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

enum class Errc {
  EvenN,
  UnknownSite,
  NotCyclic,
  SectionPole,
  DegenerateParameter,
  UnknownSurface,
  DotPositionMismatch,
  NotAdjacent,
  BoundaryFlip,
  SelfFolded,
  UnknownMapClass,
  FrozenFlip,
  NotInvariant,
  InvalidPath,
  NonCommutingGenerators,
  EmptyCharacter,
  SubspaceMismatch,
  ParseError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::EvenN: return "EvenN";
    case Errc::UnknownSite: return "UnknownSite";
    case Errc::NotCyclic: return "NotCyclic";
    case Errc::SectionPole: return "SectionPole";
    case Errc::DegenerateParameter: return "DegenerateParameter";
    case Errc::UnknownSurface: return "UnknownSurface";
    case Errc::DotPositionMismatch: return "DotPositionMismatch";
    case Errc::NotAdjacent: return "NotAdjacent";
    case Errc::BoundaryFlip: return "BoundaryFlip";
    case Errc::SelfFolded: return "SelfFolded";
    case Errc::UnknownMapClass: return "UnknownMapClass";
    case Errc::FrozenFlip: return "FrozenFlip";
    case Errc::NotInvariant: return "NotInvariant";
    case Errc::InvalidPath: return "InvalidPath";
    case Errc::NonCommutingGenerators: return "NonCommutingGenerators";
    case Errc::EmptyCharacter: return "EmptyCharacter";
    case Errc::SubspaceMismatch: return "SubspaceMismatch";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code(c) {}
  Errc code;
};

inline int mod(long long a, int n) {
  long long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

// Arithmetic context: q2 = exp(2 pi i s / N) and q = q2^M with M = (N+1)/2.
struct RootData {
  int N = 1;
  int s = 1;
  int M = 1;
  double tol = 1e-9;
  cplx q2{1.0, 0.0};
  cplx q{1.0, 0.0};
  std::vector<cplx> q2pow;

  cplx q2p(long long e) const { return q2pow[mod(e, N)]; }
  // q^e = q2^{M e}
  cplx qp(long long e) const { return q2pow[mod(static_cast<long long>(M) * mod(e, N), N)]; }
  cplx gamma(long long k) const {
    long long r = mod(k, N);
    return qp(r * r);
  }
};

inline RootData make_root_data(int N, double tol = 1e-9, int s = 1) {
  if (N < 1) throw Error(Errc::EvenN, "N must be a positive odd integer");
  if (N % 2 == 0) throw Error(Errc::EvenN, "N = " + std::to_string(N) + " is even");
  if (std::gcd(mod(s, N), N) != 1 && N > 1)
    throw Error(Errc::EvenN, "root index must be coprime to N");
  RootData rd;
  rd.N = N;
  rd.s = mod(s, N);
  rd.M = (N + 1) / 2;
  rd.tol = tol;
  rd.q2pow.resize(N);
  for (int j = 0; j < N; ++j) {
    long long e = static_cast<long long>(j) * rd.s % N;
    rd.q2pow[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / N);
  }
  rd.q2 = rd.q2pow[1 % N];
  rd.q = rd.qp(1);
  return rd;
}

inline cplx gamma_scalar(const RootData& rd, long long k) { return rd.gamma(k); }

// i^x for real x
inline cplx ipow(double x) { return std::polar(1.0, std::numbers::pi * x / 2.0); }

inline cplx gauss_sum(const RootData& rd, int sign, int power) {
  cplx s = 0.0;
  for (int k = 0; k < rd.N; ++k) {
    cplx g = rd.gamma(k);
    if (sign < 0) g = std::conj(g);
    s += power == 2 ? g * g : g;
  }
  return s;
}

inline bool close(cplx a, cplx b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

template <class A, class B>
double rel_err(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  Mat x = a, y = b;
  double den = std::max({1.0, x.norm(), y.norm()});
  return (x - y).norm() / den;
}

struct StateSpace {
  std::vector<int> sites;
  int N = 1;

  StateSpace() = default;
  StateSpace(std::vector<int> s, int n) : sites(std::move(s)), N(n) {}

  int size() const { return static_cast<int>(sites.size()); }
  long long dim() const {
    long long d = 1;
    for (std::size_t i = 0; i < sites.size(); ++i) d *= N;
    return d;
  }
  int pos(int site) const {
    auto it = std::find(sites.begin(), sites.end(), site);
    if (it == sites.end()) throw Error(Errc::UnknownSite, "site " + std::to_string(site));
    return static_cast<int>(it - sites.begin());
  }
  long long stride(int p) const {
    long long s = 1;
    for (int i = size() - 1; i > p; --i) s *= N;
    return s;
  }
  std::vector<int> digits(long long idx) const {
    std::vector<int> d(sites.size());
    for (int i = size() - 1; i >= 0; --i) {
      d[i] = static_cast<int>(idx % N);
      idx /= N;
    }
    return d;
  }
  long long index(const std::vector<int>& d) const {
    long long idx = 0;
    for (int i = 0; i < size(); ++i) idx = idx * N + mod(d[i], N);
    return idx;
  }
  bool operator==(const StateSpace& o) const { return sites == o.sites && N == o.N; }
};

struct CyclicOperator {
  StateSpace space;
  Mat m;

  CyclicOperator() = default;
  CyclicOperator(StateSpace s, Mat mat) : space(std::move(s)), m(std::move(mat)) {}

  static CyclicOperator identity(const StateSpace& s) {
    return {s, Mat::Identity(s.dim(), s.dim())};
  }
  CyclicOperator operator*(const CyclicOperator& o) const { return {space, m * o.m}; }
  CyclicOperator operator+(const CyclicOperator& o) const { return {space, m + o.m}; }
  CyclicOperator operator-(const CyclicOperator& o) const { return {space, m - o.m}; }
  CyclicOperator operator*(cplx c) const { return {space, m * c}; }
  CyclicOperator inverse() const { return {space, m.partialPivLu().inverse()}; }
  CyclicOperator adjoint() const { return {space, m.adjoint()}; }
  CyclicOperator pow(int e) const {
    Mat r = Mat::Identity(m.rows(), m.cols());
    Mat b = e >= 0 ? m : Mat(m.partialPivLu().inverse());
    for (int k = 0, n = std::abs(e); k < n; ++k) r = r * b;
    return {space, r};
  }
  // Ad_this(Y) = this Y this^{-1}
  CyclicOperator conj(const CyclicOperator& y) const { return {space, m * y.m * m.partialPivLu().inverse()}; }
};

struct StateVector {
  StateSpace space;
  Vec v;
};

// Weyl monomials as exponent vectors: site -> (a, b) for q^{-ab} U^a P^b.
struct Weyl {
  std::map<int, std::pair<int, int>> e;

  Weyl() = default;
  static Weyl U(int site, int a = 1) { Weyl w; w.e[site] = {a, 0}; return w; }
  static Weyl P(int site, int b = 1) { Weyl w; w.e[site] = {0, b}; return w; }
  static Weyl UP(int site, int a, int b) { Weyl w; w.e[site] = {a, b}; return w; }

  Weyl operator+(const Weyl& o) const {
    Weyl r = *this;
    for (auto& [s, ab] : o.e) {
      auto& t = r.e[s];
      t.first += ab.first;
      t.second += ab.second;
    }
    r.prune();
    return r;
  }
  Weyl operator-() const {
    Weyl r = *this;
    for (auto& [s, ab] : r.e) ab = {-ab.first, -ab.second};
    return r;
  }
  Weyl operator-(const Weyl& o) const { return *this + (-o); }
  Weyl scaled(int c) const {
    Weyl r = *this;
    for (auto& [s, ab] : r.e) ab = {ab.first * c, ab.second * c};
    r.prune();
    return r;
  }
  void prune() {
    for (auto it = e.begin(); it != e.end();)
      it = (it->second.first == 0 && it->second.second == 0) ? e.erase(it) : std::next(it);
  }
  bool operator==(const Weyl& o) const {
    Weyl a = *this, b = o;
    a.prune();
    b.prune();
    return a.e == b.e;
  }
};

// W(x) W(y) = q^{omega(x,y)} W(x+y)
inline long long omega(const Weyl& x, const Weyl& y) {
  long long s = 0;
  for (auto& [site, ab] : x.e) {
    auto it = y.e.find(site);
    if (it == y.e.end()) continue;
    s += static_cast<long long>(ab.first) * it->second.second -
         static_cast<long long>(ab.second) * it->second.first;
  }
  return s;
}

// Exponent vector reduced mod N, used to compare monomials as operators.
inline Weyl reduce(const Weyl& x, int N) {
  Weyl r;
  for (auto& [s, ab] : x.e) r.e[s] = {mod(ab.first, N), mod(ab.second, N)};
  r.prune();
  return r;
}

inline CyclicOperator weyl_operator(const RootData& rd, const StateSpace& sp, const Weyl& w) {
  long long d = sp.dim();
  std::vector<std::pair<int, std::pair<int, int>>> f;
  for (auto& [s, ab] : w.e) f.push_back({sp.pos(s), ab});
  Mat m = Mat::Zero(d, d);
  for (long long i = 0; i < d; ++i) {
    auto k = sp.digits(i);
    long long qe = 0;
    for (auto& [p, ab] : f) {
      qe += 2LL * ab.first * k[p] + static_cast<long long>(ab.first) * ab.second;
      k[p] = mod(k[p] + ab.second, rd.N);
    }
    m(sp.index(k), i) = rd.qp(qe);
  }
  return {sp, m};
}

enum class Kind { U, P };

inline CyclicOperator site_operator(const RootData& rd, const StateSpace& sp, int site, Kind kind,
                                    int exponent) {
  int p = sp.pos(site);
  long long d = sp.dim();
  Mat m = Mat::Zero(d, d);
  for (long long i = 0; i < d; ++i) {
    auto k = sp.digits(i);
    if (kind == Kind::U) {
      m(i, i) = rd.q2p(static_cast<long long>(exponent) * k[p]);
    } else {
      k[p] = mod(k[p] + exponent, rd.N);
      m(sp.index(k), i) = 1.0;
    }
  }
  return {sp, m};
}

struct Factor {
  int site;
  Kind kind;
  int exponent;
};

// q^{-sum_{i<j} eps_ij} X_1 ... X_n with X_i X_j = q^{2 eps_ij} X_j X_i
inline CyclicOperator weyl_monomial(const RootData& rd, const StateSpace& sp,
                                    const std::vector<Factor>& factors) {
  CyclicOperator r = CyclicOperator::identity(sp);
  long long eps = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    r = r * site_operator(rd, sp, factors[i].site, factors[i].kind, factors[i].exponent);
    for (std::size_t j = i + 1; j < factors.size(); ++j) {
      const Factor& a = factors[i];
      const Factor& b = factors[j];
      if (a.site != b.site || a.kind == b.kind) continue;
      long long ab = static_cast<long long>(a.exponent) * b.exponent;
      eps += a.kind == Kind::U ? ab : -ab;
    }
  }
  return r * rd.qp(-eps);
}

enum class BasisKind { Position, Momentum, Slant };

struct BasisSpec {
  BasisKind kind;
  int index;
};

inline Vec single_site_basis(const RootData& rd, BasisKind kind, int k) {
  Vec v = Vec::Zero(rd.N);
  for (int m = 0; m < rd.N; ++m) {
    switch (kind) {
      case BasisKind::Position: v(m) = m == mod(k, rd.N) ? 1.0 : 0.0; break;
      case BasisKind::Momentum: v(m) = rd.q2p(-static_cast<long long>(m) * k); break;
      case BasisKind::Slant: v(m) = std::conj(rd.gamma(m)) * rd.q2p(-static_cast<long long>(k) * m); break;
    }
  }
  return v;
}

inline Vec kron(const Vec& a, const Vec& b) {
  Vec r(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) r.segment(i * b.size(), b.size()) = a(i) * b;
  return r;
}

inline StateVector basis_vector(const RootData& rd, const StateSpace& sp,
                                const std::vector<BasisSpec>& spec) {
  Vec v = Vec::Ones(1);
  for (int i = 0; i < sp.size(); ++i) v = kron(v, single_site_basis(rd, spec.at(i).kind, spec.at(i).index));
  return {sp, v};
}

// One nonzero entry per column: x e_i = val[i] e_{row[i]}.
struct MonomialForm {
  std::vector<Eigen::Index> row;
  std::vector<cplx> val;
};

inline std::optional<MonomialForm> monomial_form(const Mat& m) {
  MonomialForm f;
  f.row.resize(m.cols());
  f.val.resize(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    int nz = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) {
        if (++nz > 1) return std::nullopt;
        f.row[j] = i;
        f.val[j] = m(i, j);
      }
    if (nz == 0) return std::nullopt;
  }
  return f;
}

// Powers x^0..x^N of a monomial matrix, as dense matrices (the last is used for the defect).
inline std::vector<Mat> monomial_powers(const MonomialForm& f, int n) {
  auto d = static_cast<Eigen::Index>(f.row.size());
  std::vector<Eigen::Index> at(d);
  std::vector<cplx> v(d, 1.0);
  for (Eigen::Index i = 0; i < d; ++i) at[i] = i;
  std::vector<Mat> pw;
  for (int j = 0; j <= n; ++j) {
    Mat p = Mat::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) p(at[i], i) = v[i];
    pw.push_back(std::move(p));
    for (Eigen::Index i = 0; i < d; ++i) {
      v[i] *= f.val[at[i]];
      at[i] = f.row[at[i]];
    }
  }
  return pw;
}

inline double cyclic_defect(const RootData& rd, const CyclicOperator& x) {
  Mat id = Mat::Identity(x.m.rows(), x.m.cols());
  if (auto f = monomial_form(x.m)) return (monomial_powers(*f, rd.N).back() - id).norm();
  Mat p = id;
  for (int j = 0; j < rd.N; ++j) p = p * x.m;
  return (p - id).norm();
}

inline std::vector<Mat> cyclic_powers(const RootData& rd, const CyclicOperator& x) {
  double d = static_cast<double>(x.m.rows());
  Mat id = Mat::Identity(x.m.rows(), x.m.cols());
  if (auto f = monomial_form(x.m)) {
    auto pw = monomial_powers(*f, rd.N);
    if ((pw.back() - id).norm() > std::max(rd.tol, 1e-9) * d)
      throw Error(Errc::NotCyclic, "operator does not satisfy X^N = Id");
    pw.pop_back();
    return pw;
  }
  if (cyclic_defect(rd, x) > std::max(rd.tol, 1e-9) * d)
    throw Error(Errc::NotCyclic, "operator does not satisfy X^N = Id");
  std::vector<Mat> pw(rd.N);
  pw[0] = id;
  for (int j = 1; j < rd.N; ++j) pw[j] = pw[j - 1] * x.m;
  return pw;
}

inline CyclicOperator combine_powers(const RootData& rd, const CyclicOperator& x,
                                     const std::vector<Mat>& pw, const std::vector<cplx>& c) {
  Mat r = Mat::Zero(x.m.rows(), x.m.cols());
  for (int j = 0; j < rd.N; ++j)
    if (c[j] != 0.0) r += c[j] * pw[j];
  return {x.space, r};
}

inline CyclicOperator spectral_projector(const RootData& rd, const CyclicOperator& x, int k) {
  auto pw = cyclic_powers(rd, x);
  std::vector<cplx> c(rd.N);
  for (int j = 0; j < rd.N; ++j) c[j] = rd.q2p(-static_cast<long long>(k) * j) / static_cast<double>(rd.N);
  return combine_powers(rd, x, pw, c);
}

// f[k] is the value at the eigenvalue q^{2k}.
inline CyclicOperator apply_cyclic_function(const RootData& rd, const CyclicOperator& x,
                                            const std::vector<cplx>& f) {
  auto pw = cyclic_powers(rd, x);
  std::vector<cplx> c(rd.N, 0.0);
  for (int j = 0; j < rd.N; ++j) {
    for (int k = 0; k < rd.N; ++k) c[j] += f[k] * rd.q2p(-static_cast<long long>(k) * j);
    c[j] /= static_cast<double>(rd.N);
  }
  return combine_powers(rd, x, pw, c);
}

inline CyclicOperator apply_cyclic_function(const RootData& rd, const CyclicOperator& x,
                                            const std::function<cplx(int)>& f) {
  std::vector<cplx> v(rd.N);
  for (int k = 0; k < rd.N; ++k) v[k] = f(k);
  return apply_cyclic_function(rd, x, v);
}

inline CyclicOperator sqrt_operator(const RootData& rd, const CyclicOperator& x) {
  auto pw = cyclic_powers(rd, x);
  return {x.space, pw[mod(rd.M, rd.N)]};
}

// (1/N) sum_{i,j} q^{-+ij} X^{(i+j)/2}; half uses q^{-+2ij}.
inline CyclicOperator gamma_operator(const RootData& rd, const CyclicOperator& x, int sign, bool half) {
  auto pw = cyclic_powers(rd, x);
  std::vector<cplx> c(rd.N, 0.0);
  int f = half ? 2 : 1;
  for (int i = 0; i < rd.N; ++i)
    for (int j = 0; j < rd.N; ++j)
      c[mod(static_cast<long long>(rd.M) * (i + j), rd.N)] +=
          rd.qp(-static_cast<long long>(sign) * f * i * j);
  for (auto& z : c) z /= static_cast<double>(rd.N);
  return combine_powers(rd, x, pw, c);
}

// perm[i] is the position that tensor factor i is sent to.
inline CyclicOperator permutation_operator(const StateSpace& sp, const std::vector<int>& perm) {
  long long d = sp.dim();
  Mat m = Mat::Zero(d, d);
  for (long long i = 0; i < d; ++i) {
    auto k = sp.digits(i);
    std::vector<int> t(k.size());
    for (std::size_t a = 0; a < k.size(); ++a) t[perm.at(a)] = k[a];
    m(sp.index(t), i) = 1.0;
  }
  return {sp, m};
}

// Transposition of two sites.
inline CyclicOperator swap_operator(const StateSpace& sp, int v, int w) {
  std::vector<int> perm(sp.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[sp.pos(v)], perm[sp.pos(w)]);
  return permutation_operator(sp, perm);
}

// Diagonal operator with entries g(k_site).
inline CyclicOperator diagonal_site(const StateSpace& sp, int site, const std::function<cplx(int)>& g) {
  int p = sp.pos(site);
  long long d = sp.dim();
  Mat m = Mat::Zero(d, d);
  for (long long i = 0; i < d; ++i) m(i, i) = g(sp.digits(i)[p]);
  return {sp, m};
}

}  // namespace cqt
