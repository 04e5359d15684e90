#pragma once

// Dense complex linear algebra at desk scale: vectors and operators between
// finite-dimensional Hilbert spaces, adjoints, spectral norms, Kronecker
// products, operator classification, and the contraction gap inequality
// |<x|y> - <Gx|Gy>|^2 <= (<x|x> - <Gx|Gx>)(<y|y> - <Gy|Gy>)
// that certifies every limit estimate downstream.
//
// Conventions:
//   * scalars are std::complex<double>; no NaN/Inf is admitted into any
//     stored structure (constructors throw NotFinite)
//   * matrices are stored row-major
//   * inner(x, y) is conjugate-linear in x and linear in y
//   * the spectral norm uses a full SVD up to dimension 64 and power
//     iteration on G'G above that (tolerance 1e-12, at most 1e4 iterations)

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "colim/errors.hpp"

namespace colim {

using Scalar = std::complex<double>;

inline bool is_finite(Scalar z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// ---------------------------------------------------------------------------
// FinVector
// ---------------------------------------------------------------------------

class FinVector {
 public:
  explicit FinVector(std::vector<Scalar> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw DimensionMismatch("FinVector: dimension must be positive");
    for (const Scalar& z : entries_)
      if (!is_finite(z)) throw NotFinite("FinVector: non-finite entry");
  }

  static FinVector zero(int dim) { return FinVector(std::vector<Scalar>(check_dim(dim), Scalar{0.0, 0.0})); }

  // k-th standard basis vector, 0-based.
  static FinVector basis(int dim, int k) {
    std::vector<Scalar> e(check_dim(dim), Scalar{0.0, 0.0});
    if (k < 0 || k >= dim) throw DimensionMismatch("FinVector::basis: index out of range");
    e[static_cast<std::size_t>(k)] = Scalar{1.0, 0.0};
    return FinVector(std::move(e));
  }

  int dim() const { return static_cast<int>(entries_.size()); }
  const Scalar& operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  const std::vector<Scalar>& entries() const { return entries_; }

 private:
  static int check_dim(int dim) {
    if (dim <= 0) throw DimensionMismatch("FinVector: dimension must be positive");
    return dim;
  }
  std::vector<Scalar> entries_;
};

// ---------------------------------------------------------------------------
// Operator
// ---------------------------------------------------------------------------

class Operator {
 public:
  Operator(int out_dim, int in_dim, std::vector<Scalar> row_major)
      : out_(out_dim), in_(in_dim), data_(std::move(row_major)) {
    if (out_ <= 0 || in_ <= 0) throw DimensionMismatch("Operator: dimensions must be positive");
    if (data_.size() != static_cast<std::size_t>(out_) * static_cast<std::size_t>(in_))
      throw DimensionMismatch("Operator: entry count does not match declared shape");
    for (const Scalar& z : data_)
      if (!is_finite(z)) throw NotFinite("Operator: non-finite entry");
  }

  static Operator identity(int dim) {
    Operator g = zero(dim, dim);
    for (int i = 0; i < dim; ++i) g.data_[static_cast<std::size_t>(i) * dim + i] = Scalar{1.0, 0.0};
    return g;
  }

  static Operator zero(int out_dim, int in_dim) {
    if (out_dim <= 0 || in_dim <= 0) throw DimensionMismatch("Operator: dimensions must be positive");
    return Operator(out_dim, in_dim,
                    std::vector<Scalar>(static_cast<std::size_t>(out_dim) * in_dim, Scalar{0.0, 0.0}));
  }

  static Operator diagonal(const std::vector<Scalar>& diag) {
    Operator g = zero(static_cast<int>(diag.size()), static_cast<int>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i) g.data_[i * diag.size() + i] = diag[i];
    return g;
  }

  // Rows-of-rows helper, mainly for tests and fixtures.
  static Operator from_rows(const std::vector<std::vector<Scalar>>& rows) {
    if (rows.empty() || rows.front().empty()) throw DimensionMismatch("Operator: empty rows");
    std::vector<Scalar> flat;
    flat.reserve(rows.size() * rows.front().size());
    for (const auto& r : rows) {
      if (r.size() != rows.front().size()) throw DimensionMismatch("Operator: ragged rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return Operator(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()), std::move(flat));
  }

  int out_dim() const { return out_; }
  int in_dim() const { return in_; }
  const Scalar& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * in_ + j];
  }
  const std::vector<Scalar>& entries() const { return data_; }

 private:
  int out_, in_;
  std::vector<Scalar> data_;
};

// ---------------------------------------------------------------------------
// Elementwise arithmetic
// ---------------------------------------------------------------------------

inline Scalar inner(const FinVector& x, const FinVector& y) {
  if (x.dim() != y.dim()) throw DimensionMismatch("inner: dimensions differ");
  Scalar s{0.0, 0.0};
  for (int i = 0; i < x.dim(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

inline double norm2(const FinVector& x) {
  double s = 0.0;
  for (int i = 0; i < x.dim(); ++i) s += std::norm(x[i]);
  return s;
}

inline double norm(const FinVector& x) { return std::sqrt(norm2(x)); }

inline FinVector operator*(Scalar a, const FinVector& x) {
  std::vector<Scalar> e(x.entries());
  for (Scalar& z : e) z *= a;
  return FinVector(std::move(e));
}

inline FinVector operator+(const FinVector& x, const FinVector& y) {
  if (x.dim() != y.dim()) throw DimensionMismatch("vector +: dimensions differ");
  std::vector<Scalar> e(x.entries());
  for (int i = 0; i < y.dim(); ++i) e[static_cast<std::size_t>(i)] += y[i];
  return FinVector(std::move(e));
}

inline FinVector operator-(const FinVector& x, const FinVector& y) {
  return x + (Scalar{-1.0, 0.0} * y);
}

inline FinVector operator*(const Operator& g, const FinVector& x) {
  if (g.in_dim() != x.dim()) throw DimensionMismatch("apply: operator/vector shapes differ");
  std::vector<Scalar> out(static_cast<std::size_t>(g.out_dim()), Scalar{0.0, 0.0});
  for (int i = 0; i < g.out_dim(); ++i) {
    Scalar s{0.0, 0.0};
    for (int j = 0; j < g.in_dim(); ++j) s += g(i, j) * x[j];
    out[static_cast<std::size_t>(i)] = s;
  }
  return FinVector(std::move(out));
}

inline Operator operator*(const Operator& a, const Operator& b) {
  if (a.in_dim() != b.out_dim()) throw DimensionMismatch("compose: operator shapes differ");
  std::vector<Scalar> out(static_cast<std::size_t>(a.out_dim()) * b.in_dim(), Scalar{0.0, 0.0});
  for (int i = 0; i < a.out_dim(); ++i)
    for (int k = 0; k < a.in_dim(); ++k) {
      const Scalar aik = a(i, k);
      if (aik == Scalar{0.0, 0.0}) continue;
      for (int j = 0; j < b.in_dim(); ++j)
        out[static_cast<std::size_t>(i) * b.in_dim() + j] += aik * b(k, j);
    }
  return Operator(a.out_dim(), b.in_dim(), std::move(out));
}

inline Operator operator*(Scalar a, const Operator& g) {
  std::vector<Scalar> e(g.entries());
  for (Scalar& z : e) z *= a;
  return Operator(g.out_dim(), g.in_dim(), std::move(e));
}

inline Operator operator*(const Operator& g, Scalar a) { return a * g; }

inline Operator operator+(const Operator& a, const Operator& b) {
  if (a.out_dim() != b.out_dim() || a.in_dim() != b.in_dim())
    throw DimensionMismatch("operator +: shapes differ");
  std::vector<Scalar> e(a.entries());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += b.entries()[i];
  return Operator(a.out_dim(), a.in_dim(), std::move(e));
}

inline Operator operator-(const Operator& a, const Operator& b) {
  return a + (Scalar{-1.0, 0.0} * b);
}

inline double max_abs(const Operator& a) {
  double m = 0.0;
  for (const Scalar& z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

inline double max_abs_diff(const Operator& a, const Operator& b) { return max_abs(a - b); }

inline double max_abs_diff(const FinVector& a, const FinVector& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("max_abs_diff: dimensions differ");
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline bool entries_equal(const Operator& a, const Operator& b, double tol = 0.0) {
  return a.out_dim() == b.out_dim() && a.in_dim() == b.in_dim() && max_abs_diff(a, b) <= tol;
}

// ---------------------------------------------------------------------------
// Adjoint, spectral norm, classification
// ---------------------------------------------------------------------------

inline Operator adjoint(const Operator& g) {
  std::vector<Scalar> out(static_cast<std::size_t>(g.in_dim()) * g.out_dim());
  for (int i = 0; i < g.in_dim(); ++i)
    for (int j = 0; j < g.out_dim(); ++j)
      out[static_cast<std::size_t>(i) * g.out_dim() + j] = std::conj(g(j, i));
  return Operator(g.in_dim(), g.out_dim(), std::move(out));
}

namespace detail {

inline Eigen::MatrixXcd to_eigen(const Operator& g) {
  Eigen::MatrixXcd m(g.out_dim(), g.in_dim());
  for (int i = 0; i < g.out_dim(); ++i)
    for (int j = 0; j < g.in_dim(); ++j) m(i, j) = g(i, j);
  return m;
}

inline Operator from_eigen(const Eigen::MatrixXcd& m) {
  std::vector<Scalar> e(static_cast<std::size_t>(m.rows()) * static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      e[static_cast<std::size_t>(i) * static_cast<std::size_t>(m.cols()) +
        static_cast<std::size_t>(j)] = m(i, j);
  return Operator(static_cast<int>(m.rows()), static_cast<int>(m.cols()), std::move(e));
}

// Largest singular value by power iteration on G'G with a fixed seeded start.
inline double power_iteration_norm(const Operator& g) {
  const int n = g.in_dim();
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Scalar> v(static_cast<std::size_t>(n));
  for (Scalar& z : v) z = Scalar{gauss(rng), gauss(rng)};
  FinVector x{std::move(v)};
  const Operator gh = adjoint(g);
  double prev = 0.0;
  for (int it = 0; it < 10000; ++it) {
    FinVector gx = g * x;
    double sigma2 = norm2(gx) / std::max(norm2(x), 1e-300);
    if (it > 0 && std::abs(sigma2 - prev) <= 1e-12 * std::max(1.0, sigma2))
      return std::sqrt(sigma2);
    prev = sigma2;
    FinVector next = gh * gx;
    double nn = norm(next);
    if (nn == 0.0) return 0.0;
    x = Scalar{1.0 / nn, 0.0} * next;
  }
  return std::sqrt(prev);
}

}  // namespace detail

inline double operator_norm(const Operator& g) {
  if (g.out_dim() == 1 && g.in_dim() == 1) return std::abs(g(0, 0));
  if (std::max(g.out_dim(), g.in_dim()) <= 64) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(detail::to_eigen(g));
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  }
  return detail::power_iteration_norm(g);
}

enum class MapCategory { isometry, contraction, bounded };

inline const char* to_string(MapCategory c) {
  switch (c) {
    case MapCategory::isometry: return "isometry";
    case MapCategory::contraction: return "contraction";
    default: return "bounded";
  }
}

struct OperatorClass {
  MapCategory tag;
  double norm;
};

// Isometry iff G'G = I entrywise within tol; else contraction iff the
// spectral norm is <= 1 + tol; else bounded.
inline OperatorClass classify(const Operator& g, double tol = 1e-9) {
  if (tol <= 0.0) throw InvalidStructure("classify: tolerance must be positive");
  const double nrm = operator_norm(g);
  const Operator gram = adjoint(g) * g;
  double dev = 0.0;
  for (int i = 0; i < gram.out_dim(); ++i)
    for (int j = 0; j < gram.in_dim(); ++j) {
      const Scalar want = (i == j) ? Scalar{1.0, 0.0} : Scalar{0.0, 0.0};
      dev = std::max(dev, std::abs(gram(i, j) - want));
    }
  if (dev <= tol) return {MapCategory::isometry, nrm};
  if (nrm <= 1.0 + tol) return {MapCategory::contraction, nrm};
  return {MapCategory::bounded, nrm};
}

inline bool satisfies(const OperatorClass& cls, MapCategory declared) {
  switch (declared) {
    case MapCategory::isometry: return cls.tag == MapCategory::isometry;
    case MapCategory::contraction: return cls.tag != MapCategory::bounded;
    default: return true;
  }
}

// ---------------------------------------------------------------------------
// Kronecker products
// ---------------------------------------------------------------------------

inline Operator kronecker(const Operator& a, const Operator& b) {
  const int ro = a.out_dim() * b.out_dim();
  const int ci = a.in_dim() * b.in_dim();
  std::vector<Scalar> out(static_cast<std::size_t>(ro) * ci, Scalar{0.0, 0.0});
  for (int i = 0; i < a.out_dim(); ++i)
    for (int j = 0; j < a.in_dim(); ++j) {
      const Scalar aij = a(i, j);
      if (aij == Scalar{0.0, 0.0}) continue;
      for (int k = 0; k < b.out_dim(); ++k)
        for (int l = 0; l < b.in_dim(); ++l)
          out[static_cast<std::size_t>(i * b.out_dim() + k) * ci + (j * b.in_dim() + l)] =
              aij * b(k, l);
    }
  return Operator(ro, ci, std::move(out));
}

inline FinVector kronecker(const FinVector& u, const FinVector& v) {
  std::vector<Scalar> out(static_cast<std::size_t>(u.dim()) * v.dim());
  for (int i = 0; i < u.dim(); ++i)
    for (int j = 0; j < v.dim(); ++j) out[static_cast<std::size_t>(i) * v.dim() + j] = u[i] * v[j];
  return FinVector(std::move(out));
}

// ---------------------------------------------------------------------------
// Gap inequality (contraction chains lean on this everywhere)
// ---------------------------------------------------------------------------

namespace detail {

// <x|x> - <Gx|Gx>, clamped: roundoff may push it a hair negative and the
// value feeds square roots downstream.
inline double gap_unchecked(const Operator& g, const FinVector& x) {
  const double d = norm2(x) - norm2(g * x);
  if (d >= 0.0) return d;
  if (d >= -1e-10) return 0.0;
  throw CategoryViolation("gap: <x|x> - <Gx|Gx> is negative beyond tolerance (" +
                          std::to_string(d) + "); G is not a contraction");
}

}  // namespace detail

inline double gap(const Operator& g, const FinVector& x, double tol = 1e-9) {
  const OperatorClass cls = classify(g, tol);
  if (cls.tag == MapCategory::bounded)
    throw CategoryViolation("gap: operator is not a contraction (norm " + std::to_string(cls.norm) + ")");
  return detail::gap_unchecked(g, x);
}

struct LemmaCheck {
  double lhs;  // |<x|y> - <Gx|Gy>|^2
  double rhs;  // gap(G,x) * gap(G,y)
  bool holds;
};

inline LemmaCheck lemma_check(const Operator& g, const FinVector& x, const FinVector& y,
                              double tol = 1e-9) {
  const OperatorClass cls = classify(g, tol);
  if (cls.tag == MapCategory::bounded)
    throw CategoryViolation("lemma_check: operator is not a contraction (norm " +
                            std::to_string(cls.norm) + ")");
  const FinVector gx = g * x;
  const FinVector gy = g * y;
  const double lhs = std::norm(inner(x, y) - inner(gx, gy));
  const double rhs = detail::gap_unchecked(g, x) * detail::gap_unchecked(g, y);
  return {lhs, rhs, lhs <= rhs + tol};
}

// ---------------------------------------------------------------------------
// Seeded randomness (deterministic; per-sample seeds derive from a root seed)
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  std::uint64_t s = root ^ (0x2545f4914f6cdd1dULL * (index + 1));
  return splitmix64(s);
}

inline FinVector random_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Scalar> e(static_cast<std::size_t>(dim));
  for (Scalar& z : e) z = Scalar{gauss(rng), gauss(rng)};
  return FinVector(std::move(e));
}

// Gaussian matrix with singular values clipped to [0, 1]; deterministic in
// the seed, always classifies as a contraction.
inline Operator random_contraction(int out_dim, int in_dim, std::uint64_t seed) {
  if (out_dim <= 0 || in_dim <= 0)
    throw DimensionMismatch("random_contraction: dimensions must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd m(out_dim, in_dim);
  for (int i = 0; i < out_dim; ++i)
    for (int j = 0; j < in_dim; ++j) m(i, j) = Scalar{gauss(rng), gauss(rng)};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::min(s(i), 1.0);
  Eigen::MatrixXcd clipped = svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
  return detail::from_eigen(clipped);
}

}  // namespace colim
