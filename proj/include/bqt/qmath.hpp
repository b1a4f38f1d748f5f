#pragma once

// Dense complex linear algebra for one-, two- and three-qubit operators.
//
// Matrices carry their dimension in the type, so mixing a 2x2 and a 4x4
// where the same size is required fails to compile rather than at run time.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "bqt/errors.hpp"
#include "bqt/tolerances.hpp"

namespace bqt {

using cplx = std::complex<double>;

template <std::size_t N>
class Matrix {
 public:
  static constexpr std::size_t dim = N;

  Matrix() = default;

  /// Row-major entries; missing trailing entries are zero.
  Matrix(std::initializer_list<cplx> entries) {
    std::copy_n(entries.begin(), std::min(entries.size(), N * N), a_.begin());
  }

  static Matrix identity() {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::initializer_list<cplx> d) {
    Matrix m;
    std::size_t i = 0;
    for (auto v : d) {
      if (i == N) break;
      m(i, i) = v;
      ++i;
    }
    return m;
  }

  cplx& operator()(std::size_t r, std::size_t c) { return a_[r * N + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return a_[r * N + c]; }

  std::span<const cplx, N * N> entries() const { return a_; }

  Matrix adjoint() const {
    Matrix m;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  /// max_ij |m_ij - conj(m_ji)|
  double hermitian_defect() const {
    double d = 0.0;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = r; c < N; ++c)
        d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return d;
  }

  Matrix hermitian_part() const { return (*this + adjoint()) * 0.5; }

  double max_abs() const {
    double d = 0.0;
    for (const auto& v : a_) d = std::max(d, std::abs(v));
    return d;
  }

  double frobenius() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) a_[i] += o.a_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) a_[i] -= o.a_[i];
    return *this;
  }
  Matrix& operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
  friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    Matrix m;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t k = 0; k < N; ++k) {
        const cplx xk = x(r, k);
        if (xk == 0.0) continue;
        for (std::size_t c = 0; c < N; ++c) m(r, c) += xk * y(k, c);
      }
    return m;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::array<cplx, N * N> a_{};
};

template <std::size_t N>
double max_abs_diff(const Matrix<N>& a, const Matrix<N>& b) {
  return (a - b).max_abs();
}

/// Kronecker product.
template <std::size_t A, std::size_t B>
Matrix<A * B> tensor(const Matrix<A>& a, const Matrix<B>& b) {
  Matrix<A * B> m;
  for (std::size_t r1 = 0; r1 < A; ++r1)
    for (std::size_t c1 = 0; c1 < A; ++c1) {
      const cplx s = a(r1, c1);
      if (s == 0.0) continue;
      for (std::size_t r2 = 0; r2 < B; ++r2)
        for (std::size_t c2 = 0; c2 < B; ++c2) m(r1 * B + r2, c1 * B + c2) = s * b(r2, c2);
    }
  return m;
}

using Matrix2 = Matrix<2>;
using Matrix4 = Matrix<4>;
using Matrix8 = Matrix<8>;

namespace pauli {
inline Matrix2 id() { return Matrix2::identity(); }
inline Matrix2 x() { return {0.0, 1.0, 1.0, 0.0}; }
inline Matrix2 y() { return {0.0, cplx(0, -1), cplx(0, 1), 0.0}; }
inline Matrix2 z() { return {1.0, 0.0, 0.0, -1.0}; }
}  // namespace pauli

template <std::size_t N>
using Ket = std::array<cplx, N>;

template <std::size_t N>
Matrix<N> projector(const Ket<N>& k) {
  Matrix<N> m;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) m(r, c) = k[r] * std::conj(k[c]);
  return m;
}

// ---------------------------------------------------------------------------
// Hermitian eigenvalues

/// Eigenvalues of a Hermitian matrix in ascending order, by cyclic complex
/// Jacobi rotations. Inputs within tol::hermitize of Hermitian are symmetrized
/// first; anything further off throws NotHermitian.
template <std::size_t N>
std::array<double, N> hermitian_eigenvalues(const Matrix<N>& h) {
  const double defect = h.hermitian_defect();
  if (defect > tol::hermitize)
    throw NotHermitian("matrix deviates from Hermitian by " + std::to_string(defect));

  Matrix<N> a = h.hermitian_part();
  const double stop = tol::jacobi_offdiag * std::max(1.0, a.frobenius());

  auto offdiag = [&a] {
    double s = 0.0;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c)
        if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
  };

  int sweep = 0;
  while (offdiag() >= stop) {
    if (++sweep > tol::jacobi_max_sweeps) throw ConvergenceError("Jacobi sweeps exhausted");
    for (std::size_t p = 0; p + 1 < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        // G = diag(1, e^{-i alpha}) * [[c, s], [-s, c]] on the (p, q) plane
        // makes (G^dag A G)_pq vanish.
        const cplx phase = apq / mag;  // e^{i alpha}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const cplx g_qp = -s * std::conj(phase);
        const cplx g_qq = c * std::conj(phase);
        for (std::size_t k = 0; k < N; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * c + akq * g_qp;
          a(k, q) = akp * s + akq * g_qq;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk + std::conj(g_qp) * aqk;
          a(q, k) = s * apk + std::conj(g_qq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
  }

  std::array<double, N> ev{};
  for (std::size_t i = 0; i < N; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

// ---------------------------------------------------------------------------
// Density matrices

/// Trace-one, Hermitian, positive-semidefinite matrix. Only constructible
/// through the validating factory.
template <std::size_t N>
class DensityMatrix {
 public:
  static constexpr std::size_t dim = N;

  /// Validates `m`; small Hermitian round-off is projected away.
  static DensityMatrix from(const Matrix<N>& m) {
    const double herm = m.hermitian_defect();
    if (herm > tol::hermitian)
      throw InvalidDensityMatrix("not Hermitian (defect " + std::to_string(herm) + ")");
    Matrix<N> h = m.hermitian_part();
    const double tr_err = std::abs(h.trace() - 1.0);
    if (tr_err > tol::trace)
      throw InvalidDensityMatrix("trace differs from 1 by " + std::to_string(tr_err));
    const double min_ev = hermitian_eigenvalues(h).front();
    if (min_ev < -tol::psd)
      throw InvalidDensityMatrix("negative eigenvalue " + std::to_string(min_ev));
    return DensityMatrix(h);
  }

  static DensityMatrix pure(const Ket<N>& k) { return from(projector(k)); }

  static DensityMatrix maximally_mixed() { return DensityMatrix(Matrix<N>::identity() * (1.0 / N)); }

  const Matrix<N>& matrix() const noexcept { return m_; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  friend bool operator==(const DensityMatrix&, const DensityMatrix&) = default;

 private:
  explicit DensityMatrix(const Matrix<N>& m) : m_(m) {}
  Matrix<N> m_;
};

using DensityMatrix2 = DensityMatrix<2>;
using DensityMatrix4 = DensityMatrix<4>;

/// |Phi+> = (|00> + |11>) / sqrt 2
inline DensityMatrix4 bell_phi_plus() {
  const double r = 1.0 / std::sqrt(2.0);
  return DensityMatrix4::pure({r, 0.0, 0.0, r});
}

// ---------------------------------------------------------------------------
// Kraus maps

template <std::size_t N>
struct WeightedOp {
  double weight;
  Matrix<N> op;
};

/// Largest entry of sum_i w_i K_i^dag K_i - I.
template <std::size_t N>
double completeness_error(std::span<const WeightedOp<N>> family) {
  Matrix<N> s;
  for (const auto& k : family) s += k.weight * (k.op.adjoint() * k.op);
  return max_abs_diff(s, Matrix<N>::identity());
}

template <std::size_t N>
void check_completeness(std::span<const WeightedOp<N>> family) {
  for (const auto& k : family)
    if (!(k.weight >= 0.0)) throw CompletenessViolation("negative Kraus weight");
  const double err = completeness_error(family);
  if (err > tol::completeness)
    throw CompletenessViolation("Kraus family incomplete, error " + std::to_string(err));
}

/// sum_i w_i K_i X K_i^dag without any validation; linear in X.
template <std::size_t N>
Matrix<N> kraus_sum(const Matrix<N>& x, std::span<const WeightedOp<N>> family) {
  Matrix<N> out;
  for (const auto& k : family) {
    if (k.weight == 0.0) continue;
    out += k.weight * (k.op * x * k.op.adjoint());
  }
  return out;
}

template <std::size_t N>
DensityMatrix<N> apply_kraus(const DensityMatrix<N>& rho, std::span<const WeightedOp<N>> family) {
  check_completeness(family);
  return DensityMatrix<N>::from(kraus_sum(rho.matrix(), family).hermitian_part());
}

template <std::size_t N>
DensityMatrix<N> apply_kraus(const DensityMatrix<N>& rho, std::span<const Matrix<N>> kraus,
                             std::span<const double> weights) {
  if (kraus.size() != weights.size())
    throw DimensionMismatch("Kraus operator and weight counts differ");
  std::vector<WeightedOp<N>> family;
  family.reserve(kraus.size());
  for (std::size_t i = 0; i < kraus.size(); ++i) family.push_back({weights[i], kraus[i]});
  return apply_kraus<N>(rho, std::span<const WeightedOp<N>>(family));
}

// ---------------------------------------------------------------------------
// Two-qubit partial operations. Basis order |AB> = |00>, |01>, |10>, |11>.

enum class Qubit { A, B };

inline Matrix4 partial_transpose(const Matrix4& m, Qubit which) {
  Matrix4 out;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t a2 = 0; a2 < 2; ++a2)
        for (std::size_t b2 = 0; b2 < 2; ++b2) {
          const cplx v = m(2 * a + b, 2 * a2 + b2);
          if (which == Qubit::A)
            out(2 * a2 + b, 2 * a + b2) = v;
          else
            out(2 * a + b2, 2 * a2 + b) = v;
        }
  return out;
}

inline Matrix4 partial_transpose(const DensityMatrix4& rho, Qubit which) {
  return partial_transpose(rho.matrix(), which);
}

/// Reduced state after tracing out `traced`.
inline DensityMatrix2 partial_trace(const DensityMatrix4& rho, Qubit traced) {
  Matrix2 out;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        out(i, j) += traced == Qubit::A ? rho(2 * k + i, 2 * k + j) : rho(2 * i + k, 2 * j + k);
  return DensityMatrix2::from(out);
}

// ---------------------------------------------------------------------------
// Bloch vectors

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm_sq() const { return dot(*this); }
  double norm() const { return std::sqrt(norm_sq()); }

  BlochVector& operator+=(const BlochVector& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  friend BlochVector operator+(BlochVector a, const BlochVector& b) { return a += b; }
  friend BlochVector operator-(const BlochVector& a, const BlochVector& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend BlochVector operator*(double s, const BlochVector& v) { return {s * v.x, s * v.y, s * v.z}; }
  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

inline double max_abs_diff(const BlochVector& a, const BlochVector& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

/// (Tr X sigma_x, Tr X sigma_y, Tr X sigma_z) for any 2x2 operator; the
/// imaginary parts are discarded.
inline BlochVector pauli_components(const Matrix2& m) {
  return {(m(0, 1) + m(1, 0)).real(), m(1, 0).imag() - m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

inline Matrix2 operator_from_components(double identity_weight, const BlochVector& v) {
  return {cplx(identity_weight + v.z, 0.0) * 0.5, cplx(v.x, -v.y) * 0.5, cplx(v.x, v.y) * 0.5,
          cplx(identity_weight - v.z, 0.0) * 0.5};
}

inline BlochVector bloch_from_density(const DensityMatrix2& rho) { return pauli_components(rho.matrix()); }

inline void check_in_ball(const BlochVector& v) {
  const double n = v.norm();
  if (n > 1.0 + tol::bloch_ball) throw BlochOutOfBall("|v| = " + std::to_string(n));
}

inline DensityMatrix2 density_from_bloch(const BlochVector& v) {
  check_in_ball(v);
  return DensityMatrix2::from(operator_from_components(1.0, v));
}

}  // namespace bqt
