#pragma once

// Dense complex linear algebra on truncated Fock spaces.
//
// Every operator and density matrix in the library is a dense, row-major
// complex Eigen matrix. The routines here are templated on the real scalar
// type so the same code serves double and extended precision.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "qwit/error.hpp"

namespace qwit {

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;
using RealVector = RVector<double>;

/// Per-mode truncation dimensions of a multimode Fock space. Mode 0 is the
/// slowest-varying tensor factor.
class HilbertLayout {
 public:
  HilbertLayout() = default;

  explicit HilbertLayout(std::vector<int> mode_dims) : dims_(std::move(mode_dims)) {
    if (dims_.empty()) throw Error(Errc::invalid_dimension, "layout needs at least one mode");
    for (int d : dims_) {
      if (d < 2) throw Error(Errc::invalid_dimension, "mode dimension must be >= 2, got " + std::to_string(d));
    }
  }

  static HilbertLayout uniform(int modes, int dim) { return HilbertLayout(std::vector<int>(modes, dim)); }
  static HilbertLayout qubits(int modes) { return uniform(modes, 2); }

  int modes() const noexcept { return static_cast<int>(dims_.size()); }
  int dim(int mode) const { return dims_.at(check(mode)); }
  const std::vector<int>& mode_dims() const noexcept { return dims_; }

  int total() const noexcept {
    return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
  }

  /// Distance in the flat index between neighbouring Fock levels of `mode`.
  int stride(int mode) const {
    int s = 1;
    for (int m = modes() - 1; m > check(mode); --m) s *= dims_[m];
    return s;
  }

  /// Fock occupation of `mode` in flat basis index `index`.
  int occupation(int index, int mode) const { return (index / stride(mode)) % dims_[mode]; }

  friend bool operator==(const HilbertLayout&, const HilbertLayout&) = default;

 private:
  int check(int mode) const {
    if (mode < 0 || mode >= modes()) {
      throw Error(Errc::invalid_argument, "mode index " + std::to_string(mode) + " out of range");
    }
    return mode;
  }

  std::vector<int> dims_;
};

/// Truncated bosonic lowering operator: A(n-1, n) = sqrt(n).
template <typename Scalar = double>
CMatrix<Scalar> annihilation(int dim) {
  if (dim < 2) throw Error(Errc::invalid_dimension, "annihilation operator needs dim >= 2");
  CMatrix<Scalar> a = CMatrix<Scalar>::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(Scalar(n));
  return a;
}

template <typename Scalar = double>
CMatrix<Scalar> creation(int dim) {
  return annihilation<Scalar>(dim).adjoint();
}

template <typename Scalar = double>
CMatrix<Scalar> number_operator(int dim) {
  CMatrix<Scalar> n = CMatrix<Scalar>::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = Scalar(k);
  return n;
}

template <typename Scalar>
CMatrix<Scalar> kron(const CMatrix<Scalar>& a, const CMatrix<Scalar>& b) {
  CMatrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Lifts a single-mode operator to the full layout, identity elsewhere.
template <typename Scalar>
CMatrix<Scalar> embed(const CMatrix<Scalar>& op, int mode, const HilbertLayout& layout) {
  if (mode < 0 || mode >= layout.modes()) {
    throw Error(Errc::invalid_argument, "embed: mode " + std::to_string(mode) + " out of range");
  }
  if (op.rows() != layout.dim(mode) || op.cols() != layout.dim(mode)) {
    throw Error(Errc::invalid_dimension, "embed: operator dimension does not match mode " + std::to_string(mode));
  }
  CMatrix<Scalar> out = CMatrix<Scalar>::Identity(1, 1);
  for (int m = 0; m < layout.modes(); ++m) {
    out = kron<Scalar>(out, m == mode ? op : CMatrix<Scalar>::Identity(layout.dim(m), layout.dim(m)));
  }
  return out;
}

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

/// Largest |M(i,j) - conj(M(j,i))|.
template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<typename Derived::RealScalar>::infinity();
  return max_abs(m - m.adjoint());
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol) {
  using Real = typename Derived::RealScalar;
  return hermiticity_defect(m) <= Real(tol) * std::max(Real(1), max_abs(m));
}

template <typename Scalar>
struct HermitianEigen {
  RVector<Scalar> values;    // ascending
  CMatrix<Scalar> vectors;   // column k pairs with values(k)
  int sweeps = 0;
};

/// Cyclic complex Jacobi diagonalisation of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot a(p,q) with a diagonal
/// unitary and then applies the real symmetric Jacobi rotation. Sweeps stop
/// once the off-diagonal Frobenius norm drops below ~1e-13 of the matrix norm.
template <typename Scalar>
HermitianEigen<Scalar> eig_hermitian(const CMatrix<Scalar>& m) {
  using C = std::complex<Scalar>;
  if (m.rows() != m.cols()) throw Error(Errc::contract_violation, "eig_hermitian: matrix is not square");
  if (!is_hermitian(m, 1e-10)) throw Error(Errc::contract_violation, "eig_hermitian: matrix is not Hermitian");

  const Eigen::Index n = m.rows();
  CMatrix<Scalar> a = (m + m.adjoint()) * Scalar(0.5);
  CMatrix<Scalar> v = CMatrix<Scalar>::Identity(n, n);
  HermitianEigen<Scalar> out;

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar tol = Scalar(450) * eps;
  const Scalar norm = a.norm();

  auto off_norm = [&] {
    Scalar s = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) s += std::norm(a(i, j));
    return std::sqrt(Scalar(2) * s);
  };

  constexpr int kMaxSweeps = 100;
  while (norm > 0 && off_norm() > tol * norm) {
    if (++out.sweeps > kMaxSweeps) throw Error(Errc::not_converged, "eig_hermitian: Jacobi sweeps did not converge");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar r = std::abs(a(p, q));
        if (r == Scalar(0)) continue;
        const Scalar app = a(p, p).real();
        const Scalar aqq = a(q, q).real();
        // Late sweeps: drop pivots that no longer affect the diagonal.
        if (out.sweeps > 4 && std::abs(app) + Scalar(100) * r == std::abs(app) &&
            std::abs(aqq) + Scalar(100) * r == std::abs(aqq)) {
          a(p, q) = a(q, p) = C(0);
          continue;
        }
        const C phase = a(p, q) / r;
        const C phase_c = std::conj(phase);
        const Scalar theta = (aqq - app) / (Scalar(2) * r);
        Scalar t = Scalar(1) / (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        if (theta < 0) t = -t;
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;

        // A <- A G with G = [[c, s], [-s conj(e), c conj(e)]] on (p, q).
        for (Eigen::Index k = 0; k < n; ++k) {
          const C akp = a(k, p);
          const C akq = a(k, q);
          a(k, p) = c * akp - s * phase_c * akq;
          a(k, q) = s * akp + c * phase_c * akq;
        }
        // A <- G^H A.
        for (Eigen::Index k = 0; k < n; ++k) {
          const C apk = a(p, k);
          const C aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, p) = C(app - t * r);
        a(q, q) = C(aqq + t * r);
        a(p, q) = a(q, p) = C(0);

        for (Eigen::Index k = 0; k < n; ++k) {
          const C vkp = v(k, p);
          const C vkq = v(k, q);
          v(k, p) = c * vkp - s * phase_c * vkq;
          v(k, q) = s * vkp + c * phase_c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

template <typename Scalar>
RVector<Scalar> eigenvalues_hermitian(const CMatrix<Scalar>& m) {
  return eig_hermitian(m).values;
}

/// Hermitian PSD square root. Eigenvalues in [-1e-8, 0) are treated as
/// roundoff and clamped; anything more negative is rejected.
template <typename Scalar>
CMatrix<Scalar> psd_sqrt(const CMatrix<Scalar>& m) {
  const auto eig = eig_hermitian(m);
  if (eig.values.size() > 0 && eig.values(0) < Scalar(-1e-8)) {
    throw Error(Errc::not_psd, "psd_sqrt: eigenvalue " + std::to_string(double(eig.values(0))) + " < -1e-8");
  }
  RVector<Scalar> roots = eig.values.cwiseMax(Scalar(0)).cwiseSqrt();
  return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

/// Factor of a PSD matrix restricted to its numerical support:
/// m ~= basis * diag(weights^2) * basis^H, with eigenvalues at or below
/// `rank_tol * max(1, max eigenvalue)` discarded.
template <typename Scalar>
struct SupportFactor {
  CMatrix<Scalar> basis;
  RVector<Scalar> sqrt_weights;
};

template <typename Scalar>
SupportFactor<Scalar> psd_support(const CMatrix<Scalar>& m, Scalar rank_tol) {
  const auto eig = eig_hermitian(m);
  const Eigen::Index n = eig.values.size();
  if (n > 0 && eig.values(0) < Scalar(-1e-8)) {
    throw Error(Errc::not_psd, "psd_support: eigenvalue " + std::to_string(double(eig.values(0))) + " < -1e-8");
  }
  const Scalar cutoff = rank_tol * std::max(Scalar(1), n > 0 ? eig.values(n - 1) : Scalar(0));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < n; ++k)
    if (eig.values(k) > cutoff) keep.push_back(k);
  SupportFactor<Scalar> out;
  out.basis.resize(n, static_cast<Eigen::Index>(keep.size()));
  out.sqrt_weights.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    out.basis.col(static_cast<Eigen::Index>(j)) = eig.vectors.col(keep[j]);
    out.sqrt_weights(static_cast<Eigen::Index>(j)) = std::sqrt(eig.values(keep[j]));
  }
  return out;
}

namespace pauli {

inline ComplexMatrix x() { return (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished(); }
inline ComplexMatrix y() { return (ComplexMatrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished(); }
inline ComplexMatrix z() { return (ComplexMatrix(2, 2) << 1, 0, 0, -1).finished(); }

}  // namespace pauli

}  // namespace qwit
