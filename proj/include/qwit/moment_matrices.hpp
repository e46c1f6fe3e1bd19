#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qwit/states.hpp"

namespace qwit {

/// Ordered, non-empty list of distinct monomials f_1..f_N.
class MonomialList {
 public:
  explicit MonomialList(std::vector<MonomialMoment> monos);

  /// Comma-separated tokens: "1", or products like "a1+a1" or "a1a2".
  /// A trailing "+" daggers the preceding operator; a token denotes the
  /// normally ordered product of its operators.
  static MonomialList parse(std::string_view text, int modes);

  int size() const noexcept { return static_cast<int>(monos_.size()); }
  int modes() const noexcept { return monos_.front().modes(); }
  const MonomialMoment& operator[](int i) const { return monos_.at(i); }
  auto begin() const noexcept { return monos_.begin(); }
  auto end() const noexcept { return monos_.end(); }

  std::string to_string() const;

 private:
  std::vector<MonomialMoment> monos_;
};

/// Operator product lhs * rhs rewritten in normal order with
/// a^k a+^l = sum_r C(k,r) C(l,r) r! a+^(l-r) a^(k-r) on every mode.
NormalPolynomial normal_order_product(const MonomialMoment& lhs, const MonomialMoment& rhs);

/// M[i][j] = <: f_i+ f_j :>.
ComplexMatrix moment_matrix(const QuantumState& state, const MonomialList& fs);

/// M[i][j] = tr(f_i+ f_j rho^T), with rho partially transposed on `mode`.
ComplexMatrix pt_moment_matrix(const QuantumState& state, const MonomialList& fs, int mode = 1);

/// Real part of the LU determinant.
double determinant(const ComplexMatrix& m);

/// det(m) < -1e-10 * prod_i |m_ii| and below an absolute roundoff floor.
bool determinant_negative(const ComplexMatrix& m);

bool nonclassicality_detected(const QuantumState& state, const MonomialList& fs);
bool npt_detected(const QuantumState& state, const MonomialList& fs, int mode = 1);

/// (1,a_m), (a_m,a_m+), (1,n_m) for each mode, plus (a1,a2+), (a1,a2), (1,a1a2)
/// for two modes.
std::vector<MonomialList> default_monomial_lists(int modes);

}  // namespace qwit
