#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "qwit/linalg.hpp"

namespace qwit {

/// Normalised state vector on a truncated Fock layout.
class PureState {
 public:
  /// Throws unless the amplitudes have unit norm within 1e-10.
  PureState(ComplexVector amplitudes, HilbertLayout layout);

  /// Divides by the norm; throws on a zero vector.
  static PureState normalized(ComplexVector amplitudes, HilbertLayout layout);

  /// Single Fock basis state |n_0, n_1, ...>.
  static PureState fock(const std::vector<int>& occupations, const HilbertLayout& layout);

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  const HilbertLayout& layout() const noexcept { return layout_; }
  ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  ComplexVector amplitudes_;
  HilbertLayout layout_;
};

/// Density matrix with its layout.
class QuantumState {
 public:
  enum class Check {
    full,       // Hermitian, unit trace and min eigenvalue >= -1e-8
    structural  // Hermitian and unit trace only
  };

  QuantumState(ComplexMatrix rho, HilbertLayout layout, Check check = Check::full);
  explicit QuantumState(const PureState& psi);

  const ComplexMatrix& rho() const noexcept { return rho_; }
  const HilbertLayout& layout() const noexcept { return layout_; }
  int dim() const noexcept { return static_cast<int>(rho_.rows()); }

  double min_eigenvalue() const;

 private:
  ComplexMatrix rho_;
  HilbertLayout layout_;
};

/// Exponents of one mode in a normally ordered monomial a^dag^creation a^annihilation.
struct ModeExponents {
  int creation = 0;
  int annihilation = 0;
  friend auto operator<=>(const ModeExponents&, const ModeExponents&) = default;
};

/// Normally ordered product over modes of a_m^dag^{p_m} a_m^{q_m}.
class MonomialMoment {
 public:
  MonomialMoment() = default;
  explicit MonomialMoment(std::vector<ModeExponents> exponents);

  static MonomialMoment identity(int modes);
  static MonomialMoment single(int modes, int mode, int creation, int annihilation);

  int modes() const noexcept { return static_cast<int>(exps_.size()); }
  const ModeExponents& operator[](int mode) const { return exps_.at(mode); }
  const std::vector<ModeExponents>& exponents() const noexcept { return exps_; }
  bool is_identity() const noexcept;

  MonomialMoment adjoint() const;

  /// Symbolic normally ordered product :this * other: (no commutator terms).
  MonomialMoment normal_product(const MonomialMoment& other) const;

  /// Same monomial with creation/annihilation exponents swapped on `mode`;
  /// this is the monomial's transpose with respect to that mode.
  MonomialMoment transposed(int mode) const;

  std::string to_string() const;

  friend auto operator<=>(const MonomialMoment&, const MonomialMoment&) = default;
  friend bool operator==(const MonomialMoment&, const MonomialMoment&) = default;

 private:
  std::vector<ModeExponents> exps_;
};

/// Linear combination of normally ordered monomials.
using NormalPolynomial = std::map<MonomialMoment, Complex>;

void accumulate(NormalPolynomial& poly, const MonomialMoment& mono, Complex coeff);

/// Dense matrix of a monomial on the truncated layout.
ComplexMatrix monomial_operator(const MonomialMoment& mono, const HilbertLayout& layout);

/// Tr(rho * mono) for an arbitrary (not necessarily positive) matrix on `layout`.
/// Normally ordered moments of operators supported in the truncated space are
/// exact; exponents beyond the cutoff contribute exactly zero.
Complex trace_moment(const ComplexMatrix& rho, const HilbertLayout& layout, const MonomialMoment& mono);

Complex moment(const QuantumState& state, const MonomialMoment& mono);
Complex expect(const QuantumState& state, const NormalPolynomial& poly);
Complex trace_expect(const ComplexMatrix& rho, const HilbertLayout& layout, const NormalPolynomial& poly);

/// Tr(rho * op) with a dense operator.
Complex expect(const QuantumState& state, const ComplexMatrix& op);

/// Default per-mode cutoff for a coherent amplitude: 5*max(1,|alpha|^2)+15.
int default_coherent_dim(Complex alpha0);

PureState coherent_state(Complex alpha0, int dim);

/// State of the anharmonic oscillator H = (kappa/2) a^dag^2 a^2 started in
/// |alpha0> after rescaled time tau = kappa t:
/// c_n = exp(-|alpha0|^2/2) alpha0^n / sqrt(n!) * exp(-i n(n-1) tau / 2).
PureState kerr_state(Complex alpha0, double tau, int dim);

/// p |psi><psi| + (1-p)/4 I on a two-qubit layout.
QuantumState werner_like(double p, const PureState& psi);

/// Two-qubit vector from amplitudes of |00>, |01>, |10>, |11>.
PureState two_qubit_state(Complex c00, Complex c01, Complex c10, Complex c11);

/// Embeds a state of a smaller layout into a larger one mode by mode
/// (zero amplitude on the added Fock levels).
QuantumState embed_state(const QuantumState& state, const HilbertLayout& target);
PureState embed_state(const PureState& state, const HilbertLayout& target);

ComplexMatrix partial_transpose(const ComplexMatrix& rho, const HilbertLayout& layout, int mode);
ComplexMatrix partial_transpose(const QuantumState& state, int mode);

/// Reduced single-mode state.
QuantumState partial_trace_keep(const QuantumState& state, int mode);

/// Restricts a two-mode state to the {0,1}x{0,1} block and renormalises.
/// Throws Errc::leakage when more than 1e-9 population lies outside.
QuantumState qubit_project(const QuantumState& state);

/// Population on the highest Fock level of any mode.
double top_level_population(const QuantumState& state);

}  // namespace qwit
