#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qwit/states.hpp"

namespace qwit {

/// Stable identifiers, also used as CSV column names.
enum class WitnessId { C, N, B, H, Hp, S, D, Q1, Q2, Sx, Sopt };

const char* to_string(WitnessId id) noexcept;
WitnessId parse_witness(std::string_view name);
std::vector<WitnessId> all_witnesses();

/// True for witnesses that need a two-mode state.
bool needs_two_modes(WitnessId id) noexcept;

struct WitnessParams {
  double s0 = 0.0;
  double d0 = 0.0;
  std::vector<double> phis;    // quadrature angle per mode, empty = all 0
  std::vector<double> coeffs;  // quadrature weight per mode, empty = all 1
};

/// `raw` is positive when the witness detects nonclassicality; `truncated`
/// is max(0, raw), except for B where it is sqrt(max(0, raw)).
struct WitnessValue {
  WitnessId id = WitnessId::C;
  double raw = 0.0;
  double truncated = 0.0;
  double threshold = 0.0;
};

/// max(0, f0 - f).
double truncate(double f, double f0);

WitnessValue concurrence(const QuantumState& state);
WitnessValue negativity(const QuantumState& state, int mode = 1);
WitnessValue chsh_B(const QuantumState& state);
WitnessValue hillery_H(const QuantumState& state);
WitnessValue hillery_Hprime(const QuantumState& state);
WitnessValue pnd_S(const QuantumState& state, double s0);
WitnessValue pnd_D(const QuantumState& state, double d0);
WitnessValue mandel_Q(const QuantumState& state, int mode);
WitnessValue quad_squeezing(const QuantumState& state, const std::vector<double>& phis,
                            const std::vector<double>& coeffs, double s0);
WitnessValue principal_squeezing(const QuantumState& state, double s0);

WitnessValue evaluate(WitnessId id, const QuantumState& state, const WitnessParams& params);

// Normally ordered expansions used by the witnesses above.

/// :(n_1 - n_2)^2: = a1+^2 a1^2 + a2+^2 a2^2 - 2 a1+ a2+ a1 a2
NormalPolynomial pnd_square(int modes);
/// n_1 - n_2
NormalPolynomial pnd_linear(int modes);
/// :x^2: and x for x = sum_m c_m (a_m e^{i phi_m} + a_m+ e^{-i phi_m})
NormalPolynomial quadrature_square(const std::vector<double>& phis, const std::vector<double>& coeffs);
NormalPolynomial quadrature_linear(const std::vector<double>& phis, const std::vector<double>& coeffs);

/// <:(Delta x_phi)^2:>, the untruncated quadrature variance.
double quadrature_variance(const QuantumState& state, const std::vector<double>& phis,
                           const std::vector<double>& coeffs);

/// min over phi of the single-mode normally ordered quadrature variance,
/// 2(<Da+ Da> - |<(Da)^2>|).
double principal_variance(const QuantumState& state);

}  // namespace qwit
