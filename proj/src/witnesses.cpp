#include "qwit/witnesses.hpp"

#include <array>
#include <cmath>

namespace qwit {

namespace {

constexpr std::array<WitnessId, 11> kAll = {WitnessId::C,  WitnessId::N,  WitnessId::B,  WitnessId::H,
                                            WitnessId::Hp, WitnessId::S,  WitnessId::D,  WitnessId::Q1,
                                            WitnessId::Q2, WitnessId::Sx, WitnessId::Sopt};

WitnessValue make(WitnessId id, double raw, double threshold = 0.0) {
  return {id, raw, std::max(0.0, raw), threshold};
}

const QuantumState& as_two_qubits(const QuantumState& state, QuantumState& storage) {
  if (state.layout() == HilbertLayout::qubits(2)) return state;
  storage = qubit_project(state);
  return storage;
}

void require_two_modes(const QuantumState& state, const char* who) {
  if (state.layout().modes() != 2) {
    throw Error(Errc::invalid_dimension, std::string(who) + " needs a two-mode state");
  }
}

MonomialMoment mono2(int p1, int q1, int p2, int q2) { return MonomialMoment({{p1, q1}, {p2, q2}}); }

std::vector<Complex> quadrature_weights(const std::vector<double>& phis, const std::vector<double>& coeffs,
                                        int modes) {
  if (!phis.empty() && static_cast<int>(phis.size()) != modes) {
    throw Error(Errc::invalid_argument, "quadrature: expected " + std::to_string(modes) + " angles");
  }
  if (!coeffs.empty() && static_cast<int>(coeffs.size()) != modes) {
    throw Error(Errc::invalid_argument, "quadrature: expected " + std::to_string(modes) + " coefficients");
  }
  std::vector<Complex> u(static_cast<std::size_t>(modes));
  for (int m = 0; m < modes; ++m) {
    const double phi = phis.empty() ? 0.0 : phis[m];
    const double c = coeffs.empty() ? 1.0 : coeffs[m];
    u[m] = std::polar(c, phi);
  }
  return u;
}

MonomialMoment pair_monomial(int modes, int m, int n, bool dagger_m, bool dagger_n) {
  std::vector<ModeExponents> e(static_cast<std::size_t>(modes));
  (dagger_m ? e[m].creation : e[m].annihilation) += 1;
  (dagger_n ? e[n].creation : e[n].annihilation) += 1;
  return MonomialMoment(std::move(e));
}

}  // namespace

const char* to_string(WitnessId id) noexcept {
  switch (id) {
    case WitnessId::C: return "C";
    case WitnessId::N: return "N";
    case WitnessId::B: return "B";
    case WitnessId::H: return "H";
    case WitnessId::Hp: return "Hp";
    case WitnessId::S: return "S";
    case WitnessId::D: return "D";
    case WitnessId::Q1: return "Q1";
    case WitnessId::Q2: return "Q2";
    case WitnessId::Sx: return "Sx";
    case WitnessId::Sopt: return "Sopt";
  }
  return "?";
}

WitnessId parse_witness(std::string_view name) {
  for (WitnessId id : kAll)
    if (name == to_string(id)) return id;
  throw Error(Errc::parse, "unknown witness '" + std::string(name) + "'");
}

std::vector<WitnessId> all_witnesses() { return {kAll.begin(), kAll.end()}; }

bool needs_two_modes(WitnessId id) noexcept {
  switch (id) {
    case WitnessId::Q1:
    case WitnessId::Sx:
    case WitnessId::Sopt: return false;
    default: return true;
  }
}

double truncate(double f, double f0) { return std::max(0.0, f0 - f); }

WitnessValue concurrence(const QuantumState& state) {
  QuantumState storage = state;
  const QuantumState& q = as_two_qubits(state, storage);
  const ComplexMatrix yy = kron<double>(pauli::y(), pauli::y());

  // rho = h h+ on the support; the lambda_i are the singular values of
  // g = h+ (y x y) h*, read off the Hermitian dilation [[0, g], [g+, 0]]
  const auto support = psd_support<double>(q.rho(), 1e-14);
  const ComplexMatrix half = support.basis * support.sqrt_weights.cast<Complex>().asDiagonal();
  const ComplexMatrix g = half.adjoint() * yy * half.conjugate();
  const Eigen::Index k = g.rows();

  std::array<double, 4> lambda{0.0, 0.0, 0.0, 0.0};
  if (k > 0) {
    ComplexMatrix dilation = ComplexMatrix::Zero(2 * k, 2 * k);
    dilation.topRightCorner(k, k) = g;
    dilation.bottomLeftCorner(k, k) = g.adjoint();
    const RealVector ev = eigenvalues_hermitian(dilation);
    for (Eigen::Index i = 0; i < k; ++i) lambda[i] = std::max(0.0, ev(2 * k - 1 - i));
  }
  const double sum = lambda[0] + lambda[1] + lambda[2] + lambda[3];
  const double top = *std::max_element(lambda.begin(), lambda.end());
  return make(WitnessId::C, 2.0 * top - sum);
}

WitnessValue negativity(const QuantumState& state, int mode) {
  require_two_modes(state, "negativity");
  const RealVector mu = eigenvalues_hermitian(partial_transpose(state, mode));
  return make(WitnessId::N, -2.0 * mu(0));
}

WitnessValue chsh_B(const QuantumState& state) {
  QuantumState storage = state;
  const QuantumState& q = as_two_qubits(state, storage);
  const std::array<ComplexMatrix, 3> sigma = {pauli::x(), pauli::y(), pauli::z()};
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = (q.rho() * kron<double>(sigma[i], sigma[j])).trace().real();
  const ComplexMatrix u = (t.transpose() * t).cast<Complex>();
  const RealVector ev = eigenvalues_hermitian(u);
  const double raw = ev(1) + ev(2) - 1.0;
  return {WitnessId::B, raw, std::sqrt(std::max(0.0, raw)), 0.0};
}

WitnessValue hillery_H(const QuantumState& state) {
  require_two_modes(state, "hillery_H");
  const Complex a1a2d = moment(state, mono2(0, 1, 1, 0));
  const double n1n2 = moment(state, mono2(1, 1, 1, 1)).real();
  return make(WitnessId::H, std::norm(a1a2d) - n1n2);
}

WitnessValue hillery_Hprime(const QuantumState& state) {
  require_two_modes(state, "hillery_Hprime");
  const Complex a1a2 = moment(state, mono2(0, 1, 0, 1));
  const double n1 = moment(state, mono2(1, 1, 0, 0)).real();
  const double n2 = moment(state, mono2(0, 0, 1, 1)).real();
  return make(WitnessId::Hp, std::norm(a1a2) - n1 * n2);
}

NormalPolynomial pnd_square(int modes) {
  if (modes != 2) throw Error(Errc::invalid_dimension, "photon-number difference needs two modes");
  NormalPolynomial poly;
  accumulate(poly, mono2(2, 2, 0, 0), 1.0);
  accumulate(poly, mono2(0, 0, 2, 2), 1.0);
  accumulate(poly, mono2(1, 1, 1, 1), -2.0);
  return poly;
}

NormalPolynomial pnd_linear(int modes) {
  if (modes != 2) throw Error(Errc::invalid_dimension, "photon-number difference needs two modes");
  NormalPolynomial poly;
  accumulate(poly, mono2(1, 1, 0, 0), 1.0);
  accumulate(poly, mono2(0, 0, 1, 1), -1.0);
  return poly;
}

WitnessValue pnd_S(const QuantumState& state, double s0) {
  require_two_modes(state, "pnd_S");
  const double square = expect(state, pnd_square(2)).real();
  const double mean = expect(state, pnd_linear(2)).real();
  const double s = square - mean * mean;
  return make(WitnessId::S, -s - s0, s0);
}

WitnessValue pnd_D(const QuantumState& state, double d0) {
  require_two_modes(state, "pnd_D");
  const double square = expect(state, pnd_square(2)).real();
  const double mean = expect(state, pnd_linear(2)).real();
  const double d = square + 2.0 * d0 * mean + d0 * d0;
  return make(WitnessId::D, -d, d0);
}

WitnessValue mandel_Q(const QuantumState& state, int mode) {
  const int modes = state.layout().modes();
  const WitnessId id = mode == 0 ? WitnessId::Q1 : WitnessId::Q2;
  const double n = moment(state, MonomialMoment::single(modes, mode, 1, 1)).real();
  if (n <= 1e-12) return make(id, 0.0);
  const double n2 = moment(state, MonomialMoment::single(modes, mode, 2, 2)).real();
  return make(id, -(n2 - n * n) / n);
}

NormalPolynomial quadrature_square(const std::vector<double>& phis, const std::vector<double>& coeffs) {
  const int modes = static_cast<int>(std::max(phis.size(), coeffs.size()));
  const auto u = quadrature_weights(phis, coeffs, modes);
  NormalPolynomial poly;
  for (int m = 0; m < modes; ++m) {
    for (int n = 0; n < modes; ++n) {
      accumulate(poly, pair_monomial(modes, m, n, false, false), u[m] * u[n]);
      accumulate(poly, pair_monomial(modes, m, n, true, true), std::conj(u[m] * u[n]));
      accumulate(poly, pair_monomial(modes, m, n, true, false), 2.0 * std::conj(u[m]) * u[n]);
    }
  }
  return poly;
}

NormalPolynomial quadrature_linear(const std::vector<double>& phis, const std::vector<double>& coeffs) {
  const int modes = static_cast<int>(std::max(phis.size(), coeffs.size()));
  const auto u = quadrature_weights(phis, coeffs, modes);
  NormalPolynomial poly;
  for (int m = 0; m < modes; ++m) {
    accumulate(poly, MonomialMoment::single(modes, m, 0, 1), u[m]);
    accumulate(poly, MonomialMoment::single(modes, m, 1, 0), std::conj(u[m]));
  }
  return poly;
}

double quadrature_variance(const QuantumState& state, const std::vector<double>& phis,
                           const std::vector<double>& coeffs) {
  const int modes = state.layout().modes();
  std::vector<double> ph = phis.empty() ? std::vector<double>(modes, 0.0) : phis;
  std::vector<double> co = coeffs.empty() ? std::vector<double>(modes, 1.0) : coeffs;
  if (static_cast<int>(ph.size()) != modes || static_cast<int>(co.size()) != modes) {
    throw Error(Errc::invalid_argument, "quadrature: angle and coefficient lists must match the mode count");
  }
  const double square = expect(state, quadrature_square(ph, co)).real();
  const double mean = expect(state, quadrature_linear(ph, co)).real();
  return square - mean * mean;
}

WitnessValue quad_squeezing(const QuantumState& state, const std::vector<double>& phis,
                            const std::vector<double>& coeffs, double s0) {
  return make(WitnessId::Sx, -quadrature_variance(state, phis, coeffs) - s0, s0);
}

double principal_variance(const QuantumState& state) {
  if (state.layout().modes() != 1) {
    throw Error(Errc::invalid_dimension, "principal squeezing needs a single-mode state");
  }
  const Complex a = moment(state, MonomialMoment::single(1, 0, 0, 1));
  const Complex a2 = moment(state, MonomialMoment::single(1, 0, 0, 2));
  const double n = moment(state, MonomialMoment::single(1, 0, 1, 1)).real();
  return 2.0 * (n - std::norm(a) - std::abs(a2 - a * a));
}

WitnessValue principal_squeezing(const QuantumState& state, double s0) {
  return make(WitnessId::Sopt, -principal_variance(state) - s0, s0);
}

WitnessValue evaluate(WitnessId id, const QuantumState& state, const WitnessParams& params) {
  switch (id) {
    case WitnessId::C: return concurrence(state);
    case WitnessId::N: return negativity(state, 1);
    case WitnessId::B: return chsh_B(state);
    case WitnessId::H: return hillery_H(state);
    case WitnessId::Hp: return hillery_Hprime(state);
    case WitnessId::S: return pnd_S(state, params.s0);
    case WitnessId::D: return pnd_D(state, params.d0);
    case WitnessId::Q1: return mandel_Q(state, 0);
    case WitnessId::Q2: return mandel_Q(state, 1);
    case WitnessId::Sx: return quad_squeezing(state, params.phis, params.coeffs, params.s0);
    case WitnessId::Sopt: return principal_squeezing(state, params.s0);
  }
  throw Error(Errc::invalid_argument, "unknown witness");
}

}  // namespace qwit
