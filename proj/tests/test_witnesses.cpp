#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qwit/witnesses.hpp"

using namespace qwit;

namespace {

const double kS = 1.0 / std::sqrt(2.0);

PureState phi_plus() { return two_qubit_state(kS, 0, 0, kS); }
PureState psi_zero() { return two_qubit_state(0, kS, Complex(0, -kS), 0); }

// cos(kt)|01> - i sin(kt)|10>
QuantumState converter_pure(double kt) {
  return QuantumState(two_qubit_state(0, std::cos(kt), Complex(0, -std::sin(kt)), 0));
}

PureState random_pure(std::mt19937_64& gen, int dim, const HilbertLayout& layout) {
  std::normal_distribution<double> g;
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(g(gen), g(gen));
  return PureState::normalized(v, layout);
}

QuantumState random_two_qubit(std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> rank(1, 4);
  ComplexMatrix a(4, rank(gen));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = Complex(g(gen), g(gen));
  ComplexMatrix rho = a * a.adjoint();
  return QuantumState(rho / rho.trace().real(), HilbertLayout::qubits(2));
}

// <:(Delta x)^2:> = <x^2> - <x>^2 - 1 for x = a e^{i phi} + a+ e^{-i phi}
double dense_quadrature_variance(const QuantumState& s, double phi) {
  const int d = s.layout().dim(0);
  const ComplexMatrix a = annihilation(d);
  const ComplexMatrix x = a * std::polar(1.0, phi) + a.adjoint() * std::polar(1.0, -phi);
  const double x1 = expect(s, x).real();
  // the top Fock level misses the commutator term, use the exact normally ordered square
  const ComplexMatrix ad = a.adjoint();
  const ComplexMatrix nx2 = a * a * std::polar(1.0, 2 * phi) + ad * ad * std::polar(1.0, -2 * phi) + 2.0 * ad * a;
  return expect(s, nx2).real() - x1 * x1;
}

struct KerrMoments {
  Complex a, a2;
  double n;
};

KerrMoments kerr_moments(double alpha, double tau) {
  const double n = alpha * alpha;
  const Complex i(0, 1);
  return {alpha * std::exp(n * (std::exp(-i * tau) - 1.0)),
          alpha * alpha * std::exp(-i * tau) * std::exp(n * (std::exp(-2.0 * i * tau) - 1.0)), n};
}

double kerr_sx(double alpha, double tau, double phi) {
  const KerrMoments m = kerr_moments(alpha, tau);
  return 2.0 * (std::polar(1.0, 2 * phi) * (m.a2 - m.a * m.a)).real() + 2.0 * (m.n - std::norm(m.a));
}

double kerr_sopt(double alpha, double tau) {
  const KerrMoments m = kerr_moments(alpha, tau);
  return 2.0 * (m.n - std::norm(m.a) - std::abs(m.a2 - m.a * m.a));
}

}  // namespace

TEST_CASE("witness identifiers round-trip") {
  for (WitnessId id : all_witnesses()) CHECK(parse_witness(to_string(id)) == id);
  CHECK(all_witnesses().size() == 11);
  CHECK(std::string(to_string(WitnessId::Hp)) == "Hp");
  CHECK_THROWS_AS(parse_witness("X"), Error);
  CHECK_FALSE(needs_two_modes(WitnessId::Sopt));
  CHECK(needs_two_modes(WitnessId::C));
}

TEST_CASE("truncate") {
  CHECK(truncate(-0.3, 0.0) == doctest::Approx(0.3));
  CHECK(truncate(0.5, 0.0) == 0.0);
  CHECK(truncate(-0.47, 0.03) == doctest::Approx(0.5));
  CHECK(truncate(0.03, 0.03) == 0.0);
}

TEST_CASE("concurrence") {
  CHECK(concurrence(QuantumState(phi_plus())).truncated == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(concurrence(QuantumState(ComplexMatrix::Identity(4, 4) / 4.0, HilbertLayout::qubits(2))).truncated == 0.0);
  CHECK(concurrence(werner_like(0.8, phi_plus())).truncated == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(concurrence(werner_like(0.8, phi_plus())).raw == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(concurrence(werner_like(0.2, phi_plus())).raw < 0.0);
  // product state
  const PureState prod = two_qubit_state(0.6, 0.8, 0, 0);
  CHECK(std::abs(concurrence(QuantumState(prod)).raw) < 1e-12);
  // a 3x3 state confined to the qubit block
  const QuantumState embedded = embed_state(QuantumState(phi_plus()), HilbertLayout({3, 3}));
  CHECK(concurrence(embedded).truncated == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("concurrence resolves small values near product states") {
  for (double eps : {1e-6, 1e-9, 1e-12}) {
    const double c = std::sqrt(1.0 - eps * eps);
    const QuantumState s(two_qubit_state(0, c, Complex(0.0, -eps), 0));
    CHECK(std::abs(concurrence(s).raw - 2.0 * c * eps) < 1e-15);
    // mixed with a small amount of the product state
    const ComplexMatrix rho = 0.9 * s.rho() + 0.1 * QuantumState(two_qubit_state(0, 1, 0, 0)).rho();
    CHECK(concurrence(QuantumState(rho, HilbertLayout::qubits(2))).raw <= 2.0 * c * eps + 1e-15);
  }
}

TEST_CASE("negativity") {
  CHECK(negativity(QuantumState(phi_plus())).truncated == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(negativity(werner_like(0.8, phi_plus())).truncated == doctest::Approx(0.7).epsilon(1e-12));
  std::mt19937_64 gen(21);
  for (int rep = 0; rep < 10; ++rep) {
    const PureState a = random_pure(gen, 3, HilbertLayout({3}));
    const PureState b = random_pure(gen, 2, HilbertLayout({2}));
    const QuantumState prod(kron<double>(a.projector(), b.projector()), HilbertLayout({3, 2}));
    CHECK(negativity(prod).truncated < 1e-12);
  }
}

TEST_CASE("chsh_B") {
  CHECK(chsh_B(QuantumState(phi_plus())).truncated == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(chsh_B(QuantumState(ComplexMatrix::Identity(4, 4) / 4.0, HilbertLayout::qubits(2))).truncated == 0.0);
  const WitnessValue w = chsh_B(werner_like(0.8, phi_plus()));
  CHECK(w.raw == doctest::Approx(0.28).epsilon(1e-12));
  CHECK(w.truncated == doctest::Approx(std::sqrt(0.28)).epsilon(1e-12));
}

TEST_CASE("Hillery witnesses") {
  const QuantumState vac(PureState::fock({0, 0}, HilbertLayout::qubits(2)));
  CHECK(hillery_H(vac).truncated == 0.0);
  CHECK(hillery_Hprime(vac).truncated == 0.0);
  CHECK(hillery_H(QuantumState(psi_zero())).truncated == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(hillery_Hprime(QuantumState(psi_zero())).truncated == 0.0);
  CHECK(hillery_Hprime(QuantumState(psi_zero())).raw == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(hillery_H(converter_pure(M_PI / 8)).truncated == doctest::Approx(0.125).epsilon(1e-14));

  const double eps = 0.1;
  const QuantumState tms(PureState::normalized(two_qubit_state(1, 0, 0, eps).amplitudes(), HilbertLayout::qubits(2)));
  const double expected = (eps * eps - std::pow(eps, 4)) / std::pow(1 + eps * eps, 2);
  CHECK(hillery_Hprime(tms).truncated == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("photon-number difference witnesses") {
  const QuantumState w = werner_like(0.8, phi_plus());
  CHECK(pnd_S(w, 0.03).truncated == doctest::Approx(0.87).epsilon(1e-14));
  CHECK(pnd_D(w, 0.1).truncated == doctest::Approx(0.89).epsilon(1e-14));
  CHECK(pnd_S(converter_pure(0.0), 0.5).truncated == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pnd_D(converter_pure(0.0), 1.0).truncated == doctest::Approx(1.0).epsilon(1e-14));

  const HilbertLayout l({20, 20});
  const Complex a1(0.4, 0.2), a2(-0.3, 0.5);
  const ComplexVector v = kron<double>(coherent_state(a1, 20).amplitudes(), coherent_state(a2, 20).amplitudes());
  const QuantumState coh(PureState::normalized(v, l));
  CHECK(std::abs(pnd_S(coh, 0.0).raw) < 1e-12);
  CHECK(pnd_S(coh, 0.0).truncated < 1e-12);
  // D0=0 gives -<:(n1-n2)^2:> = -(|a1|^2-|a2|^2)^2
  CHECK(pnd_D(coh, 0.0).raw == doctest::Approx(-std::pow(std::norm(a1) - std::norm(a2), 2)).epsilon(1e-10));
  CHECK(pnd_D(coh, 0.0).truncated == 0.0);
}

TEST_CASE("photon-number difference expansion agrees with dense operators") {
  std::mt19937_64 gen(4);
  const HilbertLayout l({4, 3});
  const ComplexMatrix n1 = embed<double>(number_operator(4), 0, l);
  const ComplexMatrix n2 = embed<double>(number_operator(3), 1, l);
  for (int rep = 0; rep < 5; ++rep) {
    const QuantumState s(random_pure(gen, 12, l));
    const ComplexMatrix diff = n1 - n2;
    // :(n1-n2)^2: = (n1-n2)^2 - n1 - n2
    const double sq = expect(s, ComplexMatrix(diff * diff - n1 - n2)).real();
    const double mean = expect(s, diff).real();
    CHECK(pnd_S(s, 0.0).raw == doctest::Approx(-(sq - mean * mean)).epsilon(1e-12));
    const double d0 = 0.7;
    CHECK(pnd_D(s, d0).raw == doctest::Approx(-(sq + 2 * d0 * mean + d0 * d0)).epsilon(1e-12));
  }
}

TEST_CASE("Mandel Q") {
  const QuantumState fock1(PureState::fock({1}, HilbertLayout({4})));
  CHECK(mandel_Q(fock1, 0).truncated == doctest::Approx(1.0));
  const QuantumState coh(coherent_state(Complex(0.8, 0.1), 25));
  CHECK(std::abs(mandel_Q(coh, 0).raw) < 1e-12);
  CHECK(mandel_Q(QuantumState(coherent_state(0.0, 4)), 0).truncated == 0.0);
  for (double kt : {0.2, 0.9, 1.3}) {
    CHECK(mandel_Q(converter_pure(kt), 0).truncated == doctest::Approx(std::pow(std::sin(kt), 2)).epsilon(1e-13));
    CHECK(mandel_Q(converter_pure(kt), 1).truncated == doctest::Approx(std::pow(std::cos(kt), 2)).epsilon(1e-13));
  }
}

TEST_CASE("quadrature squeezing") {
  const QuantumState coh(coherent_state(Complex(0.5, -0.4), 25));
  for (double phi : {0.0, 0.4, 2.0}) CHECK(std::abs(quad_squeezing(coh, {phi}, {1.0}, 0.0).raw) < 1e-12);

  const double alpha = std::sqrt(0.5);
  const int dim = default_coherent_dim(alpha);
  CHECK(std::abs(quad_squeezing(QuantumState(kerr_state(alpha, 0.0, dim)), {0.0}, {1.0}, 0.0).raw) < 1e-12);
  for (double tau : {0.1, 0.5, 1.0}) {
    const QuantumState k(kerr_state(alpha, tau, dim));
    CHECK(quadrature_variance(k, {0.0}, {1.0}) == doctest::Approx(kerr_sx(alpha, tau, 0.0)).epsilon(1e-8));
    CHECK(std::abs(quadrature_variance(k, {0.0}, {1.0}) - kerr_sx(alpha, tau, 0.0)) < 1e-8);
  }

  std::mt19937_64 gen(17);
  const HilbertLayout l({6});
  for (int rep = 0; rep < 5; ++rep) {
    const QuantumState s(random_pure(gen, 6, l));
    for (double phi : {0.0, 0.7, 2.5})
      CHECK(std::abs(quadrature_variance(s, {phi}, {}) - dense_quadrature_variance(s, phi)) < 1e-12);
  }
  CHECK_THROWS_AS(quad_squeezing(coh, {0.0, 0.0}, {1.0, 1.0}, 0.0), Error);
}

TEST_CASE("two-mode quadrature") {
  // x = x1 + x2: <:x^2:> = 2 <(a1+ + a2+)(a1 + a2)> when the first moments vanish
  const QuantumState q01(PureState::fock({0, 1}, HilbertLayout::qubits(2)));
  CHECK(quadrature_variance(q01, {0.0, 0.0}, {1.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-14));
  const QuantumState sym(two_qubit_state(0, kS, kS, 0));
  CHECK(quadrature_variance(sym, {0.0, 0.0}, {1.0, 1.0}) == doctest::Approx(4.0).epsilon(1e-14));
  const QuantumState anti(two_qubit_state(0, kS, -kS, 0));
  CHECK(std::abs(quadrature_variance(anti, {0.0, 0.0}, {1.0, 1.0})) < 1e-14);
}

TEST_CASE("principal squeezing") {
  CHECK(std::abs(principal_squeezing(QuantumState(coherent_state(Complex(0.3, 0.9), 30)), 0.0).raw) < 1e-12);
  const double alpha = std::sqrt(0.5);
  const int dim = default_coherent_dim(alpha);
  for (double tau : {0.3, 1.0, 2.0}) {
    const QuantumState k(kerr_state(alpha, tau, dim));
    CHECK(std::abs(principal_variance(k) - kerr_sopt(alpha, tau)) < 1e-8);
    // grid of 64 angles plus golden section around the best one
    const auto f = [&](double phi) { return quadrature_variance(k, {phi}, {1.0}); };
    double best = 0.0;
    double fbest = INFINITY;
    for (int j = 0; j < 64; ++j) {
      const double phi = M_PI * j / 64.0;
      CHECK(principal_variance(k) <= f(phi) + 1e-12);
      if (f(phi) < fbest) fbest = f(phi), best = phi;
    }
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = best - M_PI / 64, hi = best + M_PI / 64;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
      const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
      if (f(x1) <= f(x2)) hi = x2; else lo = x1;
    }
    CHECK(std::abs(principal_variance(k) - f(0.5 * (lo + hi))) < 1e-10);
  }
  CHECK_THROWS_AS(principal_variance(QuantumState(phi_plus())), Error);
}

TEST_CASE("B equals C on two-qubit pure states") {
  std::mt19937_64 gen(31);
  for (int rep = 0; rep < 50; ++rep) {
    const QuantumState s(random_pure(gen, 4, HilbertLayout::qubits(2)));
    CHECK(std::abs(chsh_B(s).truncated - concurrence(s).truncated) < 1e-9);
  }
}

TEST_CASE("concurrence equals negativity on the Werner family") {
  for (double p : {0.0, 0.25, 0.5, 0.8, 1.0}) {
    const QuantumState w = werner_like(p, phi_plus());
    CHECK(std::abs(concurrence(w).truncated - negativity(w).truncated) < 1e-12);
  }
}

TEST_CASE("H > 0 implies N > 0 on random two-qubit states") {
  std::mt19937_64 gen(41);
  int fired = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const QuantumState s = random_two_qubit(gen);
    if (hillery_H(s).truncated > 0.0) {
      ++fired;
      CHECK(negativity(s).truncated > 0.0);
    }
  }
  CHECK(fired > 10);
}

TEST_CASE("truncated witnesses are nonnegative and continuous along the Werner family") {
  const WitnessParams params{0.03, 0.1, {}, {}};
  const std::vector<WitnessId> ids = {WitnessId::C, WitnessId::N, WitnessId::B, WitnessId::H, WitnessId::Hp,
                                      WitnessId::S, WitnessId::D, WitnessId::Q1, WitnessId::Q2};
  std::vector<double> prev;
  for (int k = 0; k <= 1000; ++k) {
    const QuantumState w = werner_like(k / 1000.0, phi_plus());
    std::vector<double> cur;
    for (WitnessId id : ids) {
      const WitnessValue v = evaluate(id, w, params);
      CHECK(v.truncated >= 0.0);
      if (v.truncated > 0.0) CHECK(v.raw > 0.0);
      cur.push_back(id == WitnessId::B ? v.raw : v.truncated);
    }
    // B is compared on its raw value, its truncated form has a square-root onset
    if (!prev.empty())
      for (std::size_t j = 0; j < ids.size(); ++j) CHECK(std::abs(cur[j] - prev[j]) < 0.05);
    prev = cur;
  }
}

TEST_CASE("evaluate dispatch") {
  const WitnessParams params{0.03, 0.1, {}, {}};
  const QuantumState w = werner_like(0.8, phi_plus());
  CHECK(evaluate(WitnessId::S, w, params).threshold == 0.03);
  CHECK(evaluate(WitnessId::C, w, params).id == WitnessId::C);
  CHECK(evaluate(WitnessId::Q2, w, params).id == WitnessId::Q2);
  CHECK_THROWS_AS(evaluate(WitnessId::C, QuantumState(coherent_state(0.0, 3)), params), Error);
}
