#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qwit/states.hpp"

using namespace qwit;

namespace {

const HilbertLayout kQubits = HilbertLayout::qubits(2);

QuantumState random_mixed(const HilbertLayout& layout, int rank, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  ComplexMatrix a(layout.total(), rank);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = Complex(g(gen), g(gen));
  ComplexMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return QuantumState(rho, layout);
}

MonomialMoment random_monomial(int modes, int max_exp, std::mt19937_64& gen) {
  std::uniform_int_distribution<int> e(0, max_exp);
  std::vector<ModeExponents> ex(modes);
  for (auto& m : ex) m = {e(gen), e(gen)};
  return MonomialMoment(ex);
}

}  // namespace

TEST_CASE("pure state construction") {
  CHECK_THROWS_AS(PureState(ComplexVector::Ones(4), kQubits), Error);
  CHECK_THROWS_AS(PureState(ComplexVector::Zero(3), kQubits), Error);
  CHECK_THROWS_AS(PureState::normalized(ComplexVector::Zero(4), kQubits), Error);
  const PureState n = PureState::normalized(ComplexVector::Ones(4), kQubits);
  CHECK(n.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-15));

  const PureState f = PureState::fock({1, 0}, HilbertLayout({3, 2}));
  CHECK(f.amplitudes()(2) == Complex(1.0));
  CHECK_THROWS_AS(PureState::fock({3, 0}, HilbertLayout({3, 2})), Error);
}

TEST_CASE("density matrix checks") {
  ComplexMatrix rho = ComplexMatrix::Identity(4, 4) / 4.0;
  CHECK_NOTHROW(QuantumState(rho, kQubits));
  CHECK_THROWS_AS(QuantumState(rho * 2.0, kQubits), Error);
  ComplexMatrix bad = rho;
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(QuantumState(bad, kQubits), Error);
  ComplexMatrix neg = ComplexMatrix::Zero(4, 4);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(QuantumState(neg, kQubits), Error);
  CHECK_NOTHROW(QuantumState(neg, kQubits, QuantumState::Check::structural));
  CHECK_THROWS_AS(QuantumState(rho, HilbertLayout::qubits(3)), Error);
}

TEST_CASE("moment examples") {
  const HilbertLayout one({4});
  const QuantumState fock1(PureState::fock({1}, one));
  CHECK(moment(fock1, MonomialMoment::single(1, 0, 1, 1)).real() == doctest::Approx(1.0));

  const PureState psi0 = two_qubit_state(0, 1.0 / std::sqrt(2.0), Complex(0, -1.0 / std::sqrt(2.0)), 0);
  // a1 a2+ is already normally ordered as a2+ a1
  const Complex m = moment(QuantumState(psi0), MonomialMoment({{0, 1}, {1, 0}}));
  CHECK(std::abs(m) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(m - Complex(0, -0.5)) < 1e-14);  // conj(c01) c10

  const Complex alpha(0.6, -0.3);
  const QuantumState coh(coherent_state(alpha, default_coherent_dim(alpha)));
  CHECK(std::abs(moment(coh, MonomialMoment::single(1, 0, 0, 2)) - alpha * alpha) < 1e-12);
  CHECK(std::abs(moment(coh, MonomialMoment::single(1, 0, 1, 1)) - std::norm(alpha)) < 1e-12);
}

TEST_CASE("trace_moment agrees with the dense monomial operator") {
  std::mt19937_64 gen(5);
  for (const HilbertLayout& l : {HilbertLayout({5}), HilbertLayout({3, 4}), HilbertLayout({2, 2}), HilbertLayout({2, 3, 2})}) {
    const QuantumState s = random_mixed(l, 2, gen);
    for (int rep = 0; rep < 20; ++rep) {
      const MonomialMoment mono = random_monomial(l.modes(), 3, gen);
      const Complex dense = (s.rho() * monomial_operator(mono, l)).trace();
      CHECK(std::abs(moment(s, mono) - dense) < 1e-13);
      // Hermiticity of moment pairs
      CHECK(std::abs(moment(s, mono) - std::conj(moment(s, mono.adjoint()))) < 1e-13);
    }
  }
}

TEST_CASE("exponents beyond the cutoff give zero") {
  const QuantumState s(PureState::fock({2}, HilbertLayout({3})));
  CHECK(moment(s, MonomialMoment::single(1, 0, 3, 3)) == Complex(0.0));
  CHECK(moment(s, MonomialMoment::single(1, 0, 2, 2)).real() == doctest::Approx(2.0));
}

TEST_CASE("monomial algebra") {
  const MonomialMoment a({{1, 2}, {0, 1}});
  CHECK(a.adjoint() == MonomialMoment({{2, 1}, {1, 0}}));
  CHECK(a.normal_product(a.adjoint()) == MonomialMoment({{3, 3}, {1, 1}}));
  CHECK(a.transposed(1) == MonomialMoment({{1, 2}, {1, 0}}));
  CHECK(MonomialMoment::identity(2).is_identity());
  CHECK_FALSE(a.is_identity());
  CHECK_THROWS_AS(a.normal_product(MonomialMoment::identity(1)), Error);
}

TEST_CASE("coherent and Kerr states") {
  const PureState vac = coherent_state(0.0, 6);
  CHECK(std::abs(vac.amplitudes()(0) - Complex(1.0)) < 1e-15);
  CHECK(vac.amplitudes().tail(5).norm() == 0.0);
  CHECK(default_coherent_dim(Complex(0.5, 0)) == 20);
  CHECK(default_coherent_dim(Complex(2.0, 0)) == 35);
  CHECK_THROWS_AS(coherent_state(Complex(std::sqrt(2.0), 0), 5), Error);

  const Complex alpha(std::sqrt(0.5), 0.0);
  const int dim = default_coherent_dim(alpha);
  const PureState c = coherent_state(alpha, dim);
  CHECK((kerr_state(alpha, 0.0, dim).amplitudes() - c.amplitudes()).norm() < 1e-15);
  CHECK((kerr_state(alpha, 2.0 * M_PI, dim).amplitudes() - c.amplitudes()).norm() < 1e-12);
  for (double tau : {0.3, 1.0, 2.7}) {
    const PureState k = kerr_state(alpha, tau, dim);
    CHECK((k.amplitudes().cwiseAbs() - c.amplitudes().cwiseAbs()).cwiseAbs().maxCoeff() < 1e-15);
    for (int n = 0; n < dim; ++n) {
      const Complex expected = c.amplitudes()(n) * std::polar(1.0, -0.5 * n * (n - 1) * tau);
      CHECK(std::abs(k.amplitudes()(n) - expected) < 1e-15);
    }
  }
}

TEST_CASE("werner_like") {
  const PureState bell = two_qubit_state(1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0));
  CHECK(max_abs(werner_like(1.0, bell).rho() - bell.projector()) < 1e-15);
  CHECK(max_abs(werner_like(0.0, bell).rho() - ComplexMatrix::Identity(4, 4) / 4.0) < 1e-15);
  const QuantumState w = werner_like(0.8, bell);
  CHECK(w.rho()(0, 3).real() == doctest::Approx(0.4));
  CHECK(w.rho()(1, 1).real() == doctest::Approx(0.05));
  CHECK_THROWS_AS(werner_like(1.2, bell), Error);
  CHECK_THROWS_AS(werner_like(0.5, PureState::fock({0}, HilbertLayout({4}))), Error);
}

TEST_CASE("partial transpose") {
  std::mt19937_64 gen(9);
  const QuantumState r1 = random_mixed(HilbertLayout({3}), 2, gen);
  const QuantumState r2 = random_mixed(HilbertLayout({2}), 2, gen);
  const HilbertLayout l({3, 2});
  const QuantumState prod(kron<double>(r1.rho(), r2.rho()), l);
  const ComplexMatrix pt = partial_transpose(prod, 1);
  CHECK(max_abs(pt - kron<double>(r1.rho(), r2.rho().transpose())) < 1e-15);
  CHECK(eigenvalues_hermitian(pt)(0) > -1e-12);
  CHECK(max_abs(partial_transpose(prod, 0) - kron<double>(r1.rho().transpose(), r2.rho())) < 1e-15);

  const QuantumState s = random_mixed(HilbertLayout({3, 3}), 3, gen);
  for (int mode : {0, 1}) {
    const ComplexMatrix p = partial_transpose(s, mode);
    CHECK(std::abs(p.trace() - Complex(1.0)) < 1e-14);
    CHECK(hermiticity_defect(p) < 1e-15);
    CHECK(max_abs(partial_transpose(p, s.layout(), mode) - s.rho()) == 0.0);
  }
  CHECK(max_abs(partial_transpose(partial_transpose(s, 0), s.layout(), 1) - s.rho().transpose()) < 1e-15);
}

TEST_CASE("partial trace") {
  std::mt19937_64 gen(13);
  const QuantumState r1 = random_mixed(HilbertLayout({3}), 2, gen);
  const QuantumState r2 = random_mixed(HilbertLayout({4}), 3, gen);
  const QuantumState prod(kron<double>(r1.rho(), r2.rho()), HilbertLayout({3, 4}));
  CHECK(max_abs(partial_trace_keep(prod, 0).rho() - r1.rho()) < 1e-15);
  CHECK(max_abs(partial_trace_keep(prod, 1).rho() - r2.rho()) < 1e-15);
}

TEST_CASE("embedding and qubit projection") {
  const HilbertLayout big({3, 3});
  const PureState q01 = PureState::fock({0, 1}, kQubits);
  const PureState e01 = embed_state(q01, big);
  CHECK(e01.amplitudes()(1) == Complex(1.0));
  const QuantumState back = qubit_project(QuantumState(e01));
  CHECK(back.layout() == kQubits);
  CHECK(max_abs(back.rho() - q01.projector()) == 0.0);

  ComplexVector v = ComplexVector::Zero(9);
  v(1) = std::sqrt(0.9);
  v(2) = std::sqrt(0.1);  // |0,2>
  CHECK_THROWS_AS(qubit_project(QuantumState(PureState(v, big))), Error);
  CHECK(top_level_population(QuantumState(PureState(v, big))) == doctest::Approx(0.1));

  ComplexVector w = ComplexVector::Zero(9);
  w(1) = std::sqrt(1.0 - 1e-12);
  w(2) = std::sqrt(1e-12);
  const QuantumState tiny = qubit_project(QuantumState(PureState(w, big)));
  CHECK(tiny.rho()(1, 1).real() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(embed_state(PureState::fock({0, 0}, big), kQubits), Error);
}
