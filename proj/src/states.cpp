#include "qwit/states.hpp"

#include <cmath>
#include <sstream>

namespace qwit {

namespace {

// sqrt(n! / (n-k)!)
double sqrt_falling(int n, int k) {
  double f = 1.0;
  for (int j = 0; j < k; ++j) f *= double(n - j);
  return std::sqrt(f);
}

void require_matrix_layout(const ComplexMatrix& rho, const HilbertLayout& layout, const char* who) {
  if (rho.rows() != rho.cols() || rho.rows() != layout.total()) {
    throw Error(Errc::invalid_dimension, std::string(who) + ": matrix size does not match layout");
  }
}

void require_modes(const MonomialMoment& mono, const HilbertLayout& layout) {
  if (mono.modes() != layout.modes()) {
    throw Error(Errc::invalid_argument, "monomial has " + std::to_string(mono.modes()) + " modes, layout has " +
                                            std::to_string(layout.modes()));
  }
}

std::vector<int> decode(int index, const HilbertLayout& layout) {
  std::vector<int> occ(static_cast<std::size_t>(layout.modes()));
  for (int m = layout.modes() - 1; m >= 0; --m) {
    occ[m] = index % layout.dim(m);
    index /= layout.dim(m);
  }
  return occ;
}

int encode(const std::vector<int>& occ, const HilbertLayout& layout) {
  int index = 0;
  for (int m = 0; m < layout.modes(); ++m) index = index * layout.dim(m) + occ[m];
  return index;
}

}  // namespace

// ---------------------------------------------------------------- PureState

PureState::PureState(ComplexVector amplitudes, HilbertLayout layout)
    : amplitudes_(std::move(amplitudes)), layout_(std::move(layout)) {
  if (amplitudes_.size() != layout_.total()) {
    throw Error(Errc::invalid_dimension, "PureState: amplitude count does not match layout");
  }
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-10) {
    throw Error(Errc::invalid_argument, "PureState: amplitudes are not normalised");
  }
}

PureState PureState::normalized(ComplexVector amplitudes, HilbertLayout layout) {
  const double norm = amplitudes.norm();
  if (!(norm > 0)) throw Error(Errc::invalid_argument, "PureState: zero vector");
  amplitudes /= norm;
  return PureState(std::move(amplitudes), std::move(layout));
}

PureState PureState::fock(const std::vector<int>& occupations, const HilbertLayout& layout) {
  if (static_cast<int>(occupations.size()) != layout.modes()) {
    throw Error(Errc::invalid_argument, "fock: occupation count does not match layout");
  }
  for (int m = 0; m < layout.modes(); ++m) {
    if (occupations[m] < 0 || occupations[m] >= layout.dim(m)) {
      throw Error(Errc::truncation, "fock: occupation exceeds truncation of mode " + std::to_string(m));
    }
  }
  ComplexVector v = ComplexVector::Zero(layout.total());
  v(encode(occupations, layout)) = 1.0;
  return PureState(std::move(v), layout);
}

// ------------------------------------------------------------- QuantumState

QuantumState::QuantumState(ComplexMatrix rho, HilbertLayout layout, Check check)
    : rho_(std::move(rho)), layout_(std::move(layout)) {
  require_matrix_layout(rho_, layout_, "QuantumState");
  if (!is_hermitian(rho_, 1e-10)) throw Error(Errc::invalid_argument, "QuantumState: density matrix is not Hermitian");
  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > 1e-9) {
    throw Error(Errc::invalid_argument, "QuantumState: trace " + std::to_string(tr) + " differs from 1");
  }
  if (check == Check::full && min_eigenvalue() < -1e-8) {
    throw Error(Errc::not_psd, "QuantumState: density matrix has a negative eigenvalue");
  }
}

QuantumState::QuantumState(const PureState& psi) : rho_(psi.projector()), layout_(psi.layout()) {}

double QuantumState::min_eigenvalue() const { return eigenvalues_hermitian(rho_)(0); }

// ----------------------------------------------------------- MonomialMoment

MonomialMoment::MonomialMoment(std::vector<ModeExponents> exponents) : exps_(std::move(exponents)) {
  for (const auto& e : exps_) {
    if (e.creation < 0 || e.annihilation < 0) throw Error(Errc::invalid_argument, "negative monomial exponent");
  }
}

MonomialMoment MonomialMoment::identity(int modes) {
  return MonomialMoment(std::vector<ModeExponents>(static_cast<std::size_t>(modes)));
}

MonomialMoment MonomialMoment::single(int modes, int mode, int creation, int annihilation) {
  if (mode < 0 || mode >= modes) throw Error(Errc::invalid_argument, "monomial mode out of range");
  std::vector<ModeExponents> e(static_cast<std::size_t>(modes));
  e[mode] = {creation, annihilation};
  return MonomialMoment(std::move(e));
}

bool MonomialMoment::is_identity() const noexcept {
  for (const auto& e : exps_)
    if (e.creation != 0 || e.annihilation != 0) return false;
  return true;
}

MonomialMoment MonomialMoment::adjoint() const {
  auto e = exps_;
  for (auto& x : e) std::swap(x.creation, x.annihilation);
  return MonomialMoment(std::move(e));
}

MonomialMoment MonomialMoment::normal_product(const MonomialMoment& other) const {
  if (other.modes() != modes()) throw Error(Errc::invalid_argument, "normal_product: mode count mismatch");
  auto e = exps_;
  for (int m = 0; m < modes(); ++m) {
    e[m].creation += other.exps_[m].creation;
    e[m].annihilation += other.exps_[m].annihilation;
  }
  return MonomialMoment(std::move(e));
}

MonomialMoment MonomialMoment::transposed(int mode) const {
  auto e = exps_;
  std::swap(e.at(mode).creation, e.at(mode).annihilation);
  return MonomialMoment(std::move(e));
}

std::string MonomialMoment::to_string() const {
  std::ostringstream os;
  for (int m = 0; m < modes(); ++m) {
    for (int k = 0; k < exps_[m].creation; ++k) os << 'a' << (m + 1) << '+';
    for (int k = 0; k < exps_[m].annihilation; ++k) os << 'a' << (m + 1);
  }
  const std::string s = os.str();
  return s.empty() ? "1" : s;
}

void accumulate(NormalPolynomial& poly, const MonomialMoment& mono, Complex coeff) {
  auto [it, inserted] = poly.try_emplace(mono, coeff);
  if (!inserted) it->second += coeff;
}

// ------------------------------------------------------------------ moments

ComplexMatrix monomial_operator(const MonomialMoment& mono, const HilbertLayout& layout) {
  require_modes(mono, layout);
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int m = 0; m < layout.modes(); ++m) {
    const int d = layout.dim(m);
    ComplexMatrix op = ComplexMatrix::Identity(d, d);
    const ComplexMatrix a = annihilation(d);
    for (int k = 0; k < mono[m].annihilation; ++k) op = a * op;
    for (int k = 0; k < mono[m].creation; ++k) op = a.adjoint() * op;
    out = kron<double>(out, op);
  }
  return out;
}

Complex trace_moment(const ComplexMatrix& rho, const HilbertLayout& layout, const MonomialMoment& mono) {
  require_matrix_layout(rho, layout, "moment");
  require_modes(mono, layout);
  const int total = layout.total();
  const int modes = layout.modes();
  std::vector<int> stride(static_cast<std::size_t>(modes));
  for (int m = 0; m < modes; ++m) stride[m] = layout.stride(m);

  Complex sum = 0;
  std::vector<int> occ(static_cast<std::size_t>(modes), 0);
  for (int j = 0; j < total; ++j) {
    // occ tracks the multi-index of j (last mode fastest)
    if (j > 0) {
      for (int m = modes - 1; m >= 0; --m) {
        if (++occ[m] < layout.dim(m)) break;
        occ[m] = 0;
      }
    }
    double coef = 1.0;
    int i = 0;
    bool inside = true;
    for (int m = 0; m < modes && inside; ++m) {
      const int n = occ[m];
      const int p = mono[m].creation;
      const int q = mono[m].annihilation;
      if (n < q) {
        inside = false;
        break;
      }
      const int lowered = n - q;
      const int raised = lowered + p;
      if (raised >= layout.dim(m)) {
        inside = false;
        break;
      }
      coef *= sqrt_falling(n, q) * sqrt_falling(raised, p);
      i += raised * stride[m];
    }
    if (inside) sum += coef * rho(j, i);
  }
  return sum;
}

Complex moment(const QuantumState& state, const MonomialMoment& mono) {
  return trace_moment(state.rho(), state.layout(), mono);
}

Complex trace_expect(const ComplexMatrix& rho, const HilbertLayout& layout, const NormalPolynomial& poly) {
  Complex sum = 0;
  for (const auto& [mono, coeff] : poly) sum += coeff * trace_moment(rho, layout, mono);
  return sum;
}

Complex expect(const QuantumState& state, const NormalPolynomial& poly) {
  return trace_expect(state.rho(), state.layout(), poly);
}

Complex expect(const QuantumState& state, const ComplexMatrix& op) {
  if (op.rows() != state.dim() || op.cols() != state.dim()) {
    throw Error(Errc::invalid_dimension, "expect: operator size does not match state");
  }
  return (state.rho() * op).trace();
}

// ------------------------------------------------------------------- states

int default_coherent_dim(Complex alpha0) {
  return static_cast<int>(std::ceil(5.0 * std::max(1.0, std::norm(alpha0)))) + 15;
}

namespace {

void require_small_tail(Complex alpha0, int dim) {
  if (dim < 2) throw Error(Errc::invalid_dimension, "coherent state needs dim >= 2");
  const double a2 = std::norm(alpha0);
  if (a2 == 0.0) return;
  // |alpha|^(2 dim) / dim! < 1e-20
  const double log_tail = dim * std::log(a2) - std::lgamma(dim + 1.0);
  if (!(log_tail < std::log(1e-20))) {
    throw Error(Errc::truncation, "coherent state with |alpha|^2=" + std::to_string(a2) +
                                      " is not representable at dim " + std::to_string(dim));
  }
}

ComplexVector coherent_amplitudes(Complex alpha0, int dim) {
  ComplexVector c(dim);
  c(0) = std::exp(-0.5 * std::norm(alpha0));
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha0 / std::sqrt(double(n));
  return c;
}

}  // namespace

PureState coherent_state(Complex alpha0, int dim) {
  require_small_tail(alpha0, dim);
  return PureState::normalized(coherent_amplitudes(alpha0, dim), HilbertLayout({dim}));
}

PureState kerr_state(Complex alpha0, double tau, int dim) {
  require_small_tail(alpha0, dim);
  ComplexVector c = coherent_amplitudes(alpha0, dim);
  for (int n = 2; n < dim; ++n) c(n) *= std::polar(1.0, -0.5 * double(n) * double(n - 1) * tau);
  return PureState::normalized(std::move(c), HilbertLayout({dim}));
}

QuantumState werner_like(double p, const PureState& psi) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::invalid_argument, "werner_like: p must lie in [0,1]");
  if (psi.layout() != HilbertLayout::qubits(2)) {
    throw Error(Errc::invalid_dimension, "werner_like: state must live on a 2x2 layout");
  }
  ComplexMatrix rho = p * psi.projector() + ComplexMatrix::Identity(4, 4) * ((1.0 - p) / 4.0);
  return QuantumState(std::move(rho), psi.layout());
}

PureState two_qubit_state(Complex c00, Complex c01, Complex c10, Complex c11) {
  ComplexVector v(4);
  v << c00, c01, c10, c11;
  return PureState::normalized(std::move(v), HilbertLayout::qubits(2));
}

namespace {

std::vector<int> embedding_map(const HilbertLayout& from, const HilbertLayout& to) {
  if (from.modes() != to.modes()) throw Error(Errc::invalid_dimension, "embed_state: mode count mismatch");
  for (int m = 0; m < from.modes(); ++m) {
    if (to.dim(m) < from.dim(m)) throw Error(Errc::invalid_dimension, "embed_state: target layout is smaller");
  }
  std::vector<int> map(static_cast<std::size_t>(from.total()));
  for (int i = 0; i < from.total(); ++i) map[i] = encode(decode(i, from), to);
  return map;
}

}  // namespace

QuantumState embed_state(const QuantumState& state, const HilbertLayout& target) {
  const auto map = embedding_map(state.layout(), target);
  ComplexMatrix rho = ComplexMatrix::Zero(target.total(), target.total());
  for (int i = 0; i < state.dim(); ++i)
    for (int j = 0; j < state.dim(); ++j) rho(map[i], map[j]) = state.rho()(i, j);
  return QuantumState(std::move(rho), target, QuantumState::Check::structural);
}

PureState embed_state(const PureState& state, const HilbertLayout& target) {
  const auto map = embedding_map(state.layout(), target);
  ComplexVector v = ComplexVector::Zero(target.total());
  for (int i = 0; i < state.layout().total(); ++i) v(map[i]) = state.amplitudes()(i);
  return PureState(std::move(v), target);
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, const HilbertLayout& layout, int mode) {
  require_matrix_layout(rho, layout, "partial_transpose");
  if (mode < 0 || mode >= layout.modes()) throw Error(Errc::invalid_argument, "partial_transpose: mode out of range");
  const int n = layout.total();
  const int s = layout.stride(mode);
  ComplexMatrix out(n, n);
  for (int i = 0; i < n; ++i) {
    const int ni = layout.occupation(i, mode);
    for (int j = 0; j < n; ++j) {
      const int nj = layout.occupation(j, mode);
      out(i, j) = rho(i + (nj - ni) * s, j + (ni - nj) * s);
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const QuantumState& state, int mode) {
  return partial_transpose(state.rho(), state.layout(), mode);
}

QuantumState partial_trace_keep(const QuantumState& state, int mode) {
  const HilbertLayout& layout = state.layout();
  if (mode < 0 || mode >= layout.modes()) throw Error(Errc::invalid_argument, "partial_trace: mode out of range");
  const int d = layout.dim(mode);
  const int s = layout.stride(mode);
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < state.dim(); ++i) {
    const int ni = layout.occupation(i, mode);
    for (int nj = 0; nj < d; ++nj) {
      out(ni, nj) += state.rho()(i, i + (nj - ni) * s);
    }
  }
  return QuantumState(std::move(out), HilbertLayout({d}), QuantumState::Check::structural);
}

QuantumState qubit_project(const QuantumState& state) {
  const HilbertLayout& layout = state.layout();
  if (layout.modes() != 2) throw Error(Errc::invalid_dimension, "qubit_project: state must have two modes");
  if (layout == HilbertLayout::qubits(2)) return state;
  double outside = 0.0;
  for (int i = 0; i < state.dim(); ++i) {
    if (layout.occupation(i, 0) > 1 || layout.occupation(i, 1) > 1) outside += state.rho()(i, i).real();
  }
  if (outside > 1e-9) {
    throw Error(Errc::leakage, "qubit_project: population " + std::to_string(outside) + " outside the qubit block");
  }
  int idx[4];
  for (int n1 = 0; n1 < 2; ++n1)
    for (int n2 = 0; n2 < 2; ++n2) idx[2 * n1 + n2] = n1 * layout.stride(0) + n2 * layout.stride(1);
  ComplexMatrix rho(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rho(i, j) = state.rho()(idx[i], idx[j]);
  rho /= rho.trace().real();
  return QuantumState(std::move(rho), HilbertLayout::qubits(2));
}

double top_level_population(const QuantumState& state) {
  const HilbertLayout& layout = state.layout();
  double pop = 0.0;
  for (int i = 0; i < state.dim(); ++i) {
    for (int m = 0; m < layout.modes(); ++m) {
      if (layout.occupation(i, m) == layout.dim(m) - 1) {
        pop += state.rho()(i, i).real();
        break;
      }
    }
  }
  return pop;
}

}  // namespace qwit
