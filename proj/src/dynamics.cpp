#include "qwit/dynamics.hpp"

#include <cmath>
#include <exception>
#include <random>
#include <thread>

namespace qwit {

namespace {

ComplexMatrix embed_op(const ComplexMatrix& op, int mode, const HilbertLayout& layout) {
  return embed<double>(op, mode, layout);
}

QuantumState into_layout(const QuantumState& state, const HilbertLayout& layout) {
  if (state.layout() == layout) return state;
  return embed_state(state, layout);
}

PureState into_layout(const PureState& state, const HilbertLayout& layout) {
  if (state.layout() == layout) return state;
  return embed_state(state, layout);
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& gen) { return double(gen() >> 11) * 0x1.0p-53; }

// exp(m) by Taylor series; m is small (norm well below 1) here.
ComplexMatrix taylor_exp(const ComplexMatrix& m) {
  const Eigen::Index n = m.rows();
  ComplexMatrix out = ComplexMatrix::Identity(n, n);
  ComplexMatrix term = ComplexMatrix::Identity(n, n);
  for (int k = 1; k < 60; ++k) {
    term = (term * m / double(k)).eval();
    out += term;
    if (max_abs(term) < 1e-18 * max_abs(out)) break;
  }
  return out;
}

void check_leakage(const ModelConfig& cfg, const QuantumState& state) {
  if (!cfg.thermal()) return;
  const double top = top_level_population(state);
  if (top > 1e-6) {
    throw Error(Errc::truncation, "population " + std::to_string(top) + " reached the Fock cutoff; raise dim");
  }
}

}  // namespace

// ------------------------------------------------------------------- config

const char* to_string(Model model) noexcept {
  switch (model) {
    case Model::damped_werner: return "damped-werner";
    case Model::freq_converter_pure: return "freq-converter-pure";
    case Model::freq_converter_mixed: return "freq-converter-mixed";
    case Model::kerr: return "kerr";
  }
  return "?";
}

Model parse_model(std::string_view name) {
  for (Model m : {Model::damped_werner, Model::freq_converter_pure, Model::freq_converter_mixed, Model::kerr}) {
    if (name == to_string(m)) return m;
  }
  throw Error(Errc::parse, "unknown model '" + std::string(name) + "'");
}

const char* to_string(Path path) noexcept {
  switch (path) {
    case Path::analytic: return "analytic";
    case Path::lindblad: return "lindblad";
    case Path::mcwf: return "mcwf";
  }
  return "?";
}

Path parse_path(std::string_view name) {
  for (Path p : {Path::analytic, Path::lindblad, Path::mcwf}) {
    if (name == to_string(p)) return p;
  }
  throw Error(Errc::parse, "unknown path '" + std::string(name) + "'");
}

void ModelConfig::validate() const {
  for (int k = 0; k < 2; ++k) {
    if (!(gamma[k] >= 0.0)) throw Error(Errc::invalid_argument, "damping rates must be >= 0");
    if (!(nbar[k] >= 0.0)) throw Error(Errc::invalid_argument, "thermal photon numbers must be >= 0");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::invalid_argument, "p must lie in [0,1]");
  if (!(kappa >= 0.0)) throw Error(Errc::invalid_argument, "kappa must be >= 0");
  if (!(s0 >= 0.0) || !(d0 >= 0.0)) throw Error(Errc::invalid_argument, "thresholds must be >= 0");
  if (!dims.empty() && static_cast<int>(dims.size()) != modes()) {
    throw Error(Errc::invalid_argument, "dim lists " + std::to_string(dims.size()) + " entries for a " +
                                            std::to_string(modes()) + "-mode model");
  }
  (void)layout();
}

HilbertLayout ModelConfig::layout() const {
  if (!dims.empty()) return HilbertLayout(dims);
  if (model == Model::kerr) return HilbertLayout({default_coherent_dim(alpha0)});
  return HilbertLayout::uniform(2, thermal() ? 8 : 2);
}

WitnessParams ModelConfig::witness_params() const {
  WitnessParams w;
  w.s0 = s0;
  w.d0 = d0;
  w.phis.assign(static_cast<std::size_t>(modes()), phi);
  w.coeffs.assign(static_cast<std::size_t>(modes()), 1.0);
  return w;
}

bool ModelConfig::damped() const noexcept {
  const int m = modes();
  for (int k = 0; k < m; ++k)
    if (gamma[k] > 0.0) return true;
  return false;
}

bool ModelConfig::thermal() const noexcept {
  const int m = modes();
  for (int k = 0; k < m; ++k)
    if (gamma[k] > 0.0 && nbar[k] > 0.0) return true;
  return false;
}

void McwfConfig::validate() const {
  if (n_traj < 1) throw Error(Errc::invalid_argument, "n_traj must be >= 1");
  if (!(dt > 0.0)) throw Error(Errc::invalid_argument, "dt must be > 0");
}

std::vector<double> uniform_grid(double t_max, int n_samples) {
  if (n_samples < 2) throw Error(Errc::invalid_argument, "n_samples must be >= 2");
  if (!(t_max > 0.0)) throw Error(Errc::invalid_argument, "t_max must be > 0");
  std::vector<double> t(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) t[i] = t_max * double(i) / double(n_samples - 1);
  return t;
}

double grid_step(const std::vector<double>& times) {
  if (times.size() < 2) throw Error(Errc::non_uniform_grid, "grid needs at least two samples");
  const double h = (times.back() - times.front()) / double(times.size() - 1);
  if (!(h > 0.0)) throw Error(Errc::non_uniform_grid, "grid is not increasing");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw Error(Errc::non_uniform_grid, "grid spacing is not uniform at sample " + std::to_string(i));
    }
  }
  return h;
}

int substeps(double step, double dt) {
  if (!(dt > 0.0)) throw Error(Errc::invalid_argument, "dt must be > 0");
  return std::max(1, static_cast<int>(std::lround(step / dt)));
}

// ------------------------------------------------------------ operators

ComplexMatrix hamiltonian(const ModelConfig& cfg, const HilbertLayout& layout) {
  const int n = layout.total();
  switch (cfg.model) {
    case Model::damped_werner: return ComplexMatrix::Zero(n, n);
    case Model::freq_converter_pure:
    case Model::freq_converter_mixed: {
      const ComplexMatrix a1 = embed_op(annihilation(layout.dim(0)), 0, layout);
      const ComplexMatrix a2 = embed_op(annihilation(layout.dim(1)), 1, layout);
      const ComplexMatrix x = a1.adjoint() * a2;
      return cfg.kappa * (x + x.adjoint());
    }
    case Model::kerr: {
      ComplexMatrix h = ComplexMatrix::Zero(n, n);
      for (int k = 0; k < n; ++k) h(k, k) = 0.5 * cfg.kappa * double(k) * double(k - 1);
      return h;
    }
  }
  return ComplexMatrix::Zero(n, n);
}

std::vector<ComplexMatrix> collapse_operators(const ModelConfig& cfg, const HilbertLayout& layout) {
  std::vector<ComplexMatrix> out;
  for (int k = 0; k < layout.modes(); ++k) {
    const double g = cfg.gamma[k];
    if (g <= 0.0) continue;
    const ComplexMatrix a = embed_op(annihilation(layout.dim(k)), k, layout);
    out.push_back(std::sqrt(g * (cfg.nbar[k] + 1.0)) * a);
    if (cfg.nbar[k] > 0.0) out.push_back(std::sqrt(g * cfg.nbar[k]) * a.adjoint());
  }
  return out;
}

// ----------------------------------------------------------- initial states

PureState bell_phi_plus() { return two_qubit_state(1.0, 0.0, 0.0, 1.0); }

PureState bell_psi_zero() { return two_qubit_state(0.0, 1.0, Complex(0.0, -1.0), 0.0); }

PureMixture werner_mixture(double p, const PureState& psi) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::invalid_argument, "werner_mixture: p must lie in [0,1]");
  PureMixture out;
  if (p > 0.0) out.emplace_back(p, psi);
  if (p < 1.0) {
    for (int k = 0; k < 4; ++k) out.emplace_back((1.0 - p) / 4.0, PureState::fock({k / 2, k % 2}, psi.layout()));
  }
  return out;
}

QuantumState initial_state(const ModelConfig& cfg) {
  const HilbertLayout layout = cfg.layout();
  switch (cfg.model) {
    case Model::damped_werner: return into_layout(werner_like(cfg.p, bell_phi_plus()), layout);
    case Model::freq_converter_pure: return QuantumState(PureState::fock({0, 1}, layout));
    case Model::freq_converter_mixed: return into_layout(werner_like(cfg.p, bell_psi_zero()), layout);
    case Model::kerr: return QuantumState(coherent_state(cfg.alpha0, layout.dim(0)));
  }
  throw Error(Errc::invalid_argument, "unknown model");
}

PureMixture initial_mixture(const ModelConfig& cfg) {
  const HilbertLayout layout = cfg.layout();
  PureMixture mix;
  switch (cfg.model) {
    case Model::damped_werner: mix = werner_mixture(cfg.p, bell_phi_plus()); break;
    case Model::freq_converter_mixed: mix = werner_mixture(cfg.p, bell_psi_zero()); break;
    case Model::freq_converter_pure: mix.emplace_back(1.0, PureState::fock({0, 1}, layout)); break;
    case Model::kerr: mix.emplace_back(1.0, coherent_state(cfg.alpha0, layout.dim(0))); break;
  }
  for (auto& [w, psi] : mix) psi = into_layout(psi, layout);
  return mix;
}

// ------------------------------------------------------------- closed forms

QuantumState analytic_damped_werner(const ModelConfig& cfg, double t) {
  if (cfg.model != Model::damped_werner) throw Error(Errc::unsupported, "analytic_damped_werner: wrong model");
  if (cfg.nbar[0] != 0.0 || cfg.nbar[1] != 0.0) {
    throw Error(Errc::unsupported, "closed-form damped evolution exists only for zero temperature");
  }
  const double g1 = std::exp(-cfg.gamma[0] * t);
  const double g2 = std::exp(-cfg.gamma[1] * t);
  const double p = cfg.p;
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  rho(0, 0) = (2.0 - g1) * (2.0 - g2) + p * g1 * g2;
  rho(1, 1) = g2 * (2.0 - (1.0 + p) * g1);
  rho(2, 2) = g1 * (2.0 - (1.0 + p) * g2);
  rho(3, 3) = (1.0 + p) * g1 * g2;
  rho(0, 3) = rho(3, 0) = 2.0 * p * std::sqrt(g1 * g2);
  rho /= 4.0;
  return into_layout(QuantumState(std::move(rho), HilbertLayout::qubits(2)), cfg.layout());
}

PureState analytic_freq_converter_pure(double kappa, double t) {
  const double c = std::cos(kappa * t);
  const double s = std::sin(kappa * t);
  return two_qubit_state(0.0, c, Complex(0.0, -s), 0.0);
}

QuantumState analytic_freq_converter_mixed(double kappa, double p, double t) {
  const double c = std::cos(kappa * t);
  const double s = std::sin(kappa * t);
  const PureState psi = two_qubit_state(0.0, c - s, Complex(0.0, -(c + s)), 0.0);
  return werner_like(p, psi);
}

KerrSqueezing analytic_kerr_witnesses(Complex alpha0, double phi, double tau) {
  const double a2 = std::norm(alpha0);
  const double phi0 = a2 > 0.0 ? std::arg(alpha0) : 0.0;
  // The closed form is written for x = a e^{-i theta} + h.c.; here theta = -phi.
  const double shift = 2.0 * (-phi - phi0);
  auto tau_kl = [&](int k, int l) { return k * a2 * std::sin(l * tau) + shift; };
  auto f_kl = [&](int k, int l) { return std::exp(k * a2 * (std::cos(l * tau) - 1.0)); };
  KerrSqueezing out;
  out.s_xphi = 2.0 * a2 * (1.0 + f_kl(1, 2) * std::cos(tau_kl(1, 2) + tau) - f_kl(2, 1) * (std::cos(tau_kl(2, 1)) + 1.0));
  const double tau_p = tau_kl(1, 2) - tau_kl(2, 1) + tau;
  const double radicand = f_kl(2, 2) + f_kl(4, 1) - 2.0 * f_kl(1, 2) * f_kl(2, 1) * std::cos(tau_p);
  out.s_opt = 2.0 * a2 * (1.0 - f_kl(2, 1) - std::sqrt(std::max(0.0, radicand)));
  return out;
}

bool analytic_available(const ModelConfig& cfg) {
  switch (cfg.model) {
    case Model::damped_werner: return !cfg.thermal();
    default: return !cfg.damped();
  }
}

QuantumState analytic_state(const ModelConfig& cfg, double t) {
  if (!analytic_available(cfg)) {
    throw Error(Errc::unsupported, std::string("no closed form for ") + to_string(cfg.model) +
                                       (cfg.model == Model::damped_werner ? " at nonzero temperature" : " with damping"));
  }
  switch (cfg.model) {
    case Model::damped_werner: return analytic_damped_werner(cfg, t);
    case Model::freq_converter_pure:
      return into_layout(QuantumState(analytic_freq_converter_pure(cfg.kappa, t)), cfg.layout());
    case Model::freq_converter_mixed:
      return into_layout(analytic_freq_converter_mixed(cfg.kappa, cfg.p, t), cfg.layout());
    case Model::kerr: return QuantumState(kerr_state(cfg.alpha0, cfg.kappa * t, cfg.layout().dim(0)));
  }
  throw Error(Errc::invalid_argument, "unknown model");
}

WitnessValue analytic_witness(const ModelConfig& cfg, WitnessId id, double t) {
  auto plain = [&](double raw, double threshold = 0.0) { return WitnessValue{id, raw, std::max(0.0, raw), threshold}; };
  auto b_value = [&](double raw) { return WitnessValue{id, raw, std::sqrt(std::max(0.0, raw)), 0.0}; };
  const double p = cfg.p;
  if (!analytic_available(cfg)) analytic_state(cfg, t);  // throws

  switch (cfg.model) {
    case Model::damped_werner: {
      const double g1 = std::exp(-cfg.gamma[0] * t);
      const double g2 = std::exp(-cfg.gamma[1] * t);
      switch (id) {
        case WitnessId::C:
          return plain(0.5 * std::sqrt(g1 * g2) *
                       (2.0 * p - std::sqrt((2.0 - (1.0 + p) * g1) * (2.0 - (1.0 + p) * g2))));
        case WitnessId::B: return b_value(2.0 * p * p * g1 * g2 - 1.0);
        case WitnessId::S: return plain(0.25 * (g1 * g1 + g2 * g2 + 2.0 * p * g1 * g2) - cfg.s0, cfg.s0);
        case WitnessId::D:
          return plain(0.5 * g1 * g2 * (1.0 + p) - cfg.d0 * cfg.d0 - cfg.d0 * (g1 - g2), cfg.d0);
        default: break;
      }
      break;
    }
    case Model::freq_converter_pure: {
      const double x = 2.0 * cfg.kappa * t;
      switch (id) {
        case WitnessId::C: return plain(std::abs(std::sin(x)));
        case WitnessId::B: return b_value(std::sin(x) * std::sin(x));
        case WitnessId::H: return plain(0.25 * std::sin(x) * std::sin(x));
        case WitnessId::S: return plain(std::cos(x) * std::cos(x) - cfg.s0, cfg.s0);
        case WitnessId::D: return plain(cfg.d0 * (2.0 * std::cos(x) - cfg.d0), cfg.d0);
        case WitnessId::Q1: return plain(std::pow(std::sin(cfg.kappa * t), 2));
        case WitnessId::Q2: return plain(std::pow(std::cos(cfg.kappa * t), 2));
        default: break;
      }
      break;
    }
    case Model::freq_converter_mixed: {
      const double x = 2.0 * cfg.kappa * t;
      const double c = std::cos(x);
      switch (id) {
        case WitnessId::C: return plain(p * std::abs(c) - 0.5 * (1.0 - p));
        case WitnessId::B: return b_value(p * p * (1.0 + c * c) - 1.0);
        case WitnessId::H: return plain(0.25 * ((p * c) * (p * c) - (1.0 - p)));
        case WitnessId::S: return plain(0.5 * (1.0 - p) + p * p * std::sin(x) * std::sin(x) - cfg.s0, cfg.s0);
        case WitnessId::D:
          return plain(0.5 * (1.0 - p) - 2.0 * cfg.d0 * p * std::sin(x) - cfg.d0 * cfg.d0, cfg.d0);
        default: break;
      }
      break;
    }
    case Model::kerr: {
      const KerrSqueezing k = analytic_kerr_witnesses(cfg.alpha0, cfg.phi, cfg.kappa * t);
      if (id == WitnessId::Sx) return plain(-k.s_xphi - cfg.s0, cfg.s0);
      if (id == WitnessId::Sopt) return plain(-k.s_opt - cfg.s0, cfg.s0);
      break;
    }
  }
  return evaluate(id, analytic_state(cfg, t), cfg.witness_params());
}

Trajectory analytic_evolve(const ModelConfig& cfg, const std::vector<double>& times) {
  Trajectory tr;
  tr.path = Path::analytic;
  tr.times = times;
  tr.states.reserve(times.size());
  for (double t : times) tr.states.push_back(analytic_state(cfg, t));
  return tr;
}

// ----------------------------------------------------------------- Lindblad

LindbladIntegrator::LindbladIntegrator(ComplexMatrix hamiltonian, std::vector<ComplexMatrix> collapse) {
  if (!is_hermitian(hamiltonian, 1e-12)) throw Error(Errc::contract_violation, "Hamiltonian is not Hermitian");
  const Eigen::Index n = hamiltonian.rows();
  ComplexMatrix decay = ComplexMatrix::Zero(n, n);
  for (const auto& l : collapse) {
    if (l.rows() != n || l.cols() != n) throw Error(Errc::invalid_dimension, "collapse operator size mismatch");
    decay += l.adjoint() * l;
    collapse_.push_back(l.sparseView());
  }
  const ComplexMatrix k = Complex(0.0, -1.0) * hamiltonian - 0.5 * decay;
  k_ = k.sparseView();
}

// rho K+ = (K rho+)+ and L rho L+ = L (L rho+)+
ComplexMatrix LindbladIntegrator::derivative(const ComplexMatrix& rho) const {
  const ComplexMatrix rho_adj = rho.adjoint();
  ComplexMatrix out = k_ * rho;
  out += (k_ * rho_adj).adjoint();
  for (const auto& l : collapse_) {
    const ComplexMatrix half = (l * rho_adj).adjoint();
    out += l * half;
  }
  return out;
}

void LindbladIntegrator::step(ComplexMatrix& rho, double dt) const {
  const ComplexMatrix k1 = derivative(rho);
  const ComplexMatrix k2 = derivative(rho + 0.5 * dt * k1);
  const ComplexMatrix k3 = derivative(rho + 0.5 * dt * k2);
  const ComplexMatrix k4 = derivative(rho + dt * k3);
  rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  rho = (0.5 * (rho + rho.adjoint())).eval();
}

void LindbladIntegrator::propagate(ComplexMatrix& rho, double duration, double dt) const {
  if (duration <= 0.0) return;
  const int n = std::max(1, static_cast<int>(std::ceil(duration / dt - 1e-9)));
  const double h = duration / n;
  for (int k = 0; k < n; ++k) step(rho, h);
}

Trajectory lindblad_evolve(const ModelConfig& cfg, const QuantumState& rho0, const std::vector<double>& times,
                           double dt) {
  const double h = grid_step(times);
  const int n = substeps(h, dt);
  const LindbladIntegrator integrator(hamiltonian(cfg, rho0.layout()), collapse_operators(cfg, rho0.layout()));

  Trajectory tr;
  tr.path = Path::lindblad;
  tr.times = times;
  tr.states.reserve(times.size());
  tr.states.push_back(rho0);
  ComplexMatrix rho = rho0.rho();
  for (std::size_t i = 1; i < times.size(); ++i) {
    for (int k = 0; k < n; ++k) integrator.step(rho, h / n);
    const double tr_rho = rho.trace().real();
    if (std::abs(tr_rho - 1.0) > 1e-8) {
      throw Error(Errc::trace_drift, "trace drifted to " + std::to_string(tr_rho) + " at t=" + std::to_string(times[i]));
    }
    tr.states.emplace_back(rho / tr_rho, rho0.layout(), QuantumState::Check::structural);
    check_leakage(cfg, tr.states.back());
  }
  return tr;
}

// --------------------------------------------------------------------- MCWF

std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

McwfResult mcwf_evolve(const ModelConfig& cfg, const PureState& psi0, const std::vector<double>& times,
                       const McwfConfig& mc) {
  return mcwf_evolve(cfg, PureMixture{{1.0, psi0}}, times, mc);
}

McwfResult mcwf_evolve(const ModelConfig& cfg, const PureMixture& initial, const std::vector<double>& times,
                       const McwfConfig& mc) {
  mc.validate();
  if (initial.empty()) throw Error(Errc::invalid_argument, "mcwf: empty initial mixture");
  const HilbertLayout layout = initial.front().second.layout();
  double weight_sum = 0.0;
  for (const auto& [w, psi] : initial) {
    if (psi.layout() != layout) throw Error(Errc::invalid_dimension, "mcwf: mixture members differ in layout");
    if (!(w >= 0.0)) throw Error(Errc::invalid_argument, "mcwf: negative mixture weight");
    weight_sum += w;
  }
  if (std::abs(weight_sum - 1.0) > 1e-12) throw Error(Errc::invalid_argument, "mcwf: weights must sum to 1");

  const double h = grid_step(times);
  const int n_sub = substeps(h, mc.dt);
  const double dt = h / n_sub;
  const Eigen::Index dim = layout.total();

  const ComplexMatrix ham = hamiltonian(cfg, layout);
  const std::vector<ComplexMatrix> jumps = collapse_operators(cfg, layout);
  ComplexMatrix decay = ComplexMatrix::Zero(dim, dim);
  for (const auto& l : jumps) decay += l.adjoint() * l;
  const ComplexMatrix h_eff = ham - Complex(0.0, 0.5) * decay;
  const ComplexMatrix no_jump = taylor_exp(Complex(0.0, -dt) * h_eff);

  const int n_samples = static_cast<int>(times.size());
  const int n_batches = std::min(20, mc.n_traj);
  std::vector<int> first(n_batches + 1);
  for (int b = 0; b <= n_batches; ++b) first[b] = static_cast<int>((long long)mc.n_traj * b / n_batches);

  // sums[b][s]
  std::vector<std::vector<ComplexMatrix>> sums(n_batches,
                                               std::vector<ComplexMatrix>(n_samples, ComplexMatrix::Zero(dim, dim)));
  std::vector<long long> batch_jumps(n_batches, 0);

  auto run_batch = [&](int b) {
    std::vector<double> rates(jumps.size());
    for (int traj = first[b]; traj < first[b + 1]; ++traj) {
      std::mt19937_64 gen(trajectory_seed(mc.seed, static_cast<std::uint64_t>(traj)));
      ComplexVector psi = initial.front().second.amplitudes();
      if (initial.size() > 1) {
        const double u = uniform01(gen);
        double acc = 0.0;
        for (const auto& [w, member] : initial) {
          psi = member.amplitudes();
          acc += w;
          if (u < acc) break;
        }
      }
      sums[b][0] += psi * psi.adjoint();
      for (int s = 1; s < n_samples; ++s) {
        for (int k = 0; k < n_sub; ++k) {
          double total = 0.0;
          for (std::size_t j = 0; j < jumps.size(); ++j) {
            rates[j] = dt * (jumps[j] * psi).squaredNorm();
            total += rates[j];
          }
          if (total > 0.1) {
            throw Error(Errc::step_too_large, "jump probability " + std::to_string(total) + " per step exceeds 0.1");
          }
          const double r = uniform01(gen);
          if (r < total) {
            double acc = 0.0;
            std::size_t j = 0;
            for (; j + 1 < jumps.size(); ++j) {
              acc += rates[j];
              if (r < acc) break;
            }
            psi = (jumps[j] * psi).eval();
            ++batch_jumps[b];
          } else {
            psi = (no_jump * psi).eval();
          }
          psi.normalize();
        }
        sums[b][s] += psi * psi.adjoint();
      }
    }
  };

  int n_threads = mc.threads > 0 ? mc.threads : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, n_batches);
  if (n_threads == 1) {
    for (int b = 0; b < n_batches; ++b) run_batch(b);
  } else {
    std::vector<std::exception_ptr> errors(n_threads);
    std::vector<std::thread> pool;
    for (int w = 0; w < n_threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int b = w; b < n_batches; b += n_threads) run_batch(b);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  McwfResult out;
  out.mean.path = Path::mcwf;
  out.mean.times = times;
  out.batch_sizes.resize(n_batches);
  for (int b = 0; b < n_batches; ++b) {
    out.batch_sizes[b] = first[b + 1] - first[b];
    out.jumps += batch_jumps[b];
  }
  out.batch_means.assign(n_samples, {});
  for (int s = 0; s < n_samples; ++s) {
    ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
    for (int b = 0; b < n_batches; ++b) {
      total += sums[b][s];
      out.batch_means[s].push_back(sums[b][s] / double(out.batch_sizes[b]));
    }
    total /= double(mc.n_traj);
    total = (0.5 * (total + total.adjoint())).eval();
    total /= total.trace().real();
    out.mean.states.emplace_back(std::move(total), layout, QuantumState::Check::structural);
  }
  return out;
}

// ------------------------------------------------------------------ unitary

std::vector<PureState> unitary_propagate(const ComplexMatrix& h, const PureState& psi0,
                                         const std::vector<double>& times) {
  if (h.rows() != psi0.layout().total()) throw Error(Errc::invalid_dimension, "unitary: Hamiltonian size mismatch");
  const auto eig = eig_hermitian(h);
  const ComplexVector c = eig.vectors.adjoint() * psi0.amplitudes();
  std::vector<PureState> out;
  out.reserve(times.size());
  for (double t : times) {
    ComplexVector ct(c.size());
    for (Eigen::Index k = 0; k < c.size(); ++k) ct(k) = std::polar(1.0, -eig.values(k) * t) * c(k);
    out.push_back(PureState::normalized(eig.vectors * ct, psi0.layout()));
  }
  return out;
}

Trajectory unitary_evolve(const ModelConfig& cfg, const PureState& psi0, const std::vector<double>& times) {
  if (cfg.damped()) throw Error(Errc::unsupported, "unitary evolution requires zero damping");
  if (cfg.model == Model::kerr) {
    const QuantumState s0(psi0);
    if (top_level_population(s0) > 1e-12) {
      throw Error(Errc::truncation, "initial state populates the Fock cutoff");
    }
  }
  Trajectory tr;
  tr.path = Path::analytic;
  tr.times = times;
  for (const auto& psi : unitary_propagate(hamiltonian(cfg, psi0.layout()), psi0, times)) tr.states.emplace_back(psi);
  return tr;
}

}  // namespace qwit
