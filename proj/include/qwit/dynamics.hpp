#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "qwit/states.hpp"
#include "qwit/witnesses.hpp"

namespace qwit {

enum class Model { damped_werner, freq_converter_pure, freq_converter_mixed, kerr };

const char* to_string(Model model) noexcept;
Model parse_model(std::string_view name);

/// Physical parameters. hbar = 1 and all Hamiltonians are taken in the
/// interaction picture; quadrature angles are interaction-picture angles.
struct ModelConfig {
  Model model = Model::damped_werner;
  std::array<double, 2> gamma{0.0, 0.0};
  std::array<double, 2> nbar{0.0, 0.0};
  double kappa = 1.0;
  double p = 1.0;
  Complex alpha0{0.0, 0.0};  // |alpha0| exp(i phi0)
  double s0 = 0.0;
  double d0 = 0.0;
  double phi = 0.0;      // quadrature angle for Sx
  std::vector<int> dims;  // per-mode truncation, empty = model default

  void validate() const;
  int modes() const noexcept { return model == Model::kerr ? 1 : 2; }
  HilbertLayout layout() const;
  WitnessParams witness_params() const;
  bool damped() const noexcept;
  bool thermal() const noexcept;
};

enum class Path { analytic, lindblad, mcwf };

const char* to_string(Path path) noexcept;
Path parse_path(std::string_view name);

/// Evenly spaced samples t_i = t_max * i / (n - 1).
std::vector<double> uniform_grid(double t_max, int n_samples);

/// Spacing of a uniform grid; throws Errc::non_uniform_grid otherwise.
double grid_step(const std::vector<double>& times);

struct Trajectory {
  Path path = Path::analytic;
  std::vector<double> times;
  std::vector<QuantumState> states;
};

struct McwfConfig {
  int n_traj = 2000;
  std::uint64_t seed = 1;
  double dt = 1e-3;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

/// Ensemble mean plus per-batch means of |psi><psi| for error bars.
struct McwfResult {
  Trajectory mean;
  std::vector<std::vector<ComplexMatrix>> batch_means;  // [sample][batch]
  std::vector<int> batch_sizes;
  long long jumps = 0;

  /// Standard error of a functional of the state from the spread of the
  /// batch estimates.
  template <typename F>
  double standard_error(std::size_t sample, F&& functional) const;
};

/// Weighted mixture of pure states used to start trajectories.
using PureMixture = std::vector<std::pair<double, PureState>>;

PureMixture werner_mixture(double p, const PureState& psi);

// Hamiltonian and collapse operators (hbar = 1).
ComplexMatrix hamiltonian(const ModelConfig& cfg, const HilbertLayout& layout);
std::vector<ComplexMatrix> collapse_operators(const ModelConfig& cfg, const HilbertLayout& layout);

// Initial conditions of the models.
PureState bell_phi_plus();   // (|00> + |11>)/sqrt(2)
PureState bell_psi_zero();   // (|01> - i|10>)/sqrt(2)
QuantumState initial_state(const ModelConfig& cfg);
PureMixture initial_mixture(const ModelConfig& cfg);

// Closed-form evolutions.
QuantumState analytic_damped_werner(const ModelConfig& cfg, double t);
PureState analytic_freq_converter_pure(double kappa, double t);
QuantumState analytic_freq_converter_mixed(double kappa, double p, double t);

struct KerrSqueezing {
  double s_xphi = 0.0;  // <:(Delta x_phi)^2:>
  double s_opt = 0.0;   // min over phi
};

/// Closed-form quadrature variances of the Kerr state at tau = kappa t, for
/// x = a e^{i phi} + a+ e^{-i phi}.
KerrSqueezing analytic_kerr_witnesses(Complex alpha0, double phi, double tau);

bool analytic_available(const ModelConfig& cfg);
QuantumState analytic_state(const ModelConfig& cfg, double t);

/// Closed-form witness value where one exists; otherwise the witness is
/// evaluated on analytic_state.
WitnessValue analytic_witness(const ModelConfig& cfg, WitnessId id, double t);

Trajectory analytic_evolve(const ModelConfig& cfg, const std::vector<double>& times);

/// Fixed-step RK4 for d rho/dt = K rho + rho K+ + sum L rho L+,
/// K = -iH - 1/2 sum L+ L.
class LindbladIntegrator {
 public:
  LindbladIntegrator(ComplexMatrix hamiltonian, std::vector<ComplexMatrix> collapse);

  ComplexMatrix derivative(const ComplexMatrix& rho) const;
  void step(ComplexMatrix& rho, double dt) const;

  /// Integrates over `duration` with equal steps no longer than `dt`.
  void propagate(ComplexMatrix& rho, double duration, double dt) const;

 private:
  using SparseOp = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

  SparseOp k_;
  std::vector<SparseOp> collapse_;
};

/// Steps per grid interval: round(step / dt), at least 1.
int substeps(double grid_step, double dt);

Trajectory lindblad_evolve(const ModelConfig& cfg, const QuantumState& rho0, const std::vector<double>& times,
                           double dt);

McwfResult mcwf_evolve(const ModelConfig& cfg, const PureState& psi0, const std::vector<double>& times,
                       const McwfConfig& mc);
McwfResult mcwf_evolve(const ModelConfig& cfg, const PureMixture& initial, const std::vector<double>& times,
                       const McwfConfig& mc);

/// exp(-iHt)|psi0> through the eigendecomposition of H.
std::vector<PureState> unitary_propagate(const ComplexMatrix& h, const PureState& psi0,
                                         const std::vector<double>& times);
Trajectory unitary_evolve(const ModelConfig& cfg, const PureState& psi0, const std::vector<double>& times);

/// Deterministic per-trajectory seed.
std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index);

template <typename F>
double McwfResult::standard_error(std::size_t sample, F&& functional) const {
  const auto& batches = batch_means.at(sample);
  const std::size_t b = batches.size();
  if (b < 2) return 0.0;
  std::vector<double> v;
  v.reserve(b);
  double mean = 0.0;
  for (const auto& m : batches) {
    v.push_back(functional(m));
    mean += v.back();
  }
  mean /= double(b);
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= double(b - 1);
  return std::sqrt(var / double(b));
}

}  // namespace qwit
