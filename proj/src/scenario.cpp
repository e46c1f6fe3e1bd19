#include "qwit/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

namespace qwit {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = s.find(',', pos);
    out.push_back(trim(s.substr(pos, comma == std::string_view::npos ? s.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& value, const std::string& key) {
  T x{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end) throw Error(Errc::parse, "bad value '" + value + "' for key " + key);
  return x;
}

std::vector<WitnessId> default_witnesses(Model model) {
  using W = WitnessId;
  switch (model) {
    case Model::damped_werner: return {W::C, W::B, W::S, W::D};
    case Model::freq_converter_pure:
    case Model::freq_converter_mixed: return {W::C, W::B, W::H, W::S, W::D, W::Q1, W::Q2};
    case Model::kerr: return {W::Sx, W::Sopt};
  }
  return {};
}

double default_t_max(Model model) {
  switch (model) {
    case Model::damped_werner: return 3.0;
    case Model::freq_converter_pure:
    case Model::freq_converter_mixed: return kPi;
    case Model::kerr: return 2.0 * kPi;
  }
  return 1.0;
}

bool contains(const std::vector<Path>& paths, Path p) {
  return std::find(paths.begin(), paths.end(), p) != paths.end();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "cannot write " + path.string());
  f << content;
  if (!f) throw Error(Errc::io, "error writing " + path.string());
}

struct LindbladRefiner {
  ModelConfig model;
  WitnessParams params;
  Trajectory trajectory;
  std::unique_ptr<LindbladIntegrator> integrator;
  double dt;
  double h;

  double raw(WitnessId id, double t) const {
    const double t0 = trajectory.times.front();
    std::size_t i = static_cast<std::size_t>(std::floor((t - t0) / h));
    i = std::min(i, trajectory.times.size() - 1);
    ComplexMatrix rho = trajectory.states[i].rho();
    integrator->propagate(rho, t - trajectory.times[i], dt);
    rho /= rho.trace().real();
    return evaluate(id, QuantumState(std::move(rho), trajectory.states[i].layout(), QuantumState::Check::structural),
                    params)
        .raw;
  }
};

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ------------------------------------------------------------------- config

void ScenarioConfig::validate() const {
  model.validate();
  mcwf.validate();
  if (n_samples < 2) throw Error(Errc::invalid_argument, "n_samples must be >= 2");
  if (!(t_max > 0.0)) throw Error(Errc::invalid_argument, "t_max must be > 0");
  if (witnesses.empty()) throw Error(Errc::invalid_argument, "no witnesses requested");
  if (paths.empty()) throw Error(Errc::invalid_argument, "no paths requested");
  std::set<WitnessId> seen_w(witnesses.begin(), witnesses.end());
  if (seen_w.size() != witnesses.size()) throw Error(Errc::invalid_argument, "duplicate witness");
  std::set<Path> seen_p(paths.begin(), paths.end());
  if (seen_p.size() != paths.size()) throw Error(Errc::invalid_argument, "duplicate path");
  const int modes = model.modes();
  for (WitnessId w : witnesses) {
    const bool ok = modes == 2 ? w != WitnessId::Sopt : !(needs_two_modes(w));
    if (!ok) {
      throw Error(Errc::invalid_argument, std::string("witness ") + to_string(w) + " does not apply to a " +
                                              std::to_string(modes) + "-mode model");
    }
  }
  if (contains(paths, Path::analytic) && !analytic_available(model)) {
    throw Error(Errc::unsupported, std::string("no closed-form solution for ") + to_string(model.model) +
                                       " with these parameters; drop the analytic path");
  }
}

ScenarioConfig parse_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw Error(Errc::parse, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!kv.emplace(key, value).second) throw Error(Errc::parse, "line " + std::to_string(lineno) + ": duplicate key " + key);
  }

  static const std::set<std::string> known = {"model", "gamma1", "gamma2", "nbar1",   "nbar2", "kappa",     "p",
                                              "alpha0_re", "alpha0_im", "phi0", "phi", "s0", "d0", "witnesses",
                                              "t_max", "n_samples", "paths", "n_traj", "seed", "dt", "out", "dim"};
  for (const auto& [k, v] : kv) {
    if (!known.count(k)) throw Error(Errc::parse, "unknown key '" + k + "'");
  }
  auto num = [&](const char* key, double fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : parse_number<double>(it->second, key);
  };

  ScenarioConfig cfg;
  if (!kv.count("model")) throw Error(Errc::parse, "missing key 'model'");
  ModelConfig& m = cfg.model;
  m.model = parse_model(kv["model"]);
  m.gamma = {num("gamma1", 0.0), num("gamma2", 0.0)};
  m.nbar = {num("nbar1", 0.0), num("nbar2", 0.0)};
  m.kappa = num("kappa", 1.0);
  m.p = num("p", 1.0);
  m.s0 = num("s0", 0.0);
  m.d0 = num("d0", 0.0);
  m.phi = num("phi", 0.0);
  const double re = num("alpha0_re", 0.0);
  const double im = num("alpha0_im", 0.0);
  m.alpha0 = Complex(re, im);
  if (kv.count("phi0")) {
    if (im != 0.0) throw Error(Errc::parse, "give either alpha0_im or phi0, not both");
    m.alpha0 = std::polar(std::abs(re), num("phi0", 0.0));
  }
  if (auto it = kv.find("dim"); it != kv.end()) {
    for (const auto& d : split_list(it->second)) m.dims.push_back(parse_number<int>(d, "dim"));
    if (m.dims.size() == 1 && m.modes() == 2) m.dims.push_back(m.dims[0]);
  }

  if (auto it = kv.find("witnesses"); it != kv.end()) {
    for (const auto& w : split_list(it->second)) cfg.witnesses.push_back(parse_witness(w));
  } else {
    cfg.witnesses = default_witnesses(m.model);
  }
  if (auto it = kv.find("paths"); it != kv.end()) {
    cfg.paths.clear();
    for (const auto& p : split_list(it->second)) cfg.paths.push_back(parse_path(p));
  }
  cfg.t_max = num("t_max", default_t_max(m.model));
  if (auto it = kv.find("n_samples"); it != kv.end()) cfg.n_samples = parse_number<int>(it->second, "n_samples");
  if (auto it = kv.find("n_traj"); it != kv.end()) cfg.mcwf.n_traj = parse_number<int>(it->second, "n_traj");
  if (auto it = kv.find("seed"); it != kv.end()) cfg.mcwf.seed = parse_number<std::uint64_t>(it->second, "seed");
  double rate = std::max(m.gamma[0], m.gamma[1]);
  if (m.model != Model::damped_werner) rate = std::max(rate, std::abs(m.kappa));
  cfg.mcwf.dt = num("dt", rate > 0.0 ? 1e-3 / rate : 1e-3);
  if (auto it = kv.find("out"); it != kv.end()) cfg.out = it->second;
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "cannot read config " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void apply(ScenarioConfig& cfg, const Overrides& o) {
  if (o.out) cfg.out = *o.out;
  if (o.seed) cfg.mcwf.seed = *o.seed;
  if (o.dt) cfg.mcwf.dt = *o.dt;
}

// --------------------------------------------------------------------- runs

PathRun run_path(const ScenarioConfig& cfg, Path path) {
  const std::vector<double> times = cfg.times();
  const WitnessParams params = cfg.model.witness_params();
  PathRun run;
  run.path = path;
  run.values.resize(times.size());

  auto evaluate_states = [&](const std::vector<QuantumState>& states) {
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (WitnessId w : cfg.witnesses) run.values[i].push_back(evaluate(w, states[i], params));
    }
  };

  switch (path) {
    case Path::analytic: {
      for (std::size_t i = 0; i < times.size(); ++i) {
        for (WitnessId w : cfg.witnesses) run.values[i].push_back(analytic_witness(cfg.model, w, times[i]));
      }
      const ModelConfig model = cfg.model;
      run.refine = [model](WitnessId id) -> RawFunction {
        return [model, id](double t) { return analytic_witness(model, id, t).raw; };
      };
      break;
    }
    case Path::lindblad: {
      const QuantumState rho0 = initial_state(cfg.model);
      run.trajectory = lindblad_evolve(cfg.model, rho0, times, cfg.mcwf.dt);
      evaluate_states(run.trajectory->states);
      auto refiner = std::make_shared<LindbladRefiner>();
      refiner->model = cfg.model;
      refiner->params = params;
      refiner->trajectory = *run.trajectory;
      refiner->integrator = std::make_unique<LindbladIntegrator>(hamiltonian(cfg.model, rho0.layout()),
                                                                 collapse_operators(cfg.model, rho0.layout()));
      refiner->dt = cfg.mcwf.dt;
      refiner->h = grid_step(times);
      run.refine = [refiner](WitnessId id) -> RawFunction {
        return [refiner, id](double t) { return refiner->raw(id, t); };
      };
      break;
    }
    case Path::mcwf: {
      run.mcwf = mcwf_evolve(cfg.model, initial_mixture(cfg.model), times, cfg.mcwf);
      evaluate_states(run.mcwf->mean.states);
      break;
    }
  }
  return run;
}

std::vector<WitnessSample> samples_of(const ScenarioConfig& cfg, const PathRun& run) {
  const std::vector<double> times = cfg.times();
  std::vector<WitnessSample> out;
  for (std::size_t w = 0; w < cfg.witnesses.size(); ++w) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      const WitnessValue& v = run.values[i][w];
      out.push_back({times[i], v.id, v.raw, v.truncated});
    }
  }
  return out;
}

std::vector<std::vector<double>> compare_paths(const PathRun& analytic, const PathRun& numeric) {
  std::vector<std::vector<double>> out(analytic.values.size());
  for (std::size_t i = 0; i < analytic.values.size(); ++i) {
    for (std::size_t w = 0; w < analytic.values[i].size(); ++w) {
      out[i].push_back(std::abs(analytic.values[i][w].truncated - numeric.values[i][w].truncated));
    }
  }
  return out;
}

int run_scenario(const ScenarioConfig& cfg, std::ostream& log) {
  cfg.validate();
  const std::vector<double> times = cfg.times();
  std::vector<PathRun> runs;
  for (Path p : cfg.paths) runs.push_back(run_path(cfg, p));

  const std::filesystem::path dir(cfg.out);
  std::filesystem::create_directories(dir);
  const std::size_t nw = cfg.witnesses.size();

  // witnesses.csv
  {
    std::ostringstream os;
    os << "t";
    for (const auto& r : runs)
      for (WitnessId w : cfg.witnesses) os << ',' << to_string(r.path) << '_' << to_string(w) << "_raw," << to_string(r.path) << '_' << to_string(w);
    os << '\n';
    for (std::size_t i = 0; i < times.size(); ++i) {
      os << format_number(times[i]);
      for (const auto& r : runs)
        for (std::size_t w = 0; w < nw; ++w)
          os << ',' << format_number(r.values[i][w].raw) << ',' << format_number(r.values[i][w].truncated);
      os << '\n';
    }
    write_file(dir / "witnesses.csv", os.str());
  }

  // events.csv from the first path
  const auto events = detect_events(samples_of(cfg, runs.front()), runs.front().refine);
  {
    std::ostringstream os;
    os << "witness,kind,time,classification,bracket_lo,bracket_hi\n";
    for (const auto& e : events) {
      os << to_string(e.id) << ',' << to_string(e.kind) << ',' << format_number(e.time) << ','
         << to_string(e.classification) << ',' << format_number(e.bracket_lo) << ',' << format_number(e.bracket_hi)
         << '\n';
    }
    write_file(dir / "events.csv", os.str());
  }
  for (const auto& e : events) {
    log << to_string(e.id) << ' ' << to_string(e.kind) << " at t=" << format_number(e.time) << " ("
        << to_string(e.classification) << (e.first_appearance ? ", first appearance" : "") << ")\n";
  }

  // compare.csv
  int status = 0;
  const auto analytic = std::find_if(runs.begin(), runs.end(), [](const PathRun& r) { return r.path == Path::analytic; });
  if (analytic != runs.end() && runs.size() > 1) {
    std::vector<std::pair<Path, std::vector<std::vector<double>>>> diffs;
    for (const auto& r : runs)
      if (r.path != Path::analytic) diffs.emplace_back(r.path, compare_paths(*analytic, r));
    std::ostringstream os;
    os << "t";
    for (const auto& [p, d] : diffs)
      for (WitnessId w : cfg.witnesses) os << ',' << to_string(p) << '_' << to_string(w);
    os << '\n';
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      os << format_number(times[i]);
      for (const auto& [p, d] : diffs) {
        for (std::size_t w = 0; w < nw; ++w) {
          os << ',' << format_number(d[i][w]);
          if (p == Path::lindblad) worst = std::max(worst, d[i][w]);
        }
      }
      os << '\n';
    }
    write_file(dir / "compare.csv", os.str());
    if (worst > 1e-6) {
      log << "lindblad departs from the closed form by " << format_number(worst) << " (tolerance 1e-6)\n";
      status = 2;
    }
  }

  // plot.gp
  {
    std::ostringstream os;
    os << "set datafile separator ','\n"
       << "set key outside right\n"
       << "set xlabel 't'\n"
       << "set ylabel 'truncated witness'\n"
       << "plot \\\n";
    bool first = true;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      for (std::size_t w = 0; w < nw; ++w) {
        const std::size_t col = 3 + 2 * (r * nw + w);
        os << (first ? "  " : ", \\\n  ") << "'witnesses.csv' using 1:" << col << " with lines dashtype " << (r + 1)
           << " title '" << to_string(runs[r].path) << ' ' << to_string(cfg.witnesses[w]) << "'";
        first = false;
      }
    }
    os << "\n";
    write_file(dir / "plot.gp", os.str());
  }
  return status;
}

// ------------------------------------------------------------------- verify

namespace {

CheckResult guarded(const std::string& name, double tolerance, const std::function<CheckResult()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    return {name, false, INFINITY, tolerance, std::string(to_string(e.code())) + ": " + e.what()};
  } catch (const std::exception& e) {
    return {name, false, INFINITY, tolerance, e.what()};
  }
}

std::optional<double> find_event(const std::vector<EventRecord>& events, WitnessId id, EventKind kind,
                                 double after, bool first_appearance) {
  for (const auto& e : events) {
    if (e.id != id || e.kind != kind || e.first_appearance != first_appearance) continue;
    if (e.time > after) return e.time;
  }
  return std::nullopt;
}

CheckResult event_check(const ScenarioConfig& cfg, const std::vector<EventRecord>& events, const std::string& name,
                        double tolerance) {
  CheckResult res{name, true, 0.0, tolerance, ""};
  const auto table = closed_form_sv_times(cfg.model);
  const double t_end = cfg.t_max;
  int compared = 0;
  for (const auto& c : table) {
    if (std::find(cfg.witnesses.begin(), cfg.witnesses.end(), c.id) == cfg.witnesses.end()) continue;
    auto expect = [&](EventKind kind, double t, double after, bool first, const char* label) {
      if (t > t_end) return;
      const auto got = find_event(events, c.id, kind, after, first);
      ++compared;
      if (!got) {
        res.passed = false;
        res.observed = INFINITY;
        res.note += std::string(to_string(c.id)) + " " + label + " not detected; ";
        return;
      }
      res.observed = std::max(res.observed, std::abs(*got - t));
    };
    if (c.status == ClosedFormStatus::vanishes) {
      if (c.first_appearance) expect(EventKind::SR, *c.first_appearance, -INFINITY, true, "first appearance");
      expect(EventKind::SV, c.t_sv, -INFINITY, false, "SV");
      if (c.t_sr) expect(EventKind::SR, *c.t_sr, c.t_sv - 1e-3, false, "SR");
    } else if (c.status == ClosedFormStatus::never_vanishes) {
      if (find_event(events, c.id, EventKind::SV, -INFINITY, false)) {
        res.passed = false;
        res.note += std::string(to_string(c.id)) + " vanished but should not; ";
      }
    }
  }
  if (res.observed > tolerance) res.passed = false;
  if (res.note.empty()) res.note = std::to_string(compared) + " event times compared";
  return res;
}

}  // namespace

std::vector<CheckResult> verify_checks(const ScenarioConfig& cfg) {
  std::vector<CheckResult> out;
  const std::vector<double> times = cfg.times();
  const ModelConfig& model = cfg.model;
  const bool analytic = analytic_available(model);

  std::optional<PathRun> lindblad;
  std::optional<PathRun> closed;
  out.push_back(guarded("lindblad integration", 0.0, [&] {
    lindblad = run_path(cfg, Path::lindblad);
    return CheckResult{"lindblad integration", true, 0.0, 0.0, "trace and truncation monitors passed"};
  }));
  if (analytic) {
    out.push_back(guarded("closed-form witnesses", 0.0, [&] {
      closed = run_path(cfg, Path::analytic);
      return CheckResult{"closed-form witnesses", true, 0.0, 0.0, ""};
    }));
  }

  if (analytic && lindblad) {
    out.push_back(guarded("state: lindblad vs closed form", 1e-8, [&] {
      double worst = 0.0;
      for (std::size_t i = 0; i < times.size(); ++i) {
        const QuantumState ref = analytic_state(model, times[i]);
        worst = std::max(worst, max_abs(lindblad->trajectory->states[i].rho() - ref.rho()));
      }
      return CheckResult{"state: lindblad vs closed form", worst <= 1e-8, worst, 1e-8, "max |rho_ij| difference"};
    }));
  }
  if (closed && lindblad) {
    out.push_back(guarded("witnesses: lindblad vs closed form", 1e-6, [&] {
      double worst = 0.0;
      for (const auto& row : compare_paths(*closed, *lindblad))
        for (double d : row) worst = std::max(worst, d);
      return CheckResult{"witnesses: lindblad vs closed form", worst <= 1e-6, worst, 1e-6, "truncated values"};
    }));
  }

  const bool has_event_table = model.model == Model::freq_converter_mixed ||
                               (model.model == Model::damped_werner && model.gamma[0] == model.gamma[1] && !model.thermal());
  if (has_event_table) {
    if (closed) {
      out.push_back(guarded("events: closed-form path vs SV/SR formulas", 1e-6, [&] {
        return event_check(cfg, detect_events(samples_of(cfg, *closed), closed->refine),
                           "events: closed-form path vs SV/SR formulas", 1e-6);
      }));
    }
    if (lindblad) {
      out.push_back(guarded("events: lindblad path vs SV/SR formulas", 1e-5, [&] {
        return event_check(cfg, detect_events(samples_of(cfg, *lindblad), lindblad->refine),
                           "events: lindblad path vs SV/SR formulas", 1e-5);
      }));
    }
  }

  if (model.model == Model::kerr && !model.damped()) {
    out.push_back(guarded("squeezing: closed form vs Fock moments", 1e-8, [&] {
      const int dim = model.layout().dim(0);
      const WitnessParams params = model.witness_params();
      double worst = 0.0;
      for (double t : times) {
        const QuantumState s(kerr_state(model.alpha0, model.kappa * t, dim));
        const KerrSqueezing k = analytic_kerr_witnesses(model.alpha0, model.phi, model.kappa * t);
        worst = std::max(worst, std::abs(quadrature_variance(s, params.phis, params.coeffs) - k.s_xphi));
        worst = std::max(worst, std::abs(principal_variance(s) - k.s_opt));
      }
      return CheckResult{"squeezing: closed form vs Fock moments", worst <= 1e-8, worst, 1e-8, ""};
    }));
  }

  if (contains(cfg.paths, Path::mcwf) && lindblad) {
    const std::string name = "mcwf vs lindblad at 10 checkpoints";
    out.push_back(guarded(name, 4.0, [&] {
      const McwfResult mc = mcwf_evolve(model, initial_mixture(model), times, cfg.mcwf);
      const HilbertLayout layout = mc.mean.states.front().layout();
      const int modes = layout.modes();
      std::vector<std::pair<std::string, std::function<double(const ComplexMatrix&)>>> functionals;
      functionals.emplace_back("<n1>", [&](const ComplexMatrix& r) {
        return trace_moment(r, layout, MonomialMoment::single(modes, 0, 1, 1)).real();
      });
      if (layout == HilbertLayout::qubits(2)) {
        functionals.emplace_back("C", [&](const ComplexMatrix& r) {
          const ComplexMatrix h = 0.5 * (r + r.adjoint());
          return concurrence(QuantumState(h / h.trace().real(), layout, QuantumState::Check::structural)).truncated;
        });
      }
      double worst = 0.0;
      bool ok = true;
      const std::size_t n = times.size();
      for (int k = 1; k <= 10; ++k) {
        const std::size_t i = static_cast<std::size_t>(std::lround(double(k) * double(n - 1) / 10.0));
        for (const auto& [label, fn] : functionals) {
          const double dev = std::abs(fn(mc.mean.states[i].rho()) - fn(lindblad->trajectory->states[i].rho()));
          const double se = mc.standard_error(i, fn);
          const double ratio = se > 0.0 ? dev / se : (dev <= 1e-6 ? 0.0 : INFINITY);
          worst = std::max(worst, ratio);
          if (ratio > 4.0) ok = false;
        }
      }
      return CheckResult{name, ok, worst, 4.0,
                         "deviation in standard errors, 4-sigma statistical tolerance, n_traj=" +
                             std::to_string(cfg.mcwf.n_traj) + ", " + std::to_string(mc.batch_sizes.size()) +
                             " batches"};
    }));
  }
  return out;
}

int verify(const ScenarioConfig& cfg, std::ostream& out) {
  cfg.model.validate();
  const auto checks = verify_checks(cfg);
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed;
    out << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  observed=" << format_number(c.observed)
        << "  tolerance=" << format_number(c.tolerance);
    if (!c.note.empty()) out << "  (" << c.note << ")";
    out << '\n';
  }
  return all ? 0 : 2;
}

int sv_times(const ScenarioConfig& cfg, std::ostream& out) {
  const auto table = closed_form_sv_times(cfg.model);
  auto opt = [](const std::optional<double>& x) { return x ? format_number(*x) : std::string(); };
  out << "witness,status,t_sv,t_sr,first_appearance\n";
  for (const auto& c : table) {
    out << to_string(c.id) << ',' << to_string(c.status) << ','
        << (c.status == ClosedFormStatus::vanishes ? format_number(c.t_sv) : std::string()) << ',' << opt(c.t_sr)
        << ',' << opt(c.first_appearance) << '\n';
  }
  return 0;
}

}  // namespace qwit
