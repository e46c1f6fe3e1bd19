#include "qwit/events.hpp"

#include <cmath>
#include <map>

namespace qwit {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Series {
  std::vector<double> t;
  std::vector<double> r;
};

double bracket_width(double t) { return 1e-10 * std::max(1.0, std::abs(t)); }

struct Refined {
  double time;
  double lo;
  double hi;
};

// Time where raw crosses `threshold` between samples a and b.
Refined crossing(const Series& s, std::size_t a, std::size_t b, const RawFunction& f) {
  const double ra = s.r[a];
  const double rb = s.r[b];
  const bool straddles_zero = (ra > 0.0 && rb < 0.0) || (ra < 0.0 && rb > 0.0);
  const double threshold = straddles_zero ? 0.0 : kZeroTolerance;
  double lo = s.t[a];
  double hi = s.t[b];
  if (!f) {
    const double w = (threshold - ra) / (rb - ra);
    const double t = lo + std::clamp(w, 0.0, 1.0) * (hi - lo);
    return {std::clamp(t, std::nextafter(lo, hi), std::nextafter(hi, lo)), lo, hi};
  }
  const bool lo_above = ra > threshold;
  for (int it = 0; it < 200 && hi - lo > bracket_width(hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) > threshold) == lo_above) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), lo, hi};
}

struct Minimum {
  double time;
  double value;
  double lo;
  double hi;
};

Minimum golden_minimum(const RawFunction& f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > bracket_width(hi); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? Minimum{x1, f1, lo, hi} : Minimum{x2, f2, lo, hi};
}

void touching_pair(std::vector<EventRecord>& out, WitnessId id, double time, double lo, double hi) {
  if (!(lo < time)) lo = std::nextafter(time, -INFINITY);
  if (!(time < hi)) hi = std::nextafter(time, INFINITY);
  out.push_back({id, EventKind::SV, time, EventClass::touching, lo, hi, false});
  out.push_back({id, EventKind::SR, time, EventClass::touching, lo, hi, false});
}

void detect_series(WitnessId id, const Series& s, const RawFunction& f, std::vector<EventRecord>& out) {
  const std::size_t n = s.t.size();
  std::vector<double> grid = s.t;
  grid_step(grid);
  auto pos = [&](std::size_t i) { return s.r[i] > kZeroTolerance; };
  const std::size_t first_event = out.size();

  for (std::size_t i = 1; i < n; ++i) {
    if (pos(i - 1) && !pos(i)) {
      std::size_t k = i;
      double run_min = s.r[i];
      while (k < n && !pos(k)) run_min = std::min(run_min, s.r[k++]);
      const bool short_run = k < n && k - i <= 2 && run_min > -kZeroTolerance;
      if (short_run) {
        if (f) {
          const Minimum m = golden_minimum(f, s.t[i - 1], s.t[k]);
          if (m.value > -kZeroTolerance) {
            touching_pair(out, id, m.time, m.lo, m.hi);
            i = k;
            continue;
          }
        } else {
          std::size_t argmin = i;
          for (std::size_t j = i; j < k; ++j)
            if (s.r[j] < s.r[argmin]) argmin = j;
          touching_pair(out, id, s.t[argmin], s.t[i - 1], s.t[k]);
          i = k;
          continue;
        }
      }
      const Refined c = crossing(s, i - 1, i, f);
      // a zero that only touches the end of the grid
      const bool at_end = k == n && n - i <= 2 && run_min > -kZeroTolerance;
      out.push_back({id, EventKind::SV, c.time, at_end ? EventClass::touching : EventClass::proper, c.lo, c.hi, false});
    } else if (!pos(i - 1) && pos(i)) {
      const Refined c = crossing(s, i - 1, i, f);
      const bool first = out.size() == first_event;
      EventClass cls = EventClass::proper;
      if (first && i <= 2) {
        double run_min = 0.0;
        for (std::size_t j = 0; j < i; ++j) run_min = std::min(run_min, s.r[j]);
        if (run_min > -kZeroTolerance) cls = EventClass::touching;
      }
      out.push_back({id, EventKind::SR, c.time, cls, c.lo, c.hi, first});
    } else if (f && i + 1 < n && pos(i - 1) && pos(i) && pos(i + 1) && s.r[i] < s.r[i - 1] &&
               s.r[i] <= s.r[i + 1]) {
      const Minimum m = golden_minimum(f, s.t[i - 1], s.t[i + 1]);
      if (m.value <= kZeroTolerance) touching_pair(out, id, m.time, m.lo, m.hi);
    }
  }
}

}  // namespace

const char* to_string(EventKind kind) noexcept { return kind == EventKind::SV ? "SV" : "SR"; }

const char* to_string(EventClass cls) noexcept { return cls == EventClass::proper ? "proper" : "touching"; }

const char* to_string(ClosedFormStatus status) noexcept {
  switch (status) {
    case ClosedFormStatus::vanishes: return "vanishes";
    case ClosedFormStatus::never_vanishes: return "never-vanishes";
    case ClosedFormStatus::never_positive: return "never-positive";
  }
  return "?";
}

std::vector<EventRecord> detect_events(const std::vector<WitnessSample>& samples,
                                       const std::function<RawFunction(WitnessId)>& refine) {
  std::vector<WitnessId> order;
  std::map<WitnessId, Series> series;
  for (const auto& s : samples) {
    auto [it, inserted] = series.try_emplace(s.id);
    if (inserted) order.push_back(s.id);
    it->second.t.push_back(s.t);
    it->second.r.push_back(s.raw);
  }
  std::vector<EventRecord> out;
  for (WitnessId id : order) {
    const Series& s = series[id];
    if (s.t.size() < 2) continue;
    detect_series(id, s, refine ? refine(id) : RawFunction{}, out);
  }
  return out;
}

std::vector<ClosedFormTime> closed_form_sv_times(const ModelConfig& cfg) {
  std::vector<ClosedFormTime> out;
  auto never = [&](WitnessId id, bool positive_at_start) {
    ClosedFormTime c;
    c.id = id;
    c.status = positive_at_start ? ClosedFormStatus::never_vanishes : ClosedFormStatus::never_positive;
    out.push_back(c);
  };
  const double p = cfg.p;

  if (cfg.model == Model::damped_werner) {
    if (cfg.gamma[0] != cfg.gamma[1]) throw Error(Errc::unsupported, "closed-form SV times need equal damping rates");
    if (cfg.thermal()) throw Error(Errc::unsupported, "closed-form SV times exist only for zero temperature");
    const double g = cfg.gamma[0];
    // value at t=0, value as g -> 0 is positive, time
    struct Row {
      WitnessId id;
      double start;
      bool persists;
      double time;
    };
    const Row rows[] = {
        {WitnessId::C, 0.5 * (3.0 * p - 1.0), p >= 1.0, std::log((1.0 + p) / (2.0 * (1.0 - p))) / g},
        {WitnessId::B, 2.0 * p * p - 1.0, false, std::log(std::sqrt(2.0) * p) / g},
        {WitnessId::S, 0.5 * (1.0 + p) - cfg.s0, cfg.s0 <= 0.0, std::log((1.0 + p) / (2.0 * cfg.s0)) / (2.0 * g)},
        {WitnessId::D, 0.5 * (1.0 + p) - cfg.d0 * cfg.d0, cfg.d0 <= 0.0,
         std::log((1.0 + p) / (2.0 * cfg.d0 * cfg.d0)) / (2.0 * g)},
    };
    for (const Row& r : rows) {
      if (!(r.start > 0.0)) {
        never(r.id, false);
      } else if (r.persists || g <= 0.0) {
        never(r.id, true);
      } else {
        out.push_back({r.id, ClosedFormStatus::vanishes, r.time, std::nullopt, std::nullopt});
      }
    }
    return out;
  }

  if (cfg.model != Model::freq_converter_mixed) {
    throw Error(Errc::unsupported, std::string("no closed-form SV times for model ") + to_string(cfg.model));
  }
  if (!(cfg.kappa > 0.0)) throw Error(Errc::invalid_argument, "closed-form SV times need kappa > 0");
  const double kappa = cfg.kappa;
  auto f = [&](double x) { return std::acos(x) / (2.0 * kappa); };

  // C, B and H: positive at t=0, vanish at f(x), reappear at pi/(2 kappa) - t_sv.
  const std::pair<WitnessId, double> entangled[] = {
      {WitnessId::C, p > 0.0 ? (1.0 - p) / (2.0 * p) : INFINITY},
      {WitnessId::B, p > 0.0 ? std::sqrt(1.0 - p * p) / p : INFINITY},
      {WitnessId::H, p > 0.0 ? std::sqrt(1.0 - p) / p : INFINITY},
  };
  for (const auto& [id, x] : entangled) {
    if (!(x <= 1.0)) {
      never(id, false);
      continue;
    }
    const double t = f(x);
    out.push_back({id, ClosedFormStatus::vanishes, t, kPi / (2.0 * kappa) - t, std::nullopt});
  }

  // S: positive while p^2 sin^2(2 kappa t) > S0 - (1-p)/2.
  {
    const double q = 2.0 * cfg.s0 + p - 1.0;
    if (q < 0.0) {
      never(WitnessId::S, true);
    } else if (p <= 0.0 || std::sqrt(q) / (std::sqrt(2.0) * p) > 1.0) {
      never(WitnessId::S, false);
    } else {
      const double x = std::sqrt(q) / (std::sqrt(2.0) * p);
      const double t = kPi / (4.0 * kappa) + f(x);
      ClosedFormTime c{WitnessId::S, ClosedFormStatus::vanishes, t, kPi / kappa - t, std::nullopt};
      if (x > 0.0) c.first_appearance = kPi / (2.0 * kappa) - t;
      out.push_back(c);
    }
  }

  // D: positive while sin(2 kappa t) < -x.
  {
    const double d0 = cfg.d0;
    if (d0 <= 0.0 || p <= 0.0) {
      never(WitnessId::D, 0.5 * (1.0 - p) - d0 * d0 > 0.0);
    } else {
      const double x = (2.0 * d0 * d0 + p - 1.0) / (4.0 * d0 * p);
      if (x > 1.0) {
        never(WitnessId::D, false);
      } else if (x < -1.0) {
        never(WitnessId::D, true);
      } else {
        const double theta = std::asin(-x);
        ClosedFormTime c;
        c.id = WitnessId::D;
        if (-x > 0.0) {
          c.t_sv = theta / (2.0 * kappa);
          c.t_sr = (kPi - theta) / (2.0 * kappa);
        } else {
          c.first_appearance = (kPi - theta) / (2.0 * kappa);
          c.t_sv = (2.0 * kPi + theta) / (2.0 * kappa);
          c.t_sr = (3.0 * kPi - theta) / (2.0 * kappa);
        }
        out.push_back(c);
      }
    }
  }
  return out;
}

}  // namespace qwit
