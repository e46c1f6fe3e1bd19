#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qwit/dynamics.hpp"
#include "qwit/witnesses.hpp"

namespace qwit {

struct WitnessSample {
  double t = 0.0;
  WitnessId id = WitnessId::C;
  double raw = 0.0;
  double truncated = 0.0;
};

enum class EventKind { SV, SR };
enum class EventClass { proper, touching };

const char* to_string(EventKind kind) noexcept;
const char* to_string(EventClass cls) noexcept;

struct EventRecord {
  WitnessId id = WitnessId::C;
  EventKind kind = EventKind::SV;
  double time = 0.0;
  EventClass classification = EventClass::proper;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool first_appearance = false;  // SR of a witness that started at zero
};

/// A sample counts as zero when raw <= this.
inline constexpr double kZeroTolerance = 1e-9;

/// Raw witness value at an arbitrary time, used to refine crossings.
using RawFunction = std::function<double(double)>;

/// Detects SV and SR events per witness. Samples of several witnesses may be
/// interleaved; each witness needs a uniform time grid. With `refine` set,
/// crossings are bisected to a bracket of 1e-10*max(1,|t|) and positive
/// local minima are searched for touching zeros; otherwise crossings are
/// linearly interpolated inside the sample interval.
std::vector<EventRecord> detect_events(const std::vector<WitnessSample>& samples,
                                       const std::function<RawFunction(WitnessId)>& refine = {});

enum class ClosedFormStatus {
  vanishes,        // t_sv is set
  never_vanishes,  // witness stays positive
  never_positive   // witness is zero from the start and never appears
};

const char* to_string(ClosedFormStatus status) noexcept;

struct ClosedFormTime {
  WitnessId id = WitnessId::C;
  ClosedFormStatus status = ClosedFormStatus::vanishes;
  double t_sv = 0.0;
  std::optional<double> t_sr;
  std::optional<double> first_appearance;
};

/// Closed-form first SV (and SR) times for the damped Werner model with equal
/// rates at zero temperature, and for the mixed frequency converter.
std::vector<ClosedFormTime> closed_form_sv_times(const ModelConfig& cfg);

}  // namespace qwit
