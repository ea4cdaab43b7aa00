#include "fvd/schedule.hpp"

#include <cmath>

namespace fvd {

double ControlCurve::value(double t_local, double duration) const {
  switch (kind) {
    case Kind::Constant: return v0;
    case Kind::LinearRamp: return v0 + (v1 - v0) * (t_local / duration);
    case Kind::SqrtRamp: return v0 + (v1 - v0) * std::sqrt(std::max(0.0, t_local / duration));
  }
  return v0;
}

Schedule Schedule::constant(double omega_mhz, double delta_g_mhz, double delta_l_mhz,
                            double duration_us) {
  Schedule s;
  s.segments.push_back(ScheduleSegment{duration_us, ControlCurve::constant(omega_mhz),
                                       ControlCurve::constant(delta_g_mhz),
                                       ControlCurve::constant(delta_l_mhz)});
  return s;
}

double Schedule::total_duration() const {
  double t = 0.0;
  for (const auto& seg : segments) t += seg.duration_us;
  return t;
}

ControlParams Schedule::params_at(double t_us) const {
  validate();
  double t = t_us;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& seg = segments[i];
    const bool last = (i + 1 == segments.size());
    if (t < seg.duration_us || (last && t <= seg.duration_us + 1e-12)) {
      const double tl = std::min(t, seg.duration_us);
      return ControlParams{seg.omega.value(tl, seg.duration_us),
                           seg.delta_g.value(tl, seg.duration_us),
                           seg.delta_l.value(tl, seg.duration_us)};
    }
    t -= seg.duration_us;
  }
  throw DomainError("Schedule::params_at: time outside schedule span");
}

void Schedule::validate() const {
  if (segments.empty()) throw DomainError("schedule has no segments");
  for (const auto& seg : segments)
    if (!(seg.duration_us > 0.0)) throw DomainError("schedule segment duration must be > 0");
}

}  // namespace fvd
