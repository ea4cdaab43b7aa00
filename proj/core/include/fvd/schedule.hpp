#pragma once

#include <vector>

#include "fvd/errors.hpp"

namespace fvd {

/// One control value over a segment, as a function of local time in [0, T].
struct ControlCurve {
  enum class Kind { Constant, LinearRamp, SqrtRamp };
  Kind kind = Kind::Constant;
  double v0 = 0.0;
  double v1 = 0.0;

  static ControlCurve constant(double v) { return {Kind::Constant, v, v}; }
  static ControlCurve linear(double v0, double v1) { return {Kind::LinearRamp, v0, v1}; }
  static ControlCurve sqrt_ramp(double v0, double v1) { return {Kind::SqrtRamp, v0, v1}; }

  double value(double t_local, double duration) const;
  bool is_constant() const { return kind == Kind::Constant || v0 == v1; }
};

/// Instantaneous control values (all in MHz).
struct ControlParams {
  double omega_mhz = 0.0;
  double delta_g_mhz = 0.0;
  double delta_l_mhz = 0.0;
};

struct ScheduleSegment {
  double duration_us = 0.0;
  ControlCurve omega;
  ControlCurve delta_g;
  ControlCurve delta_l;

  bool is_constant() const {
    return omega.is_constant() && delta_g.is_constant() && delta_l.is_constant();
  }
};

/// Piecewise control of (omega, delta_g, delta_l). Curves are continuous
/// within a segment; jumps at segment boundaries represent quenches.
struct Schedule {
  std::vector<ScheduleSegment> segments;

  static Schedule constant(double omega_mhz, double delta_g_mhz, double delta_l_mhz,
                           double duration_us);

  double total_duration() const;
  /// Values at global time t (us); boundary times evaluate on the later segment.
  ControlParams params_at(double t_us) const;
  void validate() const;
};

}  // namespace fvd
