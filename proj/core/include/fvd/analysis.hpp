#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fvd/protocols.hpp"

namespace fvd {

/// Fit window for the exponential-decay extraction. Formula windows are the
/// affine-in-ratio windows used for the decay-rate scans; Percentage windows
/// bracket a band of the observed decay between two fractions of the total
/// drop within a horizon.
struct FitWindow {
  enum class Method { Formula, Percentage };
  Method method = Method::Formula;
  double t_start_us = 0.0;
  double t_end_us = 0.0;
  double alpha_low = 0.2;
  double alpha_high = 0.9;
  double horizon_us = 0.0;
};

/// t_start = 0.034 + 0.0058 x, t_end = 0.11 + 0.034 x (us) at x = V/delta_l.
FitWindow formula_window(double v_over_dl);

/// Band selection on the rescaled order: y_max = 1, y_min over [0, horizon],
/// keep the earliest contiguous run of samples with
/// y in [y_min + a_low (y_max - y_min), y_min + a_high (y_max - y_min)].
/// Throws DomainError when no sample falls inside the band.
FitWindow percentage_window(const std::vector<std::pair<double, double>>& rescaled,
                            double alpha_low, double alpha_high, double horizon_us);

struct FitResult {
  double gamma = 0.0;         // 1/us
  double gamma_stderr = 0.0;
  FitWindow window;
  double r_squared = 0.0;
  int points_used = 0;
  bool truncated = false;     // window cut at the last positive sample
};

/// Least squares of ln m_res against t over the window; gamma = -slope.
/// Optional per-point standard errors (same indexing as the series) propagate
/// into gamma_stderr; otherwise the residual variance sets it.
FitResult fit_decay(const std::vector<std::pair<double, double>>& rescaled,
                    const FitWindow& window,
                    const std::vector<double>& stderrs = {});

struct ScalingFit {
  double lambda = 0.0;     // gamma ~ exp(-lambda V/delta_l)
  double intercept = 0.0;  // of ln(gamma/omega) vs V/delta_l
  double r_squared = 0.0;
  double lambda_stderr = 0.0;
  double residual_sigma = 0.0;
  std::vector<double> range_used;
};

struct ScalingPoint {
  double v_over_dl = 0.0;
  double gamma = 0.0;
  double omega_rad_per_us = 0.0;
};

/// Linear regression of ln(gamma/omega) against V/delta_l; lambda is the
/// negated slope.
ScalingFit scaling_fit(const std::vector<ScalingPoint>& points);

/// Prediction standard error of the regression at x (for outlier tests).
double scaling_prediction_stderr(const ScalingFit& fit, const std::vector<ScalingPoint>& points,
                                 double x);

struct ResonancePoint {
  double v_over_dl = 0.0;
  double sigma_final = 0.0;
};

struct ResonanceScan {
  std::vector<ResonancePoint> points;
  double peak_ratio = 0.0;   // 3-point quadratic interpolation around the max
  double peak_value = 0.0;
  bool has_peak = false;     // false when the response is identically zero
};

/// Runs the ramp protocol once per ratio (delta_l = v_nn / ratio), recording
/// the final length-L domain density.
ResonanceScan resonance_scan(const ExperimentConfig& base_config,
                             const std::vector<double>& ratios, int bubble_length,
                             double omega_f_mhz, double ramp_duration_us);

}  // namespace fvd
