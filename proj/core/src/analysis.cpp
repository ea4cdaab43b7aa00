#include "fvd/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "fvd/errors.hpp"
#include "fvd/parallel.hpp"

namespace fvd {

FitWindow formula_window(double v_over_dl) {
  if (!(v_over_dl > 0.0)) throw DomainError("formula_window: ratio must be positive");
  FitWindow w;
  w.method = FitWindow::Method::Formula;
  w.t_start_us = 0.034 + 0.0058 * v_over_dl;
  w.t_end_us = 0.11 + 0.034 * v_over_dl;
  return w;
}

FitWindow percentage_window(const std::vector<std::pair<double, double>>& rescaled,
                            double alpha_low, double alpha_high, double horizon_us) {
  if (rescaled.empty()) throw DomainError("percentage_window: empty series");
  if (rescaled.back().first < horizon_us - 1e-9)
    throw DomainError("percentage_window: series does not cover the horizon");

  double y_min = rescaled.front().second;
  for (const auto& [t, y] : rescaled) {
    if (t > horizon_us + 1e-12) break;
    y_min = std::min(y_min, y);
  }
  const double y_max = 1.0;
  if (y_max - y_min < 1e-12)
    throw DomainError("percentage_window: series shows no decay over the horizon");
  const double y_low = y_min + alpha_low * (y_max - y_min);
  const double y_high = y_min + alpha_high * (y_max - y_min);

  // earliest contiguous run inside the band
  int begin = -1, end = -1;
  for (std::size_t i = 0; i < rescaled.size() && rescaled[i].first <= horizon_us + 1e-12; ++i) {
    const double y = rescaled[i].second;
    const bool in_band = y >= y_low && y <= y_high;
    if (in_band && begin < 0) begin = static_cast<int>(i);
    if (!in_band && begin >= 0) {
      end = static_cast<int>(i);
      break;
    }
  }
  if (begin < 0)
    throw DomainError("percentage_window: no samples inside the decay band");
  if (end < 0) {
    end = static_cast<int>(rescaled.size());
    while (end > 0 && rescaled[end - 1].first > horizon_us + 1e-12) --end;
  }

  FitWindow w;
  w.method = FitWindow::Method::Percentage;
  w.alpha_low = alpha_low;
  w.alpha_high = alpha_high;
  w.horizon_us = horizon_us;
  w.t_start_us = rescaled[begin].first;
  w.t_end_us = rescaled[end - 1].first;
  return w;
}

FitResult fit_decay(const std::vector<std::pair<double, double>>& rescaled,
                    const FitWindow& window, const std::vector<double>& stderrs) {
  if (!stderrs.empty() && stderrs.size() != rescaled.size())
    throw DimensionError("fit_decay: stderr vector size mismatch");

  std::vector<double> ts, logs, relerr;
  bool truncated = false;
  double first_nonpositive = 0.0;
  for (std::size_t i = 0; i < rescaled.size(); ++i) {
    const auto& [t, y] = rescaled[i];
    if (t < window.t_start_us - 1e-12 || t > window.t_end_us + 1e-12) continue;
    if (y <= 0.0) {
      // deep decay crossed zero: fit only the positive head of the window
      truncated = true;
      first_nonpositive = t;
      break;
    }
    ts.push_back(t);
    logs.push_back(std::log(y));
    if (!stderrs.empty()) relerr.push_back(stderrs[i] / y);
  }
  if (ts.size() < 3) {
    std::string msg = "fit_decay: fewer than 3 positive samples inside the window";
    if (truncated)
      msg += " (non-positive rescaled order at t = " + std::to_string(first_nonpositive) + " us)";
    throw DomainError(msg);
  }

  const std::size_t n = ts.size();
  double t_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t_mean += ts[i];
    y_mean += logs[i];
  }
  t_mean /= n;
  y_mean /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (ts[i] - t_mean) * (ts[i] - t_mean);
    sxy += (ts[i] - t_mean) * (logs[i] - y_mean);
  }
  if (sxx == 0.0) throw DomainError("fit_decay: degenerate time axis");
  const double slope = sxy / sxx;
  const double icept = y_mean - slope * t_mean;

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fit = icept + slope * ts[i];
    ss_res += (logs[i] - fit) * (logs[i] - fit);
    ss_tot += (logs[i] - y_mean) * (logs[i] - y_mean);
  }

  FitResult result;
  result.gamma = -slope;
  result.window = window;
  result.points_used = static_cast<int>(n);
  result.truncated = truncated;
  result.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  if (!relerr.empty()) {
    // slope = sum c_i y_i with c_i = (t_i - mean)/Sxx
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = (ts[i] - t_mean) / sxx;
      var += c * c * relerr[i] * relerr[i];
    }
    result.gamma_stderr = std::sqrt(var);
  } else if (n > 2) {
    result.gamma_stderr = std::sqrt(ss_res / (n - 2) / sxx);
  }
  if (!std::isfinite(result.gamma)) throw DomainError("fit_decay: non-finite rate");
  return result;
}

ScalingFit scaling_fit(const std::vector<ScalingPoint>& points) {
  if (points.size() < 4) throw DomainError("scaling_fit: at least 4 points required");
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    if (!(p.gamma > 0.0)) throw DomainError("scaling_fit: rates must be positive");
    xs.push_back(p.v_over_dl);
    ys.push_back(std::log(p.gamma / p.omega_rad_per_us));
  }
  const std::size_t n = xs.size();
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xm += xs[i];
    ym += ys[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - xm) * (xs[i] - xm);
    sxy += (xs[i] - xm) * (ys[i] - ym);
  }
  const double slope = sxy / sxx;

  ScalingFit fit;
  fit.lambda = -slope;
  fit.intercept = ym - slope * xm;
  fit.range_used = xs;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = fit.intercept + slope * xs[i];
    ss_res += (ys[i] - f) * (ys[i] - f);
    ss_tot += (ys[i] - ym) * (ys[i] - ym);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  if (n > 2) {
    fit.residual_sigma = std::sqrt(ss_res / (n - 2));
    fit.lambda_stderr = fit.residual_sigma / std::sqrt(sxx);
  }
  return fit;
}

double scaling_prediction_stderr(const ScalingFit& fit, const std::vector<ScalingPoint>& points,
                                 double x) {
  const std::size_t n = points.size();
  double xm = 0.0;
  for (const auto& p : points) xm += p.v_over_dl;
  xm /= n;
  double sxx = 0.0;
  for (const auto& p : points) sxx += (p.v_over_dl - xm) * (p.v_over_dl - xm);
  return fit.residual_sigma * std::sqrt(1.0 + 1.0 / n + (x - xm) * (x - xm) / sxx);
}

ResonanceScan resonance_scan(const ExperimentConfig& base_config,
                             const std::vector<double>& ratios, int bubble_length,
                             double omega_f_mhz, double ramp_duration_us) {
  if (ratios.empty()) throw DomainError("resonance_scan: empty ratio list");
  for (std::size_t i = 1; i < ratios.size(); ++i)
    if (ratios[i] <= ratios[i - 1])
      throw DomainError("resonance_scan: ratios must be sorted ascending");

  ResonanceScan scan;
  scan.points.resize(ratios.size());
  parallel_for_chunks(ratios.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      ExperimentConfig cfg = base_config;
      cfg.spec.delta_l_mhz = cfg.spec.v_nn_mhz / ratios[i];
      cfg.sample_times_us = {0.0, ramp_duration_us};
      const RampResult run = resonance_ramp_experiment(cfg, omega_f_mhz, ramp_duration_us);
      scan.points[i] =
          ResonancePoint{ratios[i], run.series.samples.back().sigma_l.at(bubble_length)};
    }
  });

  std::size_t imax = 0;
  for (std::size_t i = 1; i < scan.points.size(); ++i)
    if (scan.points[i].sigma_final > scan.points[imax].sigma_final) imax = i;
  scan.peak_value = scan.points[imax].sigma_final;
  scan.peak_ratio = scan.points[imax].v_over_dl;
  scan.has_peak = scan.peak_value > 0.0;

  if (scan.has_peak && imax > 0 && imax + 1 < scan.points.size()) {
    const double ym = scan.points[imax - 1].sigma_final;
    const double y0 = scan.points[imax].sigma_final;
    const double yp = scan.points[imax + 1].sigma_final;
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) {
      const double xm = scan.points[imax - 1].v_over_dl;
      const double xp = scan.points[imax + 1].v_over_dl;
      const double h = 0.5 * (xp - xm);
      scan.peak_ratio = scan.points[imax].v_over_dl - 0.5 * h * (yp - ym) / denom;
      scan.peak_value = y0 - 0.125 * (yp - ym) * (yp - ym) / denom;
    }
  }
  return scan;
}

}  // namespace fvd
