#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "fvd/model.hpp"
#include "fvd/noise.hpp"
#include "fvd/schedule.hpp"
#include "fvd/state.hpp"

namespace fvd {

inline constexpr int kLiouvillianMaxSites = 6;

struct LiouvillianOptions {
  double tol = 1e-10;  // local error per step (max-norm)
};

struct DensityMatrixResult {
  std::vector<double> times;
  std::vector<Eigen::MatrixXcd> rhos;
};

/// Dense density-matrix integration of the same decay/dephasing generator the
/// trajectory engine unravels; the small-system oracle for trajectory
/// validation. Capped at kLiouvillianMaxSites (cost scales as 4^N).
DensityMatrixResult liouvillian_reference(const StateVector& initial,
                                          const HamiltonianSpec& spec, const Schedule& schedule,
                                          std::span<const double> sample_times,
                                          const std::optional<NoiseModel>& noise,
                                          const LiouvillianOptions& opts = {});

/// Dense matrix of an OperatorSum in the occupation basis (test-scale sizes).
Eigen::MatrixXcd dense_matrix(const OperatorSum& op);

/// tr(op rho).
Complex expectation(const OperatorSum& op, const Eigen::MatrixXcd& rho);

}  // namespace fvd
