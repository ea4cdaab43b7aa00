#pragma once

#include "fvd/errors.hpp"

namespace fvd {

/// Single-atom decoherence: per-site decay at rate gamma1 = 1/T1 and
/// dephasing at rate gamma2 = 1/(2 T2*), entering as jump operators
/// sqrt(gamma1) sigma^-_j and sqrt(gamma2) sigma^z_j.
struct NoiseModel {
  double t1_us = 28.0;
  double t2_star_us = 3.8;
  bool enabled = true;

  double gamma1() const { return 1.0 / t1_us; }
  double gamma2() const { return 1.0 / (2.0 * t2_star_us); }

  void validate() const {
    if (!(t1_us > 0.0)) throw DomainError("NoiseModel: t1 must be positive");
    if (!(t2_star_us > 0.0)) throw DomainError("NoiseModel: t2_star must be positive");
  }
};

}  // namespace fvd
