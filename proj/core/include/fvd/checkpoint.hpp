#pragma once

#include <string>

#include "fvd/state.hpp"

namespace fvd {

/// State checkpoint, little-endian throughout:
///   bytes 0..7   magic "FVDSTATE"
///   bytes 8..11  format version (u32, currently 1)
///   bytes 12..15 n_sites (u32)
///   bytes 16..23 amplitude count (u64, = 2^n_sites)
///   then count amplitudes as (real, imag) float64 pairs.
void write_state_checkpoint(const std::string& path, const StateVector& state);
StateVector read_state_checkpoint(const std::string& path);

inline constexpr std::uint32_t kCheckpointVersion = 1;

}  // namespace fvd
