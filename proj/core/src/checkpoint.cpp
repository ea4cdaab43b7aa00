#include "fvd/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "fvd/errors.hpp"

namespace fvd {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace {
constexpr char kMagic[8] = {'F', 'V', 'D', 'S', 'T', 'A', 'T', 'E'};
}

void write_state_checkpoint(const std::string& path, const StateVector& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open checkpoint for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t version = kCheckpointVersion;
  const std::uint32_t n = static_cast<std::uint32_t>(state.n_sites);
  const std::uint64_t count = state.dim();
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&count), 8);
  out.write(reinterpret_cast<const char*>(state.amp.data()),
            static_cast<std::streamsize>(count * 2 * sizeof(double)));
  if (!out) throw ConfigError("short write on checkpoint: " + path);
}

StateVector read_state_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw ConfigError("not a state checkpoint: " + path);
  std::uint32_t version = 0, n = 0;
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&count), 8);
  if (version != kCheckpointVersion)
    throw ConfigError("unsupported checkpoint version " + std::to_string(version));
  if (n < 1 || n > 30 || count != (std::uint64_t{1} << n))
    throw ConfigError("corrupt checkpoint header: " + path);
  StateVector state(static_cast<int>(n));
  in.read(reinterpret_cast<char*>(state.amp.data()),
          static_cast<std::streamsize>(count * 2 * sizeof(double)));
  if (!in) throw ConfigError("short read on checkpoint: " + path);
  return state;
}

}  // namespace fvd
