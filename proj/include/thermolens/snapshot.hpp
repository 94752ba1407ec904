#pragma once

// Binary field snapshot:
//   bytes 0-3   magic "TLNS"
//   byte  4     dims (1 or 2)
//   byte  5     dtype code, 1 = float64
//   bytes 6-7   reserved, zero
//   bytes 8-15  u32 interior node count per axis (second entry 1 in 1D)
// followed by little-endian float64 values in row-major order.

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "thermolens/grid.hpp"

namespace thermolens {

inline constexpr std::uint8_t kSnapshotDtypeF64 = 1;

struct Snapshot {
  int dims = 1;
  std::array<std::uint32_t, 2> n{0, 1};
  std::vector<double> values;
};

std::vector<std::uint8_t> encode_snapshot(const Field& f);
Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes);

void write_snapshot(const Field& f, const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);
// Rebinds snapshot data to `g`; throws if the node counts differ.
Field to_field(const Snapshot& s, const Grid& g);

}  // namespace thermolens
