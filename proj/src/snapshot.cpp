#include "thermolens/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "thermolens/errors.hpp"

namespace thermolens {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(p[b]) << (8 * b);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const Field& f) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + 8 * f.size());
  for (char c : {'T', 'L', 'N', 'S'}) out.push_back(static_cast<std::uint8_t>(c));
  out.push_back(static_cast<std::uint8_t>(f.grid.dims));
  out.push_back(kSnapshotDtypeF64);
  out.push_back(0);
  out.push_back(0);
  put_u32(out, static_cast<std::uint32_t>(f.grid.n[0]));
  put_u32(out, static_cast<std::uint32_t>(f.grid.n[1]));
  for (double v : f.values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
  }
  return out;
}

Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "TLNS", 4) != 0) {
    throw Error("snapshot: bad magic");
  }
  Snapshot s;
  s.dims = bytes[4];
  if (s.dims != 1 && s.dims != 2) throw Error("snapshot: bad dims");
  if (bytes[5] != kSnapshotDtypeF64) throw Error("snapshot: unsupported dtype");
  s.n = {get_u32(&bytes[8]), get_u32(&bytes[12])};
  const std::size_t count = static_cast<std::size_t>(s.n[0]) * s.n[1];
  if (bytes.size() != 16 + 8 * count) throw Error("snapshot: truncated payload");
  s.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[16 + 8 * i + b]) << (8 * b);
    s.values[i] = std::bit_cast<double>(bits);
  }
  return s;
}

void write_snapshot(const Field& f, const std::filesystem::path& path) {
  const auto bytes = encode_snapshot(f);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError(path.string(), "cannot open for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError(path.string(), "write failed");
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path.string(), "cannot open for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  try {
    return decode_snapshot(bytes);
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw IoError(path.string(), e.what());
  }
}

Field to_field(const Snapshot& s, const Grid& g) {
  if (s.dims != g.dims || static_cast<int>(s.n[0]) != g.n[0] || static_cast<int>(s.n[1]) != g.n[1]) {
    throw ValidationError("snapshot", "node counts do not match grid");
  }
  return Field(g, s.values);
}

}  // namespace thermolens
