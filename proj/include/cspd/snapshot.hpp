#pragma once

#include <filesystem>
#include <vector>

#include "cspd/field.hpp"

namespace cspd {

// Binary field snapshot, little-endian:
//   char[4]  magic "CSPD"
//   u32      version (1)
//   u32      n
//   f64      L
//   u8       representation (0 physical, 1 Fourier)
//   u8       components
// followed by n*n*components complex doubles (re, im). Grid points are
// row-major in FFT order; the components of one point are adjacent.

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  Grid grid;
  Space space = Space::Physical;
  std::vector<CArray> components;
};

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

template <int C>
Snapshot make_snapshot(const Field<C>& f) {
  Snapshot s{f.grid, f.space, {}};
  for (int c = 0; c < C; ++c) s.components.push_back(f[c]);
  return s;
}

template <int C>
Field<C> field_from_snapshot(const Snapshot& s) {
  if (static_cast<int>(s.components.size()) != C)
    throw FormatError("snapshot has " + std::to_string(s.components.size()) +
                      " components, expected " + std::to_string(C));
  Field<C> f;
  f.grid = s.grid;
  f.space = s.space;
  for (int c = 0; c < C; ++c) f[c] = s.components[static_cast<std::size_t>(c)];
  return f;
}

template <int C>
void write_snapshot(const std::filesystem::path& path, const Field<C>& f) {
  write_snapshot(path, make_snapshot(f));
}

}  // namespace cspd
