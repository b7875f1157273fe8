#include "cspd/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace cspd {
namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw FormatError("snapshot: truncated header");
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
  const int n = snap.grid.n();
  const auto ncomp = snap.components.size();
  if (ncomp == 0 || ncomp > 255) throw FormatError("snapshot: bad component count");
  for (const auto& c : snap.components)
    if (c.rows() != n || c.cols() != n) throw FormatError("snapshot: component shape mismatch");

  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("snapshot: cannot open " + path.string() + " for writing");
  os.write("CSPD", 4);
  put<std::uint32_t>(os, kSnapshotVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(n));
  put<double>(os, snap.grid.length());
  put<std::uint8_t>(os, static_cast<std::uint8_t>(snap.space));
  put<std::uint8_t>(os, static_cast<std::uint8_t>(ncomp));

  std::vector<double> row(2 * ncomp * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      for (std::size_t c = 0; c < ncomp; ++c) {
        const cplx v = snap.components[c](i, j);
        row[2 * (static_cast<std::size_t>(j) * ncomp + c)] = v.real();
        row[2 * (static_cast<std::size_t>(j) * ncomp + c) + 1] = v.imag();
      }
    os.write(reinterpret_cast<const char*>(row.data()),
             static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!os) throw FormatError("snapshot: write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("snapshot: cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "CSPD", 4) != 0) throw FormatError("snapshot: bad magic");
  const auto version = get<std::uint32_t>(is);
  if (version != kSnapshotVersion)
    throw FormatError("snapshot: unsupported version " + std::to_string(version));
  const auto n = static_cast<int>(get<std::uint32_t>(is));
  const auto length = get<double>(is);
  const auto rep = get<std::uint8_t>(is);
  const auto ncomp = static_cast<std::size_t>(get<std::uint8_t>(is));
  if (rep > 1) throw FormatError("snapshot: bad representation byte");
  if (ncomp == 0) throw FormatError("snapshot: zero components");

  Snapshot snap{Grid(n, length), static_cast<Space>(rep), {}};
  snap.components.assign(ncomp, CArray(n, n));
  std::vector<double> row(2 * ncomp * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    is.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!is) throw FormatError("snapshot: truncated payload");
    for (int j = 0; j < n; ++j)
      for (std::size_t c = 0; c < ncomp; ++c)
        snap.components[c](i, j) = cplx(row[2 * (static_cast<std::size_t>(j) * ncomp + c)],
                                        row[2 * (static_cast<std::size_t>(j) * ncomp + c) + 1]);
  }
  return snap;
}

}  // namespace cspd
