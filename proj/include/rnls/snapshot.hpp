#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rnls/field.hpp"

namespace rnls {

// Binary snapshot, bit-exact layout:
//   magic "RNLS" | version u32=1 | N u32 | J-offset i32 | M u32 | L f64 |
//   time f64 | N*M*M complex samples as little-endian (re f64, im f64),
//   component-major, row-major within a component (x index fastest).
// Component i carries label j = i + offset, so labels must be contiguous.

namespace detail {

template <typename T>
void put(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("snapshot: truncated file");
  return v;
}

}  // namespace detail

template <typename Real>
void write_snapshot(const std::string& path, const VecField<Real>& u,
                    Real time) {
  static_assert(sizeof(double) == 8);
  const int n = u.n_components();
  for (int i = 1; i < n; ++i)
    if (u.labels[i] != u.labels[0] + i)
      throw std::invalid_argument(
          "write_snapshot: labels must be contiguous ascending");

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_snapshot: cannot open " + path);
  os.write("RNLS", 4);
  detail::put<std::uint32_t>(os, 1u);
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(n));
  detail::put<std::int32_t>(os, static_cast<std::int32_t>(u.labels[0]));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(u.grid.points));
  detail::put<double>(os, static_cast<double>(u.grid.box_length));
  detail::put<double>(os, static_cast<double>(time));
  for (const auto& comp : u.comps)
    for (Eigen::Index i = 0; i < u.grid.points; ++i)      // row = x index
      for (Eigen::Index j = 0; j < u.grid.points; ++j) {  // within row: y
        detail::put<double>(os, static_cast<double>(comp(i, j).real()));
        detail::put<double>(os, static_cast<double>(comp(i, j).imag()));
      }
  if (!os) throw std::runtime_error("write_snapshot: write failed " + path);
}

template <typename Real>
std::pair<VecField<Real>, Real> read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_snapshot: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "RNLS", 4) != 0)
    throw std::runtime_error("read_snapshot: bad magic in " + path);
  const auto version = detail::get<std::uint32_t>(is);
  if (version != 1u)
    throw std::runtime_error("read_snapshot: unsupported version");
  const auto n = detail::get<std::uint32_t>(is);
  const auto offset = detail::get<std::int32_t>(is);
  const auto m = detail::get<std::uint32_t>(is);
  const auto box = detail::get<double>(is);
  const auto time = detail::get<double>(is);
  if (n == 0 || m < 4) throw std::runtime_error("read_snapshot: bad header");

  std::vector<int> labels(n);
  for (std::uint32_t i = 0; i < n; ++i) labels[i] = offset + static_cast<int>(i);
  VecField<Real> u = make_zero_field(make_grid<Real>(Real(box), m), labels);
  for (auto& comp : u.comps)
    for (Eigen::Index i = 0; i < comp.rows(); ++i)
      for (Eigen::Index j = 0; j < comp.cols(); ++j) {
        const double re = detail::get<double>(is);
        const double im = detail::get<double>(is);
        comp(i, j) = std::complex<Real>(Real(re), Real(im));
      }
  return {std::move(u), Real(time)};
}

}  // namespace rnls
