#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "anisolp/field.hpp"

namespace anisolp {
namespace detail {

inline void put_le_double(std::ostream& os, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  os.write(b, 8);
}

inline double get_le_double(std::istream& is) {
  char b[8];
  is.read(b, 8);
  if (!is) throw std::runtime_error("fld: truncated payload");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i)
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace detail

// Layout: one ASCII header line
//   FLD v1 n1=<a> n2=<b> sizes=<s1,...,sn>
// followed by total() little-endian IEEE-754 (re,im) pairs in row-major order.
inline void write_fld(const std::string& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("fld: cannot open for write: " + path);
  os << "FLD v1 n1=" << f.lat.n1 << " n2=" << f.lat.n2 << " sizes=";
  for (int d = 0; d < f.lat.dim(); ++d) {
    if (d) os << ',';
    os << f.lat.sizes[d];
  }
  os << '\n';
  for (const cd& z : f.v) {
    detail::put_le_double(os, z.real());
    detail::put_le_double(os, z.imag());
  }
  if (!os) throw std::runtime_error("fld: write failed: " + path);
}

inline Field read_fld(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("fld: cannot open: " + path);
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("fld: missing header");
  std::istringstream hs(header);
  std::string magic, ver, tok;
  hs >> magic >> ver;
  if (magic != "FLD" || ver != "v1") throw std::runtime_error("fld: bad magic/version");
  int n1 = -1, n2 = -1;
  std::vector<int> sizes;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::runtime_error("fld: malformed header token");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "n1") n1 = std::stoi(val);
    else if (key == "n2") n2 = std::stoi(val);
    else if (key == "sizes") {
      std::istringstream vs(val);
      std::string piece;
      while (std::getline(vs, piece, ',')) sizes.push_back(std::stoi(piece));
    } else throw std::runtime_error("fld: unknown header key: " + key);
  }
  if (n1 < 0 || n2 < 0 || sizes.empty()) throw std::runtime_error("fld: incomplete header");
  Lattice lat(sizes, n1);
  if (lat.n2 != n2) throw std::runtime_error("fld: n1+n2 does not match sizes length");
  Field f(lat);
  for (auto& z : f.v) {
    const double re = detail::get_le_double(is);
    const double im = detail::get_le_double(is);
    z = cd(re, im);
  }
  char extra;
  if (is.read(&extra, 1)) throw std::runtime_error("fld: trailing bytes");
  return f;
}

}  // namespace anisolp
