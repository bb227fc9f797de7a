#pragma once

// Little-endian binary helpers shared by the matrix dump and checkpoints.

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace warplda::io {

template <class T>
void put_le(std::ostream& out, T v) {
  unsigned char b[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), sizeof b);
}

template <class T>
T get_le(std::istream& in) {
  unsigned char b[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(b), sizeof b)) throw std::runtime_error("binary read: truncated stream");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(b[i]) << (8 * i);
  return v;
}

inline void put_u32(std::ostream& out, std::uint32_t v) { put_le(out, v); }
inline void put_u64(std::ostream& out, std::uint64_t v) { put_le(out, v); }
inline void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
inline std::uint32_t get_u32(std::istream& in) { return get_le<std::uint32_t>(in); }
inline std::uint64_t get_u64(std::istream& in) { return get_le<std::uint64_t>(in); }
inline double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

}  // namespace warplda::io
