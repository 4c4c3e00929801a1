#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include "bindiag/error.hpp"

namespace bindiag::detail {

// Little-endian host assumed; files are not meant to cross architectures.
template <typename T>
void writePod(std::ostream& out, const T& value) {
  static_assert(std::is_trivially_copyable_v<T>);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T readPod(std::istream& in) {
  static_assert(std::is_trivially_copyable_v<T>);
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw IoError("unexpected end of binary stream");
  }
  return value;
}

inline void expectMagic(std::istream& in, const char (&magic)[5]) {
  char buf[4] = {};
  if (!in.read(buf, 4) || std::string(buf, 4) != std::string(magic, 4)) {
    throw IoError(std::string("bad magic, expected ") + magic);
  }
}

}  // namespace bindiag::detail
