#include "gwrl/util/hash.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gwrl::util {

std::string Fnv1a::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(state_));
  return std::string(buf);
}

std::string hash_bytes_hex(std::span<const std::byte> bytes) {
  Fnv1a h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string hash_string_hex(std::string_view s) {
  Fnv1a h;
  h.update(s);
  return h.hex();
}

std::string hash_file_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("hash_file_hex: cannot open " + path);
  }
  Fnv1a h;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

}  // namespace gwrl::util
