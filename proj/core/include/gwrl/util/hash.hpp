#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace gwrl::util {

// FNV-1a. Provenance fingerprints only, not cryptographic.
class Fnv1a {
public:
  void update(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
  }

  void update(std::string_view s) { update(s.data(), s.size()); }

  template <typename T>
  void update_value(const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    update(&v, sizeof(T));
  }

  std::uint64_t digest() const { return state_; }
  std::string hex() const;

private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string hash_bytes_hex(std::span<const std::byte> bytes);
std::string hash_string_hex(std::string_view s);

// Hash of a file's contents. Throws std::runtime_error if unreadable.
std::string hash_file_hex(const std::string& path);

}  // namespace gwrl::util
