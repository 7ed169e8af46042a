#ifndef POLYBAN_HASH_HPP
#define POLYBAN_HASH_HPP

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>

namespace polyban {

/// FNV-1a 64-bit. Used as the content fingerprint in manifests; replay
/// determinism is checked by comparing these across runs.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(bytes);
  return os.str();
}

}  // namespace polyban

#endif  // POLYBAN_HASH_HPP
