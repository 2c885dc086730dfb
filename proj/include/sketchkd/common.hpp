#ifndef SKETCHKD_COMMON_HPP_
#define SKETCHKD_COMMON_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sketchkd {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// All recoverable failures surface as sk_error with a one-line message.
class sk_error : public std::runtime_error {
 public:
  explicit sk_error(const std::string& msg) : std::runtime_error(msg) {}
};

template <typename... Args>
[[noreturn]] inline void fail(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  throw sk_error(os.str());
}

template <typename... Args>
inline void require(bool cond, Args&&... args) {
  if (!cond) fail(std::forward<Args>(args)...);
}

// FNV-1a, used for config hashes and seed splitting.
inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a64(s.data(), s.size(), h);
}

}  // namespace sketchkd

#endif  // SKETCHKD_COMMON_HPP_
