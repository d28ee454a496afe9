#ifndef ARCPINN_COMMON_HPP
#define ARCPINN_COMMON_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace arcpinn {

/// Stefan-Boltzmann constant in g/(s^3 K^4)  (5.670374419e-8 W/(m^2 K^4)).
inline constexpr double kStefanBoltzmann = 5.670374419e-5;

/// 0 degC expressed in Kelvin, used by the kelvin-shifted radiation convention.
inline constexpr double kCelsiusToKelvin = 273.15;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Deterministic 64-bit generator (splitmix64). Used everywhere a seeded
/// stream is needed so results do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1), never exactly 0 or 1.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Standard normal via Box-Muller. Pairs are cached.
  double normal();

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Runs fn(block) for block = 0..n_blocks-1 on up to `threads` workers.
/// Blocks are claimed dynamically; each fn(block) must write only to
/// block-owned storage so the result is independent of the schedule.
void parallel_blocks(std::size_t n_blocks, int threads,
                     const std::function<void(std::size_t)>& fn);

int resolve_threads(int requested);

}  // namespace arcpinn

#endif  // ARCPINN_COMMON_HPP
