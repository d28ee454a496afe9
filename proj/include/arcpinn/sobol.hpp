#ifndef ARCPINN_SOBOL_HPP
#define ARCPINN_SOBOL_HPP

#include <array>
#include <cstdint>

#include "arcpinn/common.hpp"

namespace arcpinn {

/// Sobol' low-discrepancy sequence over [0,1)^d, d <= 8, built on the
/// Joe-Kuo direction numbers. Points are indexed directly by the binary
/// expansion of the index (no Gray-code reordering), so dimension 0 equals
/// the base-2 radical inverse and any index can be addressed at random.
/// Index 0 is the origin; streams skip it by default.
class SobolStream {
 public:
  static constexpr int kMaxDimensions = 8;
  static constexpr int kBits = 32;

  explicit SobolStream(int dimensions, std::uint64_t skip = 1);

  int dimensions() const { return dim_; }
  std::uint64_t index() const { return index_; }
  void seek(std::uint64_t index) { index_ = index; }

  /// Point at an arbitrary index, independent of the stream position.
  std::array<double, kMaxDimensions> at(std::uint64_t index) const;

  /// Point at the current index; advancing the index is the only mutation.
  std::array<double, kMaxDimensions> next();

 private:
  int dim_;
  std::uint64_t index_;
  std::uint32_t v_[kMaxDimensions][kBits];
};

}  // namespace arcpinn

#endif  // ARCPINN_SOBOL_HPP
