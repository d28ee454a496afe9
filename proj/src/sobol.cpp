#include "arcpinn/sobol.hpp"

namespace arcpinn {

namespace {

// Joe-Kuo "new" direction numbers for dimensions 2..8 (dimension 1 is the
// van der Corput sequence). s = polynomial degree, a = coefficient bits,
// m = initial direction integers.
struct JoeKuoEntry {
  int s;
  std::uint32_t a;
  std::uint32_t m[5];
};

constexpr JoeKuoEntry kJoeKuo[7] = {
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
};

}  // namespace

SobolStream::SobolStream(int dimensions, std::uint64_t skip)
    : dim_(dimensions), index_(skip) {
  if (dimensions < 1 || dimensions > kMaxDimensions)
    throw NumericError("SobolStream: dimension count " +
                       std::to_string(dimensions) + " exceeds table capacity " +
                       std::to_string(kMaxDimensions));

  for (int k = 0; k < kBits; ++k) v_[0][k] = 1u << (31 - k);

  for (int d = 1; d < dim_; ++d) {
    const JoeKuoEntry& e = kJoeKuo[d - 1];
    for (int k = 0; k < e.s && k < kBits; ++k) v_[d][k] = e.m[k] << (31 - k);
    for (int k = e.s; k < kBits; ++k) {
      std::uint32_t x = v_[d][k - e.s] ^ (v_[d][k - e.s] >> e.s);
      for (int i = 1; i < e.s; ++i)
        if ((e.a >> (e.s - 1 - i)) & 1u) x ^= v_[d][k - i];
      v_[d][k] = x;
    }
  }
}

std::array<double, SobolStream::kMaxDimensions> SobolStream::at(
    std::uint64_t index) const {
  std::array<double, kMaxDimensions> p{};
  std::uint32_t acc[kMaxDimensions] = {};
  std::uint64_t n = index;
  for (int k = 0; n != 0 && k < kBits; ++k, n >>= 1) {
    if (n & 1ull)
      for (int d = 0; d < dim_; ++d) acc[d] ^= v_[d][k];
  }
  for (int d = 0; d < dim_; ++d) p[d] = acc[d] * 0x1.0p-32;
  return p;
}

std::array<double, SobolStream::kMaxDimensions> SobolStream::next() {
  return at(index_++);
}

}  // namespace arcpinn
