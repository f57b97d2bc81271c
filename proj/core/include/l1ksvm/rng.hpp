#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <vector>

namespace l1ksvm {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Stable, order-sensitive mix of a base seed with any number of integer keys.
std::uint64_t mix_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) noexcept;

// xoshiro256** seeded through splitmix64. The bit stream and every derived
// variate below are defined here rather than by <random>, so sequences are
// identical across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return next(); }

  std::uint64_t next() noexcept;
  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  // Uniform integer in [0, n). Unbiased (Lemire's rejection method). n > 0.
  std::uint64_t below(std::uint64_t n) noexcept;
  // Standard normal via the Marsaglia polar method.
  double normal() noexcept;

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// k distinct indices from [0, n), returned in ascending order.
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k);

// In-place Fisher-Yates shuffle driven by Rng::below.
template <typename T>
void shuffle(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace l1ksvm
