#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace mssr {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Independent random stream for one trajectory: key = seed, counter = (draw index, stream index).
/// Satisfies UniformRandomBitGenerator.
class PhiloxStream {
 public:
  using result_type = std::uint64_t;

  PhiloxStream(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on (0, 1]; never returns 0.
  double uniform_open();
  /// Exponential with the given rate.
  double exponential(double rate);

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;  // 32-bit words consumed from buffer_
};

}  // namespace mssr
