#pragma once

#include <array>
#include <cstdint>

namespace yiarq::channel {

inline constexpr char kRngAlgorithmId[] = "philox4x32-10";

// One block of the Philox 4x32 counter-based generator, 10 rounds.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Reproducible substream addressed by (seed, stream_id).  The seed forms the
// Philox key and the stream id the upper counter words, so distinct stream
// ids index disjoint counter ranges of the same generator.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint32_t next_u32();

  // Uniform on (0, 1), endpoints excluded.
  double uniform();

  // Standard normal via the polar (Marsaglia) method.
  double normal();

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::array<std::uint32_t, 2> key_{};
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_normal_ = false;
};

}  // namespace yiarq::channel
