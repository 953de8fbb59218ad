#pragma once

#include <array>
#include <cstdint>

namespace linres {

// Counter-based Philox4x64-10 generator. A stream is fully identified by
// its 128-bit key, and every draw depends only on (key, counter), so
// independent streams can be handed to concurrent workers and replayed
// bit-identically no matter how work is scheduled. This is what makes the
// experiment CSVs reproducible across thread counts.
class Philox4x64 {
 public:
  explicit Philox4x64(std::uint64_t key0, std::uint64_t key1 = 0)
      : key_{key0, key1} {}

  // Raw 64-bit draw.
  std::uint64_t next_u64();

  // Uniform double in [0, 1), 53 significant bits.
  double next_unit();

  // Standard normal via Box-Muller. Pairs are cached, so interleaving
  // with next_unit() changes the stream but stays deterministic.
  double next_gaussian();

  // One Philox block: encrypt `ctr` under `key`. Exposed for seed
  // derivation and for the known-answer tests.
  static std::array<std::uint64_t, 4> block(
      const std::array<std::uint64_t, 2>& key,
      const std::array<std::uint64_t, 4>& ctr);

 private:
  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_{0, 0, 0, 0};
  std::array<std::uint64_t, 4> buffer_{};
  int buffered_ = 0;  // unread values left in buffer_
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

// Derives a child seed from (master, role, index) with one Philox block.
// Experiment drivers use this to give every grid cell its own streams:
// the mapping is documented in the run manifest and is part of the
// reproducibility contract.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t role,
                          std::uint64_t index);

}  // namespace linres
