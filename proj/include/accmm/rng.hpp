#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace accmm {

// Seeded deterministic random stream (xoshiro256++ core).
//
// A stream is identified by (root seed, label). The generator state is
// derived as splitmix64 iterates of mix_seed(seed, hash_label(label)), so the
// same pair reproduces the identical scalar sequence, and distinct labels
// under one root seed give unrelated streams. Doubles are built from raw
// 64-bit draws ((x >> 11) * 2^-53) and normals by the polar method, so the
// sequence does not depend on any platform distribution implementation.
//
// Streams are single-owner mutable state: never share one across concurrent
// tasks. Canonical labels used by the runner: data-gen, sphere, sphere.y,
// minibatch, output-pick.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string label);

  std::uint64_t next_u64();
  // Uniform on [0, 1).
  double next_u01();
  // Standard normal (Marsaglia polar; caches the spare deviate).
  double next_normal();
  // Uniform integer in [0, n).
  int next_index(int n);

  // Derived stream with label "<label>/<suffix>" under the same root seed.
  RngStream child(std::string_view suffix) const;

  std::uint64_t root_seed() const { return root_; }
  const std::string& label() const { return label_; }

  // Published mixing function: both halves are splitmix64 scrambles.
  static std::uint64_t hash_label(std::string_view label);  // FNV-1a 64
  static std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t label_hash);

 private:
  std::uint64_t s_[4];
  std::uint64_t root_;
  std::string label_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace accmm
