#include "accmm/rng.hpp"

#include <cmath>

#include "accmm/errors.hpp"

namespace accmm {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t RngStream::hash_label(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t RngStream::mix_seed(std::uint64_t seed, std::uint64_t label_hash) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s = label_hash;
  std::uint64_t b = splitmix64(s);
  s = a ^ rotl(b, 17);
  return splitmix64(s);
}

RngStream::RngStream(std::uint64_t seed, std::string label)
    : root_(seed), label_(std::move(label)) {
  std::uint64_t s = mix_seed(seed, hash_label(label_));
  for (auto& w : s_) w = splitmix64(s);
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::next_u01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, q;
  do {
    u = 2.0 * next_u01() - 1.0;
    v = 2.0 * next_u01() - 1.0;
    q = u * u + v * v;
  } while (q >= 1.0 || q == 0.0);
  const double f = std::sqrt(-2.0 * std::log(q) / q);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

int RngStream::next_index(int n) {
  if (n <= 0) throw contract_error("RngStream::next_index: n must be positive");
  int i = static_cast<int>(next_u01() * static_cast<double>(n));
  return i < n ? i : n - 1;
}

RngStream RngStream::child(std::string_view suffix) const {
  return RngStream(root_, label_ + "/" + std::string(suffix));
}

}  // namespace accmm
