#include "rgcg/rng.hpp"

#include <cmath>
#include <numbers>

namespace rgcg {

namespace {

// splitmix64 finalizer; full avalanche, so key + i*GAMMA enumerates a
// high-quality stream indexed by i.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::string_view purpose, std::uint64_t run) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(h, &seed, sizeof(seed));
  h = fnv1a(h, purpose.data(), purpose.size());
  h = fnv1a(h, &run, sizeof(run));
  key_ = h;
}

std::uint64_t RngStream::next_u64() {
  return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL);
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 shifted into (0, 1] so log(u1) is finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

}  // namespace rgcg
