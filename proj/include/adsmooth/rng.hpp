#pragma once

#include <cstdint>
#include <string_view>

namespace ads {

/// splitmix64 finalizer; bijective 64-bit mix.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream key for (seed, purpose tag, up to two indices). Every random draw
/// in this library comes from a generator keyed this way, so results are
/// reproducible per purpose: changing how many draws one stream consumes
/// never shifts another stream.
inline std::uint64_t derive_stream(std::uint64_t seed, std::string_view tag,
                                   std::uint64_t a = 0, std::uint64_t b = 0) {
  // FNV-1a over the tag bytes, then splitmix chaining over the indices.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h = mix64(seed ^ h);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  return h;
}

/// xoshiro256++ seeded through splitmix64. Uniforms use the top 53 bits;
/// normals are Box-Muller, two uniforms per variate, no cached pair.
class Rng {
 public:
  explicit Rng(std::uint64_t stream_key);

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();   // N(0, 1)

 private:
  std::uint64_t s_[4];
};

}  // namespace ads
