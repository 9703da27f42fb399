#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace rqlsha {

using Digest = std::array<uint8_t, 32>;
using Words8 = std::array<uint32_t, 8>;
using Words16 = std::array<uint32_t, 16>;

namespace sha {

inline constexpr Words8 kIv = {0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u, 0xa54ff53au,
                               0x510e527fu, 0x9b05688cu, 0x1f83d9abu, 0x5be0cd19u};
extern const std::array<uint32_t, 64> kRoundConstants;

inline uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }
inline uint32_t big_sigma0(uint32_t x) { return rotr(x, 2) ^ rotr(x, 13) ^ rotr(x, 22); }
inline uint32_t big_sigma1(uint32_t x) { return rotr(x, 6) ^ rotr(x, 11) ^ rotr(x, 25); }
inline uint32_t small_sigma0(uint32_t x) { return rotr(x, 7) ^ rotr(x, 18) ^ (x >> 3); }
inline uint32_t small_sigma1(uint32_t x) { return rotr(x, 17) ^ rotr(x, 19) ^ (x >> 10); }
inline uint32_t ch(uint32_t e, uint32_t f, uint32_t g) { return (e & f) ^ (~e & g); }
inline uint32_t maj(uint32_t a, uint32_t b, uint32_t c) {
  return (a & b) ^ (a & c) ^ (b & c);
}

/// One compression of a 512-bit block into the running state.
Words8 compress(const Words8& state, const Words16& block);

}  // namespace sha

Digest sha256(const uint8_t* data, size_t len);
Digest sha256(const std::vector<uint8_t>& data);
Digest sha256(const std::string& data);
Digest double_sha256(const std::vector<uint8_t>& data);

std::string to_hex(const Digest& d);
std::vector<uint8_t> from_hex(const std::string& hex);

}  // namespace rqlsha
