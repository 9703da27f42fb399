#include "rqlsha/sha256.hpp"

#include <cstring>
#include <stdexcept>

namespace rqlsha {

namespace sha {

const std::array<uint32_t, 64> kRoundConstants = {
    0x428a2f98u, 0x71374491u, 0xb5c0fbcfu, 0xe9b5dba5u, 0x3956c25bu, 0x59f111f1u,
    0x923f82a4u, 0xab1c5ed5u, 0xd807aa98u, 0x12835b01u, 0x243185beu, 0x550c7dc3u,
    0x72be5d74u, 0x80deb1feu, 0x9bdc06a7u, 0xc19bf174u, 0xe49b69c1u, 0xefbe4786u,
    0x0fc19dc6u, 0x240ca1ccu, 0x2de92c6fu, 0x4a7484aau, 0x5cb0a9dcu, 0x76f988dau,
    0x983e5152u, 0xa831c66du, 0xb00327c8u, 0xbf597fc7u, 0xc6e00bf3u, 0xd5a79147u,
    0x06ca6351u, 0x14292967u, 0x27b70a85u, 0x2e1b2138u, 0x4d2c6dfcu, 0x53380d13u,
    0x650a7354u, 0x766a0abbu, 0x81c2c92eu, 0x92722c85u, 0xa2bfe8a1u, 0xa81a664bu,
    0xc24b8b70u, 0xc76c51a3u, 0xd192e819u, 0xd6990624u, 0xf40e3585u, 0x106aa070u,
    0x19a4c116u, 0x1e376c08u, 0x2748774cu, 0x34b0bcb5u, 0x391c0cb3u, 0x4ed8aa4au,
    0x5b9cca4fu, 0x682e6ff3u, 0x748f82eeu, 0x78a5636fu, 0x84c87814u, 0x8cc70208u,
    0x90befffau, 0xa4506cebu, 0xbef9a3f7u, 0xc67178f2u};

Words8 compress(const Words8& state, const Words16& block) {
  uint32_t w[64];
  for (int i = 0; i < 16; ++i) w[i] = block[i];
  for (int i = 16; i < 64; ++i)
    w[i] = small_sigma1(w[i - 2]) + w[i - 7] + small_sigma0(w[i - 15]) + w[i - 16];

  uint32_t a = state[0], b = state[1], c = state[2], d = state[3];
  uint32_t e = state[4], f = state[5], g = state[6], h = state[7];
  for (int i = 0; i < 64; ++i) {
    uint32_t t1 = h + big_sigma1(e) + ch(e, f, g) + kRoundConstants[i] + w[i];
    uint32_t t2 = big_sigma0(a) + maj(a, b, c);
    h = g;
    g = f;
    f = e;
    e = d + t1;
    d = c;
    c = b;
    b = a;
    a = t1 + t2;
  }
  return {state[0] + a, state[1] + b, state[2] + c, state[3] + d,
          state[4] + e, state[5] + f, state[6] + g, state[7] + h};
}

}  // namespace sha

Digest sha256(const uint8_t* data, size_t len) {
  Words8 state = sha::kIv;
  uint64_t bitlen = uint64_t(len) * 8;

  auto absorb = [&](const uint8_t* p) {
    Words16 blk;
    for (int i = 0; i < 16; ++i)
      blk[i] = (uint32_t(p[4 * i]) << 24) | (uint32_t(p[4 * i + 1]) << 16) |
               (uint32_t(p[4 * i + 2]) << 8) | uint32_t(p[4 * i + 3]);
    state = sha::compress(state, blk);
  };

  size_t full = len / 64;
  for (size_t i = 0; i < full; ++i) absorb(data + 64 * i);

  uint8_t tail[128] = {0};
  size_t rem = len - full * 64;
  std::memcpy(tail, data + full * 64, rem);
  tail[rem] = 0x80;
  size_t tail_len = rem + 1 <= 56 ? 64 : 128;
  for (int i = 0; i < 8; ++i)
    tail[tail_len - 1 - i] = uint8_t((bitlen >> (8 * i)) & 0xff);
  absorb(tail);
  if (tail_len == 128) absorb(tail + 64);

  Digest d;
  for (int i = 0; i < 8; ++i) {
    d[4 * i] = uint8_t(state[i] >> 24);
    d[4 * i + 1] = uint8_t(state[i] >> 16);
    d[4 * i + 2] = uint8_t(state[i] >> 8);
    d[4 * i + 3] = uint8_t(state[i]);
  }
  return d;
}

Digest sha256(const std::vector<uint8_t>& data) { return sha256(data.data(), data.size()); }
Digest sha256(const std::string& data) {
  return sha256(reinterpret_cast<const uint8_t*>(data.data()), data.size());
}

Digest double_sha256(const std::vector<uint8_t>& data) {
  Digest first = sha256(data);
  return sha256(first.data(), first.size());
}

std::string to_hex(const Digest& d) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (uint8_t b : d) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xf]);
  }
  return s;
}

std::vector<uint8_t> from_hex(const std::string& hex) {
  if (hex.size() % 2) throw std::invalid_argument("hex string has odd length");
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit");
  };
  std::vector<uint8_t> out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = uint8_t(nib(hex[2 * i]) << 4 | nib(hex[2 * i + 1]));
  return out;
}

}  // namespace rqlsha
