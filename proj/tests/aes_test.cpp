// Copyright 2026 The bitrev Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <openssl/evp.h>

#include <random>

#include "bitrev/aes.hpp"

namespace bitrev {
namespace {

// Independent implementation used as the oracle.
Block openssl_encrypt(const Block& key, const Block& pt) {
  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  Block out{};
  int len = 0;
  EVP_EncryptInit_ex(ctx, EVP_aes_128_ecb(), nullptr, key.data(), nullptr);
  EVP_CIPHER_CTX_set_padding(ctx, 0);
  EVP_EncryptUpdate(ctx, out.data(), &len, pt.data(), static_cast<int>(pt.size()));
  EVP_CIPHER_CTX_free(ctx);
  return out;
}

Block random_block(std::mt19937_64& rng) {
  Block b;
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return b;
}

TEST(Aes, Fips197KnownAnswer) {
  const Block key = block_from_hex("000102030405060708090a0b0c0d0e0f");
  const Block pt = block_from_hex("00112233445566778899aabbccddeeff");
  EXPECT_EQ(to_hex(aes128_encrypt(key, pt)), "69c4e0d86a7b0430d8cdb78070b4c55a");
  EXPECT_EQ(openssl_encrypt(key, pt), aes128_encrypt(key, pt));
}

TEST(Aes, Sp80038aEcbVector) {
  const Block key = block_from_hex("2b7e151628aed2a6abf7158809cf4f3c");
  EXPECT_EQ(to_hex(aes128_encrypt(key, block_from_hex("6bc1bee22e409f96e93d7e117393172a"))),
            "3ad77bb40d7a3660a89ecaf32466ef97");
}

TEST(Aes, MatchesOpensslOnRandomBlocks) {
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 100; ++i) {
    const Block key = random_block(rng), pt = random_block(rng);
    ASSERT_EQ(aes128_encrypt(key, pt), openssl_encrypt(key, pt)) << "trial " << i;
  }
}

TEST(Aes, DecryptInvertsEncrypt) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const Block key = random_block(rng), pt = random_block(rng);
    EXPECT_EQ(aes128_decrypt(key, aes128_encrypt(key, pt)), pt);
  }
}

TEST(Aes, DistinctKeysGiveDistinctCiphertexts) {
  std::mt19937_64 rng(9);
  const Block pt = random_block(rng);
  for (int i = 0; i < 100; ++i) {
    const Block a = random_block(rng), b = random_block(rng);
    if (a == b) continue;
    EXPECT_NE(aes128_encrypt(a, pt), aes128_encrypt(b, pt));
  }
}

TEST(Aes, SpanVariantChecksLengths) {
  const std::vector<std::uint8_t> key(16, 1), shortpt(15, 2), pt(16, 2);
  EXPECT_THROW(aes128_encrypt(std::span<const std::uint8_t>(key), std::span<const std::uint8_t>(shortpt)), Error);
  EXPECT_THROW(aes128_encrypt(std::span<const std::uint8_t>(shortpt), std::span<const std::uint8_t>(pt)), Error);
  Block k{}, p{};
  k.fill(1);
  p.fill(2);
  EXPECT_EQ(aes128_encrypt(std::span<const std::uint8_t>(key), std::span<const std::uint8_t>(pt)), aes128_encrypt(k, p));
}

}  // namespace
}  // namespace bitrev
