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

// AES-128 single-block ECB (FIPS-197).

#ifndef BITREV_AES_HPP
#define BITREV_AES_HPP

#include <span>

#include "bitrev/common.hpp"

namespace bitrev {

Block aes128_encrypt(const Block& key, const Block& plaintext);
Block aes128_decrypt(const Block& key, const Block& ciphertext);

/// Length-checked variants; throw Error unless both spans hold 16 bytes.
Block aes128_encrypt(std::span<const std::uint8_t> key, std::span<const std::uint8_t> plaintext);

}  // namespace bitrev

#endif  // BITREV_AES_HPP
