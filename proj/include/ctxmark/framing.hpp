//
// Copyright 2026 The ctxmark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Message framing: a 16-bit big-endian byte count followed by the payload,
// most significant bit first. The frame repeats to fill the carrier
// capacity; deframing majority-votes each frame bit across repetitions.

#ifndef CTXMARK_FRAMING_HPP_
#define CTXMARK_FRAMING_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ctxmark/errors.hpp"

namespace ctxmark {

// Bits stored one per byte, each 0 or 1.
using BitStream = std::vector<std::uint8_t>;

inline constexpr std::size_t kLengthBits = 16;

inline BitStream bits_from_string(std::string_view s) {
  BitStream out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw ContractViolation("bit string may only hold '0' and '1'");
    out.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

inline std::string bits_to_string(const BitStream& bits) {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(b ? '1' : '0');
  return out;
}

inline BitStream frame_message(const std::vector<std::uint8_t>& payload) {
  if (payload.size() > 0xFFFF) throw ContractViolation("frame_message: payload over 65535 bytes");
  BitStream out;
  out.reserve(kLengthBits + 8 * payload.size());
  const auto len = static_cast<std::uint16_t>(payload.size());
  for (int b = 15; b >= 0; --b) out.push_back((len >> b) & 1U);
  for (std::uint8_t byte : payload) {
    for (int b = 7; b >= 0; --b) out.push_back((byte >> b) & 1U);
  }
  return out;
}

// Repeats `frame` cyclically up to exactly `capacity` bits. A capacity below
// the frame length yields a truncated frame.
inline BitStream fill_cyclic(const BitStream& frame, std::size_t capacity) {
  BitStream out;
  if (frame.empty()) return out;
  out.reserve(capacity);
  for (std::size_t i = 0; i < capacity; ++i) out.push_back(frame[i % frame.size()]);
  return out;
}

struct DeframeResult {
  std::vector<std::uint8_t> payload;
  bool complete = false;           // at least one whole frame was present
  std::size_t declared_length = 0;  // bytes, from the first header
  std::size_t repetitions = 0;      // whole frames seen
  std::size_t consistent_headers = 0;  // whole frames whose header matches the first
};

inline DeframeResult deframe_message(const BitStream& bits) {
  DeframeResult out;
  if (bits.size() < kLengthBits) return out;

  auto read_u16 = [&](std::size_t at) {
    std::size_t v = 0;
    for (std::size_t i = 0; i < kLengthBits; ++i) v = (v << 1) | bits[at + i];
    return v;
  };
  out.declared_length = read_u16(0);
  const std::size_t frame_len = kLengthBits + 8 * out.declared_length;

  if (bits.size() < frame_len) {
    // Partial: whatever whole bytes follow the header.
    const std::size_t avail = (bits.size() - kLengthBits) / 8;
    for (std::size_t n = 0; n < avail; ++n) {
      std::uint8_t byte = 0;
      for (std::size_t b = 0; b < 8; ++b) byte = (byte << 1) | bits[kLengthBits + 8 * n + b];
      out.payload.push_back(byte);
    }
    return out;
  }

  out.complete = true;
  out.repetitions = bits.size() / frame_len;
  for (std::size_t r = 0; r < out.repetitions; ++r) {
    if (read_u16(r * frame_len) == out.declared_length) ++out.consistent_headers;
  }

  BitStream voted(frame_len);
  for (std::size_t p = 0; p < frame_len; ++p) {
    std::size_t ones = 0;
    std::size_t votes = 0;
    for (std::size_t at = p; at < bits.size(); at += frame_len) {
      ones += bits[at];
      ++votes;
    }
    if (2 * ones == votes) {
      voted[p] = bits[p];
    } else {
      voted[p] = 2 * ones > votes ? 1 : 0;
    }
  }
  for (std::size_t n = 0; n < out.declared_length; ++n) {
    std::uint8_t byte = 0;
    for (std::size_t b = 0; b < 8; ++b) byte = (byte << 1) | voted[kLengthBits + 8 * n + b];
    out.payload.push_back(byte);
  }
  return out;
}

}  // namespace ctxmark

#endif  // CTXMARK_FRAMING_HPP_
