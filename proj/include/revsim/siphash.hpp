#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace revsim {

/// SipHash-2-4 of `message` under the 128-bit key (k0, k1), both words read
/// little-endian as in the reference implementation.
std::uint64_t siphash24(std::uint64_t k0, std::uint64_t k1, std::span<const std::uint8_t> message);

std::uint64_t siphash24(std::uint64_t k0, std::uint64_t k1, std::string_view message);

}  // namespace revsim
