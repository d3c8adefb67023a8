#include "revsim/siphash.hpp"
#include "revsim/simulator.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdint>
#include <vector>

namespace revsim {
namespace {

// Key bytes 00..0f and messages 00..(n-1), from the reference test vectors.
constexpr std::uint64_t kK0 = 0x0706050403020100ULL;
constexpr std::uint64_t kK1 = 0x0f0e0d0c0b0a0908ULL;

std::vector<std::uint8_t> counting(std::size_t n) {
  std::vector<std::uint8_t> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<std::uint8_t>(i);
  return m;
}

TEST(SipHash, ReferenceVectors) {
  struct Case {
    std::size_t length;
    std::uint64_t expected;
  };
  for (auto const& [length, expected] : std::array<Case, 5>{{{0, 0x726fdb47dd0e0e31ULL},
                                                             {1, 0x74f839c593dc67fdULL},
                                                             {2, 0x0d6c8009d9a94f5aULL},
                                                             {15, 0xa129ca6149be45e5ULL},
                                                             {63, 0x958a324ceb064572ULL}}}) {
    auto const m = counting(length);
    EXPECT_EQ(siphash24(kK0, kK1, m), expected) << "length " << length;
  }
}

TEST(SipHash, StringOverloadHashesBytes) {
  std::string_view const text = "pr-17";
  std::vector<std::uint8_t> bytes(text.begin(), text.end());
  EXPECT_EQ(siphash24(3, 9, text), siphash24(3, 9, bytes));
}

TEST(SipHash, ReplacementHashIsKeyedBySeed) {
  EXPECT_EQ(replacement_hash("pr-17", 42), siphash24(42, 0, "pr-17"));
  EXPECT_NE(replacement_hash("pr-17", 42), replacement_hash("pr-17", 43));
}

}  // namespace
}  // namespace revsim
