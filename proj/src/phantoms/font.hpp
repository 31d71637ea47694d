#pragma once

#include <array>
#include <cstdint>

namespace rcassi {

inline constexpr std::uint32_t kGlyphCols = 5;
inline constexpr std::uint32_t kGlyphRows = 7;

/// 5x7 block bitmap for one character: seven rows, bit 4 is the leftmost
/// column. Covers A-Z, 0-9 and the lowercase letters a and b; other lowercase
/// letters fall back to their uppercase shape. Unknown characters fail.
const std::array<std::uint8_t, kGlyphRows>& glyph_bitmap(char character);

}  // namespace rcassi
