#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hypdir {

/// A word in the generators: entry k > 0 is generator k (1-based), -k its
/// inverse. Words compose left to right, so [1 2] means g1 * g2.
using Word = std::vector<int>;

/// Cancels adjacent letter/inverse pairs.
Word reduce_word(const Word& w);
Word concat_words(const Word& a, const Word& b);
Word inverse_word(const Word& w);

/// "[1 -2 1]"; the empty word prints as "[]".
std::string format_word(const Word& w);

/// Accepts "[1 -2 1]", "1,-2,1", "1 -2 1", "[]" and "e" (identity).
/// Throws Error(InvalidArgument) on malformed input or a zero letter.
Word parse_word(std::string_view text);

}  // namespace hypdir
