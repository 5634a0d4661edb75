#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rtspec/common.hpp"

namespace rtspec {

// A finite word over the alphabet {0, ..., K-1}. Immutable once built.
struct Word {
  std::vector<int> symbols;
  int alphabet_size = 2;

  Word() = default;
  Word(std::vector<int> syms, int k);
  // Parse "010" (K <= 10) or "0,1,0" into a word.
  static Word parse(const std::string& text, int k);

  int size() const { return int(symbols.size()); }
  // Digits for K <= 10, comma-separated integers otherwise.
  std::string str() const;
};

// Smallest return shift of the cylinder [w]: the least k >= 1 such that
// w shifted by k overlaps itself (k = n when w has no proper border).
// Runs the classical failure-function scan, O(n).
int period(const Word& w);

// Longest proper border lengths b[j] for prefixes of length j = 0..n.
std::vector<int> border_table(const std::vector<int>& symbols);

// The word w_1^{tau(w)} w of length n + tau(w); both its prefix and its
// suffix of length n equal w.
Word concat_prefix(const Word& w);

// k^n with an overflow/budget guard.
std::uint64_t word_count(int alphabet_size, int length,
                         std::uint64_t budget = kDefaultEnumBudget);

// Word with lexicographic rank `index` among the K^n words of length n.
Word word_at(int alphabet_size, int length, std::uint64_t index);

// Decode a lexicographic rank into a caller-provided symbol buffer,
// avoiding per-word allocation in enumeration loops.
void decode_word(int alphabet_size, int length, std::uint64_t index,
                 int* out);

// Enumerate all K^n words in lexicographic order: f(index, symbols).
template <class F>
void for_each_word(int alphabet_size, int length, F&& f,
                   std::uint64_t budget = kDefaultEnumBudget) {
  std::uint64_t total = word_count(alphabet_size, length, budget);
  std::vector<int> buf(length);
  for (std::uint64_t i = 0; i < total; ++i) {
    decode_word(alphabet_size, length, i, buf.data());
    f(i, buf);
  }
}

}  // namespace rtspec
