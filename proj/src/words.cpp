#include "rtspec/words.hpp"

#include <sstream>

namespace rtspec {

Word::Word(std::vector<int> syms, int k) : symbols(std::move(syms)), alphabet_size(k) {
  if (alphabet_size < 2) throw input_error("word: alphabet size must be >= 2");
  if (symbols.empty()) throw input_error("word: length must be >= 1");
  for (int s : symbols)
    if (s < 0 || s >= alphabet_size)
      throw input_error("word: symbol out of range");
}

Word Word::parse(const std::string& text, int k) {
  std::vector<int> syms;
  if (text.find(',') != std::string::npos) {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) syms.push_back(std::stoi(tok));
  } else {
    for (char c : text) {
      if (c < '0' || c > '9') throw input_error("word: bad digit");
      syms.push_back(c - '0');
    }
  }
  return Word(std::move(syms), k);
}

std::string Word::str() const {
  std::string out;
  if (alphabet_size <= 10) {
    for (int s : symbols) out.push_back(char('0' + s));
  } else {
    for (size_t i = 0; i < symbols.size(); ++i) {
      if (i) out.push_back(',');
      out += std::to_string(symbols[i]);
    }
  }
  return out;
}

std::vector<int> border_table(const std::vector<int>& s) {
  const int n = int(s.size());
  std::vector<int> b(n + 1, 0);
  b[0] = -1;
  int k = -1;
  for (int j = 0; j < n; ++j) {
    while (k >= 0 && s[k] != s[j]) k = b[k];
    ++k;
    b[j + 1] = k;
  }
  b[0] = 0;
  return b;
}

int period(const Word& w) {
  // tau = n - (longest proper border of w)
  auto b = border_table(w.symbols);
  return w.size() - b[w.size()];
}

Word concat_prefix(const Word& w) {
  int tau = period(w);
  std::vector<int> out(w.symbols.begin(), w.symbols.begin() + tau);
  out.insert(out.end(), w.symbols.begin(), w.symbols.end());
  return Word(std::move(out), w.alphabet_size);
}

std::uint64_t word_count(int alphabet_size, int length, std::uint64_t budget) {
  if (length < 1) throw input_error("word_count: length must be >= 1");
  std::uint64_t total = 1;
  for (int i = 0; i < length; ++i) {
    if (total > budget / std::uint64_t(alphabet_size) + 1)
      throw budget_error("enumeration budget exceeded: " +
                         std::to_string(alphabet_size) + "^" +
                         std::to_string(length) + " words");
    total *= std::uint64_t(alphabet_size);
  }
  if (total > budget)
    throw budget_error("enumeration budget exceeded: " +
                       std::to_string(total) + " words");
  return total;
}

void decode_word(int alphabet_size, int length, std::uint64_t index, int* out) {
  for (int i = length - 1; i >= 0; --i) {
    out[i] = int(index % std::uint64_t(alphabet_size));
    index /= std::uint64_t(alphabet_size);
  }
}

Word word_at(int alphabet_size, int length, std::uint64_t index) {
  std::vector<int> syms(length);
  decode_word(alphabet_size, length, index, syms.data());
  return Word(std::move(syms), alphabet_size);
}

}  // namespace rtspec
