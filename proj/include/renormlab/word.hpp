#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "renormlab/errors.hpp"

namespace renormlab {

// Dyadic word in {v, c}^n, little-endian: letter i carries weight 2^i, v = 0,
// c = 1. The map dynamics acts on words as the adding machine (+1 mod 2^n).
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<std::uint8_t> letters) : letters_(std::move(letters)) {
    for (auto l : letters_)
      if (l > 1) throw ConfigError("word letters must be v or c");
  }

  static Word from_index(std::uint64_t idx, int length) {
    std::vector<std::uint8_t> ls(length);
    for (int i = 0; i < length; ++i) ls[i] = static_cast<std::uint8_t>((idx >> i) & 1u);
    return Word(std::move(ls));
  }

  static Word all_v(int length) { return from_index(0, length); }

  int length() const { return static_cast<int>(letters_.size()); }
  std::uint8_t letter(int i) const { return letters_[i]; }

  std::uint64_t index() const {
    std::uint64_t r = 0;
    for (int i = 0; i < length(); ++i) r |= static_cast<std::uint64_t>(letters_[i]) << i;
    return r;
  }

  // Base-2 increment with carry, mod 2^n.
  Word successor() const {
    Word w = *this;
    for (auto& l : w.letters_) {
      if (l == 0) {
        l = 1;
        return w;
      }
      l = 0;  // carry
    }
    return w;
  }

  Word appended(std::uint8_t letter) const {
    Word w = *this;
    w.letters_.push_back(letter);
    return w;
  }

  std::string str() const {
    std::string s;
    for (auto l : letters_) s += (l == 0 ? 'v' : 'c');
    return s;
  }

  bool operator==(const Word& o) const { return letters_ == o.letters_; }

 private:
  std::vector<std::uint8_t> letters_;
};

inline std::vector<Word> all_words(int length) {
  std::vector<Word> ws;
  ws.reserve(std::size_t{1} << length);
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << length); ++i)
    ws.push_back(Word::from_index(i, length));
  return ws;
}

// The scan word v^k c v^{n-k-1} used throughout the box-geometry estimates.
inline Word scan_word(int k, int n) {
  std::vector<std::uint8_t> ls(n, 0);
  ls[k] = 1;
  return Word(std::move(ls));
}

}  // namespace renormlab
