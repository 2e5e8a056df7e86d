#include "hetcache/bit_string.h"

#include <stdexcept>

namespace hetcache {
namespace {

constexpr std::size_t kWordBits = 64;

std::size_t WordsFor(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

}  // namespace

BitString::BitString(std::size_t num_bits) : words_(WordsFor(num_bits), 0), size_(num_bits) {}

BitString::BitString(std::vector<std::uint64_t> words, std::size_t num_bits)
    : words_(std::move(words)), size_(num_bits) {
  if (words_.size() != WordsFor(num_bits)) {
    throw std::invalid_argument("word count does not match bit length");
  }
  ClearPadding();
}

bool BitString::Get(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("bit index out of range");
  return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
}

void BitString::Set(std::size_t i, bool value) {
  if (i >= size_) throw std::out_of_range("bit index out of range");
  const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
  if (value) {
    words_[i / kWordBits] |= mask;
  } else {
    words_[i / kWordBits] &= ~mask;
  }
}

void BitString::Flip(std::size_t i) { Set(i, !Get(i)); }

BitString BitString::Slice(std::size_t pos, std::size_t len) const {
  if (pos > size_ || len > size_ - pos) throw std::out_of_range("slice out of range");
  BitString out(len);
  const std::size_t first = pos / kWordBits;
  const unsigned shift = pos % kWordBits;
  for (std::size_t j = 0; j < out.words_.size(); ++j) {
    const std::size_t src = first + j;
    std::uint64_t w = words_[src] >> shift;
    if (shift != 0 && src + 1 < words_.size()) w |= words_[src + 1] << (kWordBits - shift);
    out.words_[j] = w;
  }
  out.ClearPadding();
  return out;
}

void BitString::Append(const BitString& tail) {
  if (tail.size_ == 0) return;
  const unsigned shift = size_ % kWordBits;
  const std::size_t new_size = size_ + tail.size_;
  if (shift == 0) {
    words_.insert(words_.end(), tail.words_.begin(), tail.words_.end());
  } else {
    words_.resize(WordsFor(new_size), 0);
    std::size_t dst = size_ / kWordBits;
    for (std::uint64_t w : tail.words_) {
      words_[dst] |= w << shift;
      if (dst + 1 < words_.size()) words_[dst + 1] |= w >> (kWordBits - shift);
      ++dst;
    }
  }
  size_ = new_size;
  words_.resize(WordsFor(new_size));
}

BitString& BitString::operator^=(const BitString& other) {
  if (other.size_ != size_) throw std::invalid_argument("XOR of bit strings of unequal length");
  for (std::size_t j = 0; j < words_.size(); ++j) words_[j] ^= other.words_[j];
  return *this;
}

std::string BitString::ToBinary() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (Get(i)) out[i] = '1';
  }
  return out;
}

BitString BitString::FromBinary(const std::string& text) {
  BitString out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      out.Set(i, true);
    } else if (text[i] != '0') {
      throw std::invalid_argument("binary text must contain only 0 and 1");
    }
  }
  return out;
}

void BitString::ClearPadding() {
  const unsigned used = size_ % kWordBits;
  if (used != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << used) - 1;
}

BitString Concat(const std::vector<BitString>& parts) {
  BitString out;
  for (const BitString& p : parts) out.Append(p);
  return out;
}

}  // namespace hetcache
