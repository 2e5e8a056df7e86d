#ifndef HETCACHE_BIT_STRING_H_
#define HETCACHE_BIT_STRING_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace hetcache {

// Fixed-length bit sequence packed into 64-bit words, bit i of the sequence
// at bit (i % 64) of word i / 64. Bits past size() are always zero.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t num_bits);
  BitString(std::vector<std::uint64_t> words, std::size_t num_bits);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  bool Get(std::size_t i) const;
  void Set(std::size_t i, bool value);
  void Flip(std::size_t i);

  // Copies bits [pos, pos + len).
  BitString Slice(std::size_t pos, std::size_t len) const;

  void Append(const BitString& tail);

  // In-place XOR; sizes must match.
  BitString& operator^=(const BitString& other);
  friend BitString operator^(BitString a, const BitString& b) { return a ^= b; }

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

  // '0'/'1' rendering, first bit first.
  std::string ToBinary() const;
  static BitString FromBinary(const std::string& text);

 private:
  void ClearPadding();

  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

BitString Concat(const std::vector<BitString>& parts);

}  // namespace hetcache

#endif  // HETCACHE_BIT_STRING_H_
