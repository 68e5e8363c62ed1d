#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "bqcs/errors.hpp"

namespace bqcs {

/// Packed {-1,+1}^p vector. Bit i lives in words[i / 64] at position i % 64
/// (LSB-first); +1 maps to bit 1, -1 to bit 0. Unused tail bits of the last
/// word are always zero, so word-wise equality is code equality.
class BitCode {
 public:
  BitCode() = default;  // empty; length 0 is not a valid operand

  /// Zeroed code (all entries -1) of the given length.
  explicit BitCode(std::size_t length);

  /// Takes pre-packed words; validates length and canonical tail.
  BitCode(std::size_t length, std::vector<uint64_t> words);

  std::size_t length() const { return length_; }
  const std::vector<uint64_t>& words() const { return words_; }

  bool bit(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1ULL;
  }
  int sign(std::size_t i) const { return bit(i) ? +1 : -1; }

  void set_bit(std::size_t i, bool v) {
    if (v)
      words_[i >> 6] |= 1ULL << (i & 63);
    else
      words_[i >> 6] &= ~(1ULL << (i & 63));
  }

  friend bool operator==(const BitCode&, const BitCode&) = default;

 private:
  std::size_t length_ = 0;
  std::vector<uint64_t> words_;
};

/// Packs a vector of exactly +1/-1 entries. Anything else is a domain_error.
BitCode pack(const std::vector<int>& signs);

/// Inverse of pack.
std::vector<int> unpack(const BitCode& code);

/// Entrywise negation (every +1 <-> -1).
BitCode complement(const BitCode& code);

/// Count of positions where a and b differ, via XOR + popcount.
int64_t hamming(const BitCode& a, const BitCode& b);

/// Sum_i a_i * b_i over the +-1 entries, computed as p - 2*hamming(a, b).
/// Exact integer in {-p, -p+2, ..., p}.
int64_t binary_dot(const BitCode& a, const BitCode& b);

/// Payload bits of the code: exactly its length (container overhead excluded).
int64_t memory_bits(const BitCode& code);

/// "BQC1" container: magic 'B''Q''C''1', u64 little-endian length, then
/// ceil(p/64) x u64 little-endian words with canonical zero tail. Bit-exact
/// round trip.
void save_code(const BitCode& code, const std::filesystem::path& path);
BitCode load_code(const std::filesystem::path& path);

}  // namespace bqcs
