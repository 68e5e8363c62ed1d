#include "bqcs/bitcode.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <string>

namespace bqcs {

namespace {

std::size_t word_count(std::size_t length) { return (length + 63) / 64; }

// Mask of the valid bits in the last word.
uint64_t tail_mask(std::size_t length) {
  const std::size_t rem = length & 63;
  return rem == 0 ? ~0ULL : (1ULL << rem) - 1;
}

void check_same_length(const BitCode& a, const BitCode& b) {
  if (a.length() != b.length()) {
    throw shape_error("code length mismatch: " + std::to_string(a.length()) +
                      " vs " + std::to_string(b.length()));
  }
  if (a.length() == 0) throw shape_error("empty bit code");
}

constexpr std::array<unsigned char, 4> kCodeMagic = {0x42, 0x51, 0x43,
                                                     0x31};  // "BQC1"

void write_u64_le(std::ofstream& out, uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

bool read_u64_le(std::ifstream& in, uint64_t& v) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
  return true;
}

}  // namespace

BitCode::BitCode(std::size_t length)
    : length_(length), words_(word_count(length), 0) {
  if (length == 0) throw shape_error("bit code length must be >= 1");
}

BitCode::BitCode(std::size_t length, std::vector<uint64_t> words)
    : length_(length), words_(std::move(words)) {
  if (length == 0) throw shape_error("bit code length must be >= 1");
  if (words_.size() != word_count(length)) {
    throw shape_error("bit code word count " + std::to_string(words_.size()) +
                      " does not match length " + std::to_string(length));
  }
  if ((words_.back() & ~tail_mask(length)) != 0) {
    throw format_error("bit code tail bits are not canonical (nonzero)");
  }
}

BitCode pack(const std::vector<int>& signs) {
  if (signs.empty()) throw shape_error("cannot pack an empty sign vector");
  BitCode code(signs.size());
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] == 1) {
      code.set_bit(i, true);
    } else if (signs[i] != -1) {
      throw domain_error("sign at index " + std::to_string(i) +
                         " is not +1 or -1: " + std::to_string(signs[i]));
    }
  }
  return code;
}

std::vector<int> unpack(const BitCode& code) {
  std::vector<int> out(code.length());
  for (std::size_t i = 0; i < code.length(); ++i) out[i] = code.sign(i);
  return out;
}

BitCode complement(const BitCode& code) {
  if (code.length() == 0) throw shape_error("empty bit code");
  std::vector<uint64_t> words = code.words();
  for (auto& w : words) w = ~w;
  words.back() &= tail_mask(code.length());
  return BitCode(code.length(), std::move(words));
}

int64_t hamming(const BitCode& a, const BitCode& b) {
  check_same_length(a, b);
  const auto& wa = a.words();
  const auto& wb = b.words();
  int64_t diff = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    diff += std::popcount(wa[i] ^ wb[i]);
  }
  return diff;
}

int64_t binary_dot(const BitCode& a, const BitCode& b) {
  return static_cast<int64_t>(a.length()) - 2 * hamming(a, b);
}

int64_t memory_bits(const BitCode& code) {
  return static_cast<int64_t>(code.length());
}

void save_code(const BitCode& code, const std::filesystem::path& path) {
  if (code.length() == 0) throw shape_error("cannot save an empty bit code");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(kCodeMagic.data()), 4);
  write_u64_le(out, code.length());
  for (uint64_t w : code.words()) write_u64_le(out, w);
  out.flush();
  if (!out) throw io_error("write failed: " + path.string());
}

BitCode load_code(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path.string());
  std::array<unsigned char, 4> magic{};
  if (!in.read(reinterpret_cast<char*>(magic.data()), 4) ||
      magic != kCodeMagic) {
    throw format_error("not a BQC1 code file: " + path.string());
  }
  uint64_t length = 0;
  if (!read_u64_le(in, length) || length == 0) {
    throw format_error("BQC1 header has invalid length: " + path.string());
  }
  std::vector<uint64_t> words(word_count(length));
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!read_u64_le(in, words[i])) {
      throw format_error("BQC1 payload truncated at word " + std::to_string(i) +
                         ": " + path.string());
    }
  }
  if (in.peek() != std::ifstream::traits_type::eof()) {
    throw format_error("BQC1 payload longer than header length: " +
                       path.string());
  }
  // The BitCode constructor rejects a non-canonical tail.
  return BitCode(static_cast<std::size_t>(length), std::move(words));
}

}  // namespace bqcs
