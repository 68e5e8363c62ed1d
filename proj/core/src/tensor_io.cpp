#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "bqcs/tensor.hpp"

namespace bqcs {

namespace {

constexpr std::array<unsigned char, 4> kTensorMagic = {0x42, 0x51, 0x54,
                                                       0x31};  // "BQT1"

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

void write_f32_le(std::ofstream& out, float f) {
  uint32_t bits;
  std::memcpy(&bits, &f, 4);
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i)
    buf[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 4);
}

bool read_f32_le(std::ifstream& in, float& f) {
  unsigned char buf[4];
  if (!in.read(reinterpret_cast<char*>(buf), 4)) return false;
  uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<uint32_t>(buf[i]) << (8 * i);
  std::memcpy(&f, &bits, 4);
  return true;
}

}  // namespace

void save_tensor(const Tensor& t, const std::filesystem::path& path) {
  if (t.empty()) throw shape_error("cannot save an empty tensor");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(kTensorMagic.data()), 4);
  const unsigned char rank = static_cast<unsigned char>(t.rank());
  if (t.rank() > 255) throw shape_error("tensor rank exceeds format limit 255");
  out.write(reinterpret_cast<const char*>(&rank), 1);
  for (std::size_t d : t.shape()) write_u64_le(out, d);
  for (std::size_t i = 0; i < t.size(); ++i)
    write_f32_le(out, static_cast<float>(t[i]));
  out.flush();
  if (!out) throw io_error("write failed: " + path.string());
}

Tensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path.string());
  std::array<unsigned char, 4> magic{};
  if (!in.read(reinterpret_cast<char*>(magic.data()), 4) ||
      magic != kTensorMagic) {
    throw format_error("not a BQT1 tensor file: " + path.string());
  }
  unsigned char rank = 0;
  if (!in.read(reinterpret_cast<char*>(&rank), 1) || rank == 0) {
    throw format_error("BQT1 header has invalid rank: " + path.string());
  }
  std::vector<std::size_t> shape(rank);
  for (auto& d : shape) {
    uint64_t v;
    if (!read_u64_le(in, v)) {
      throw format_error("BQT1 header truncated: " + path.string());
    }
    d = static_cast<std::size_t>(v);
  }
  std::size_t n;
  try {
    n = checked_numel(shape);
  } catch (const shape_error& e) {
    throw format_error("BQT1 header dims invalid: " + std::string(e.what()));
  }
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    float f;
    if (!read_f32_le(in, f)) {
      throw format_error("BQT1 payload truncated at element " +
                         std::to_string(i) + " of " + std::to_string(n) + ": " +
                         path.string());
    }
    if (!std::isfinite(f)) {
      throw format_error("BQT1 payload has non-finite element " +
                         std::to_string(i) + ": " + path.string());
    }
    data[i] = static_cast<double>(f);
  }
  // Trailing bytes mean the header undercounts the payload.
  if (in.peek() != std::ifstream::traits_type::eof()) {
    throw format_error("BQT1 payload longer than header dims: " +
                       path.string());
  }
  return Tensor(std::move(shape), std::move(data));
}

}  // namespace bqcs
