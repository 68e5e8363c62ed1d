#include <doctest.h>

#include <cstdint>
#include <fstream>
#include <vector>

#include "bqcs/bitcode.hpp"
#include "bqcs/seed.hpp"
#include "test_util.hpp"

using namespace bqcs;
using bqcs::testutil::TempDir;

namespace {

std::vector<int> random_signs(std::size_t n, Seed seed) {
  SplitMix64 rng(seed);
  std::vector<int> s(n);
  for (auto& v : s) v = (rng.next_u64() & 1) ? +1 : -1;
  return s;
}

int64_t naive_dot(const std::vector<int>& a, const std::vector<int>& b) {
  int64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_bytes(const std::filesystem::path& p,
                 const std::vector<unsigned char>& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_SUITE_BEGIN("bitcode");

TEST_CASE("pack uses LSB-first bit layout with +1 as bit 1") {
  const BitCode c = pack({+1, -1, +1, +1});
  REQUIRE(c.length() == 4);
  REQUIRE(c.words().size() == 1);
  CHECK(c.words()[0] == 0b1101ULL);
  CHECK(c.sign(0) == +1);
  CHECK(c.sign(1) == -1);
  CHECK(c.sign(2) == +1);
  CHECK(c.sign(3) == +1);
}

TEST_CASE("pack/unpack round trip across word boundaries") {
  for (const std::size_t n : {1UL, 63UL, 64UL, 65UL, 127UL, 128UL, 300UL}) {
    const auto signs = random_signs(n, Seed{n, 1});
    const BitCode c = pack(signs);
    CHECK(c.length() == n);
    CHECK(unpack(c) == signs);
  }
}

TEST_CASE("pack rejects anything but +1/-1") {
  CHECK_THROWS_AS(pack({1, 0, 1}), domain_error);
  CHECK_THROWS_AS(pack({1, 2}), domain_error);
  CHECK_THROWS_AS(pack({}), shape_error);
}

TEST_CASE("word constructor enforces the canonical zero tail") {
  CHECK_NOTHROW(BitCode(4, {0b1101ULL}));
  CHECK_THROWS_AS(BitCode(4, {0b11101ULL}), format_error);
  CHECK_THROWS_AS(BitCode(4, {0b1101ULL, 0ULL}), shape_error);
  CHECK_THROWS_AS(BitCode(0, {}), shape_error);
  // A full word has no tail to constrain.
  CHECK_NOTHROW(BitCode(64, {~0ULL}));
}

TEST_CASE("default code of length n is all -1") {
  const BitCode c(130);
  for (std::size_t i = 0; i < 130; ++i) CHECK(c.sign(i) == -1);
}

TEST_CASE("complement negates every entry and keeps the tail canonical") {
  const auto signs = random_signs(70, Seed{3, 0});
  const BitCode c = pack(signs);
  const BitCode nc = complement(c);
  for (std::size_t i = 0; i < 70; ++i) CHECK(nc.sign(i) == -c.sign(i));
  CHECK_NOTHROW(BitCode(nc.length(), nc.words()));
  CHECK(binary_dot(c, nc) == -70);
  CHECK(hamming(c, nc) == 70);
}

TEST_CASE("binary_dot equals the brute-force signed dot") {
  for (const std::size_t n : {1UL, 5UL, 64UL, 65UL, 200UL, 1024UL}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto sa = random_signs(n, Seed{n, static_cast<uint64_t>(2 * rep)});
      const auto sb =
          random_signs(n, Seed{n, static_cast<uint64_t>(2 * rep + 1)});
      const BitCode a = pack(sa);
      const BitCode b = pack(sb);
      const int64_t expect = naive_dot(sa, sb);
      CHECK(binary_dot(a, b) == expect);
      CHECK(binary_dot(a, b) ==
            static_cast<int64_t>(n) - 2 * hamming(a, b));
    }
  }
}

TEST_CASE("binary_dot bounds, parity and self-dot") {
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 97;
    const auto sa = random_signs(n, Seed{10, static_cast<uint64_t>(rep)});
    const auto sb = random_signs(n, Seed{11, static_cast<uint64_t>(rep)});
    const BitCode a = pack(sa);
    const BitCode b = pack(sb);
    const int64_t d = binary_dot(a, b);
    CHECK(d >= -static_cast<int64_t>(n));
    CHECK(d <= static_cast<int64_t>(n));
    CHECK((d - static_cast<int64_t>(n)) % 2 == 0);
    CHECK(binary_dot(a, a) == static_cast<int64_t>(n));
  }
}

TEST_CASE("length mismatch is rejected") {
  const BitCode a = pack({+1, -1});
  const BitCode b = pack({+1, -1, +1});
  CHECK_THROWS_AS(binary_dot(a, b), shape_error);
  CHECK_THROWS_AS(hamming(a, b), shape_error);
}

TEST_CASE("memory accounting is one bit per entry") {
  for (const std::size_t n : {1UL, 63UL, 64UL, 65UL, 4096UL}) {
    const BitCode c(n);
    CHECK(memory_bits(c) == static_cast<int64_t>(n));
  }
}

TEST_CASE("save/load round trip is bit exact") {
  TempDir dir;
  for (const std::size_t n : {1UL, 64UL, 65UL, 1000UL}) {
    const BitCode c = pack(random_signs(n, Seed{n, 77}));
    const auto path = dir.file("c.bqc");
    save_code(c, path);
    CHECK(load_code(path) == c);
  }
}

TEST_CASE("on-disk code layout is the documented byte sequence") {
  TempDir dir;
  const BitCode c = pack({+1, -1, +1, +1});
  const auto path = dir.file("c.bqc");
  save_code(c, path);
  const auto bytes = read_bytes(path);
  REQUIRE(bytes.size() == 4 + 8 + 8);
  CHECK(bytes[0] == 'B');
  CHECK(bytes[1] == 'Q');
  CHECK(bytes[2] == 'C');
  CHECK(bytes[3] == '1');
  CHECK(bytes[4] == 4);  // length low byte
  CHECK(bytes[12] == 0b1101);
}

TEST_CASE("code loader rejects malformed files") {
  TempDir dir;
  const auto path = dir.file("bad.bqc");

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_code(dir.file("nope.bqc")), io_error);
  }
  SUBCASE("bad magic") {
    write_bytes(path, {'B', 'Q', 'T', '1', 4, 0, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(load_code(path), format_error);
  }
  SUBCASE("zero length") {
    write_bytes(path, {'B', 'Q', 'C', '1', 0, 0, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(load_code(path), format_error);
  }
  SUBCASE("truncated words") {
    write_bytes(path, {'B', 'Q', 'C', '1', 65, 0, 0, 0, 0, 0, 0, 0,
                       1, 0, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(load_code(path), format_error);
  }
  SUBCASE("dirty tail bits on disk") {
    write_bytes(path, {'B', 'Q', 'C', '1', 4, 0, 0, 0, 0, 0, 0, 0,
                       0xFF, 0, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(load_code(path), format_error);
  }
  SUBCASE("trailing garbage") {
    save_code(pack({+1, -1}), path);
    auto bytes = read_bytes(path);
    bytes.push_back(0);
    write_bytes(path, bytes);
    CHECK_THROWS_AS(load_code(path), format_error);
  }
}

TEST_SUITE_END();
