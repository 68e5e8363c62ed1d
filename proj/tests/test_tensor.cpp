#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <vector>

#include "bqcs/tensor.hpp"
#include "test_util.hpp"

using namespace bqcs;
using bqcs::testutil::TempDir;

namespace {

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

TEST_SUITE_BEGIN("tensor");

TEST_CASE("shape constructor zero-fills") {
  const Tensor t({2, 3});
  CHECK(t.size() == 6);
  CHECK(t.rank() == 2);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] == 0.0);
}

TEST_CASE("construction validates shape and data") {
  CHECK_THROWS_AS(Tensor(std::vector<std::size_t>{}), shape_error);
  CHECK_THROWS_AS(Tensor({0}), shape_error);
  CHECK_THROWS_AS(Tensor({2, 0, 3}), shape_error);
  CHECK_THROWS_AS(Tensor({2}, {1.0, 2.0, 3.0}), shape_error);
  CHECK_THROWS_AS(Tensor({2}, {1.0, std::nan("")}), domain_error);
  CHECK_THROWS_AS(Tensor({2}, {1.0, std::numeric_limits<double>::infinity()}),
                  domain_error);
}

TEST_CASE("checked_numel guards overflow") {
  const std::size_t big = std::numeric_limits<std::size_t>::max() / 2;
  CHECK_THROWS_AS(checked_numel({big, 3}), shape_error);
  CHECK(checked_numel({4, 5, 6}) == 120);
}

TEST_CASE("flatten preserves row-major order") {
  const Tensor t({2, 2}, {1.0, 2.0, 3.0, 4.0});
  const Tensor f = flatten(t);
  CHECK(f.rank() == 1);
  CHECK(f.shape()[0] == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(f[i] == t[i]);
}

TEST_CASE("l2_norm matches a direct sum") {
  const Tensor t({3}, {3.0, 4.0, 12.0});
  CHECK(l2_norm(t) == doctest::Approx(13.0).epsilon(1e-15));
}

TEST_CASE("random tensors are deterministic per seed") {
  const Seed seed{11, 3};
  const Tensor a = random_gaussian({4, 5}, seed);
  const Tensor b = random_gaussian({4, 5}, seed);
  const Tensor c = random_gaussian({4, 5}, seed.derive(0));
  CHECK(a == b);
  CHECK(a != c);
  const Tensor u = random_uniform01({1000}, seed);
  for (std::size_t i = 0; i < u.size(); ++i) {
    CHECK(u[i] >= 0.0);
    CHECK(u[i] < 1.0);
  }
}

TEST_CASE("save/load round trip through 32-bit floats") {
  TempDir dir;
  const Tensor t = random_gaussian({3, 4, 2}, Seed{21, 0});
  const auto path = dir.file("t.bqt");
  save_tensor(t, path);
  const Tensor back = load_tensor(path);
  CHECK(back.shape() == t.shape());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(back[i] == static_cast<double>(static_cast<float>(t[i])));
  }
}

TEST_CASE("on-disk layout is the documented byte sequence") {
  TempDir dir;
  const Tensor t({2, 2}, {1.0, 2.0, 3.0, 4.0});
  const auto path = dir.file("t.bqt");
  save_tensor(t, path);
  const auto bytes = read_bytes(path);
  REQUIRE(bytes.size() == 4 + 1 + 2 * 8 + 4 * 4);
  CHECK(bytes[0] == 'B');
  CHECK(bytes[1] == 'Q');
  CHECK(bytes[2] == 'T');
  CHECK(bytes[3] == '1');
  CHECK(bytes[4] == 2);  // rank
  CHECK(bytes[5] == 2);  // dim0 low byte
  CHECK(bytes[13] == 2);  // dim1 low byte
  // 1.0f little-endian is 00 00 80 3F.
  CHECK(bytes[21] == 0x00);
  CHECK(bytes[22] == 0x00);
  CHECK(bytes[23] == 0x80);
  CHECK(bytes[24] == 0x3F);
}

TEST_CASE("loader rejects malformed files") {
  TempDir dir;
  const auto path = dir.file("bad.bqt");

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_tensor(dir.file("nope.bqt")), io_error);
  }
  SUBCASE("bad magic") {
    write_bytes(path, {'X', 'X', 'X', 'X', 1});
    CHECK_THROWS_AS(load_tensor(path), format_error);
  }
  SUBCASE("zero rank") {
    write_bytes(path, {'B', 'Q', 'T', '1', 0});
    CHECK_THROWS_AS(load_tensor(path), format_error);
  }
  SUBCASE("truncated dims") {
    write_bytes(path, {'B', 'Q', 'T', '1', 2, 1, 0, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(load_tensor(path), format_error);
  }
  SUBCASE("zero dim") {
    write_bytes(path, {'B', 'Q', 'T', '1', 1, 0, 0, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(load_tensor(path), format_error);
  }
  SUBCASE("truncated payload") {
    write_bytes(path, {'B', 'Q', 'T', '1', 1, 2, 0, 0, 0, 0, 0, 0, 0,
                       0x00, 0x00, 0x80, 0x3F});
    CHECK_THROWS_AS(load_tensor(path), format_error);
  }
  SUBCASE("trailing garbage") {
    const Tensor t({1}, {1.0});
    save_tensor(t, path);
    auto bytes = read_bytes(path);
    bytes.push_back(0);
    write_bytes(path, bytes);
    CHECK_THROWS_AS(load_tensor(path), format_error);
  }
  SUBCASE("non-finite payload") {
    // 7F 80 00 00 is +inf as f32; stored little-endian.
    write_bytes(path, {'B', 'Q', 'T', '1', 1, 1, 0, 0, 0, 0, 0, 0, 0,
                       0x00, 0x00, 0x80, 0x7F});
    CHECK_THROWS_AS(load_tensor(path), format_error);
  }
}

TEST_CASE("empty tensor cannot be saved") {
  TempDir dir;
  CHECK_THROWS_AS(save_tensor(Tensor{}, dir.file("e.bqt")), shape_error);
}

TEST_SUITE_END();
