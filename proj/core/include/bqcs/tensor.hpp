#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "bqcs/errors.hpp"
#include "bqcs/seed.hpp"

namespace bqcs {

/// Dense real tensor, row-major, 64-bit floats in memory (the on-disk format
/// is 32-bit, see save_tensor). Every public constructor and loader enforces
/// that all dims are >= 1 and all elements are finite. Treat instances as
/// immutable once they leave the code that built them.
class Tensor {
 public:
  Tensor() = default;  // empty; not a valid operand for any operation

  /// Zero-filled tensor of the given shape.
  explicit Tensor(std::vector<std::size_t> shape);

  /// Takes ownership of `data`; product(shape) must equal data.size() and all
  /// values must be finite.
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<const double> values() const { return data_; }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

/// Throws shape_error unless all dims >= 1 and the element count fits memory.
std::size_t checked_numel(const std::vector<std::size_t>& shape);

/// i.i.d. N(0,1) entries, deterministic per seed.
Tensor random_gaussian(const std::vector<std::size_t>& shape, Seed seed);

/// i.i.d. uniform [0,1) entries, deterministic per seed.
Tensor random_uniform01(const std::vector<std::size_t>& shape, Seed seed);

/// Rank-1 view-copy of t in row-major element order.
Tensor flatten(const Tensor& t);

double l2_norm(const Tensor& t);

/// "BQT1" container: magic 'B''Q''T''1', u8 rank, rank x u64 little-endian
/// dims, then product(dims) x f32 little-endian payload. Values are rounded
/// to 32-bit floats on write.
void save_tensor(const Tensor& t, const std::filesystem::path& path);
Tensor load_tensor(const std::filesystem::path& path);

}  // namespace bqcs
