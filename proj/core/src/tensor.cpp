#include "bqcs/tensor.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace bqcs {

namespace {

void check_finite(const std::vector<double>& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      throw domain_error("tensor element " + std::to_string(i) +
                         " is not finite");
    }
  }
}

}  // namespace

std::size_t checked_numel(const std::vector<std::size_t>& shape) {
  if (shape.empty()) {
    throw shape_error("tensor shape must have at least one dimension");
  }
  std::size_t n = 1;
  for (std::size_t d : shape) {
    if (d == 0) {
      throw shape_error("tensor dimensions must be >= 1 (got 0)");
    }
    if (d > std::numeric_limits<std::size_t>::max() / n) {
      throw shape_error("tensor shape overflows size_t");
    }
    n *= d;
  }
  return n;
}

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
  data_.assign(checked_numel(shape_), 0.0);
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  const std::size_t n = checked_numel(shape_);
  if (n != data_.size()) {
    throw shape_error("tensor data length " + std::to_string(data_.size()) +
                      " does not match shape product " + std::to_string(n));
  }
  check_finite(data_);
}

Tensor random_gaussian(const std::vector<std::size_t>& shape, Seed seed) {
  const std::size_t n = checked_numel(shape);
  SplitMix64 rng(seed);
  std::vector<double> data(n);
  for (double& x : data) x = rng.next_gaussian();
  return Tensor(shape, std::move(data));
}

Tensor random_uniform01(const std::vector<std::size_t>& shape, Seed seed) {
  const std::size_t n = checked_numel(shape);
  SplitMix64 rng(seed);
  std::vector<double> data(n);
  for (double& x : data) x = rng.next_uniform01();
  return Tensor(shape, std::move(data));
}

Tensor flatten(const Tensor& t) {
  return Tensor({t.size()}, std::vector<double>(t.data(), t.data() + t.size()));
}

double l2_norm(const Tensor& t) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += t[i] * t[i];
  return std::sqrt(s);
}

}  // namespace bqcs
