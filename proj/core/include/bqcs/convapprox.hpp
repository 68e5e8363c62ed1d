#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bqcs/quantize.hpp"
#include "bqcs/sensing.hpp"
#include "bqcs/tensor.hpp"

namespace bqcs {

/// Single-output-channel 2D convolution layout. Inputs are [h, w, c], kernels
/// [kh, kw, c]; cross-correlation convention (no kernel flip), zero padding
/// on the spatial dims.
struct ConvSpec {
  int64_t kh = 1, kw = 1, c = 1;
  int64_t stride = 1;
  int64_t padding = 0;
};

struct ConvDims {
  int64_t oh = 0, ow = 0;
  int64_t patch_len = 0;  // kh * kw * c
};

/// Output geometry for an input of shape [h, w, c]; throws shape_error when
/// the shapes are incompatible or any output dim would be < 1.
ConvDims conv_dims(const Tensor& input, const ConvSpec& spec);

/// One row per output position; row r is that position's receptive field
/// flattened in (kh, kw, c) row-major order, zeros where the field leaves
/// the padded input.
struct PatchMatrix {
  int64_t rows = 0;
  int64_t cols = 0;
  std::vector<double> data;  // row-major

  std::span<const double> row(int64_t r) const {
    return {data.data() + r * cols, static_cast<std::size_t>(cols)};
  }
};

PatchMatrix im2col(const Tensor& input, const ConvSpec& spec);

/// Real-valued reference: out[oy, ox] = <receptive field, kernel> in 64-bit
/// arithmetic, computed by direct loops (not via im2col, so the two routes
/// can check each other).
Tensor conv_reference(const Tensor& input, const Tensor& kernel,
                      const ConvSpec& spec);

enum class ScaleMode { weight_only, dual };
enum class QcsConvMode { raw, debiased };

std::string to_string(ScaleMode m);
std::string to_string(QcsConvMode m);

/// Sign-binarized approximation: per patch x_r,
///   out[r] = binary_dot(sign(x_r), sign(kernel)) * alpha_r
/// with alpha_r = mean|kernel| (weight_only) or mean|kernel| * mean|x_r|
/// (dual).
Tensor approx_conv_standard(const Tensor& input, const Tensor& kernel,
                            const ConvSpec& spec, ScaleMode mode);

/// Compressed-sensing approximation with one ensemble shared by the kernel
/// and every patch. raw: the plain binary dot (integer in [-m, m]);
/// debiased: est_inner with the stored Euclidean norms.
Tensor approx_conv_qcs(const Tensor& input, const Tensor& kernel,
                       const ConvSpec& spec, const SensingEnsemble& ens,
                       QcsConvMode mode);

/// ||approx - reference||_F / ||reference||_F.
double relative_error(const Tensor& approx, const Tensor& reference);

}  // namespace bqcs
