#include "bqcs/convapprox.hpp"

#include <cmath>

namespace bqcs {

std::string to_string(ScaleMode m) {
  return m == ScaleMode::weight_only ? "weight_only" : "dual";
}

std::string to_string(QcsConvMode m) {
  return m == QcsConvMode::raw ? "raw" : "debiased";
}

ConvDims conv_dims(const Tensor& input, const ConvSpec& spec) {
  if (input.rank() != 3) {
    throw shape_error("conv input must be rank 3 [h, w, c], got rank " +
                      std::to_string(input.rank()));
  }
  if (spec.kh < 1 || spec.kw < 1 || spec.c < 1) {
    throw shape_error("conv kernel dims must be >= 1");
  }
  if (spec.stride < 1) throw shape_error("conv stride must be >= 1");
  if (spec.padding < 0) throw shape_error("conv padding must be >= 0");
  const auto h = static_cast<int64_t>(input.shape()[0]);
  const auto w = static_cast<int64_t>(input.shape()[1]);
  const auto c = static_cast<int64_t>(input.shape()[2]);
  if (c != spec.c) {
    throw shape_error("conv channel mismatch: input c=" + std::to_string(c) +
                      " kernel c=" + std::to_string(spec.c));
  }
  ConvDims d;
  d.oh = (h + 2 * spec.padding - spec.kh) / spec.stride + 1;
  d.ow = (w + 2 * spec.padding - spec.kw) / spec.stride + 1;
  d.patch_len = spec.kh * spec.kw * spec.c;
  if (h + 2 * spec.padding < spec.kh || w + 2 * spec.padding < spec.kw ||
      d.oh < 1 || d.ow < 1) {
    throw shape_error("conv output would be empty for input " +
                      std::to_string(h) + "x" + std::to_string(w));
  }
  return d;
}

namespace {

void check_kernel(const Tensor& kernel, const ConvSpec& spec) {
  if (kernel.rank() != 3 ||
      static_cast<int64_t>(kernel.shape()[0]) != spec.kh ||
      static_cast<int64_t>(kernel.shape()[1]) != spec.kw ||
      static_cast<int64_t>(kernel.shape()[2]) != spec.c) {
    throw shape_error("kernel tensor does not match conv spec [kh, kw, c]");
  }
}

}  // namespace

PatchMatrix im2col(const Tensor& input, const ConvSpec& spec) {
  const ConvDims d = conv_dims(input, spec);
  const auto h = static_cast<int64_t>(input.shape()[0]);
  const auto w = static_cast<int64_t>(input.shape()[1]);
  const auto c = static_cast<int64_t>(input.shape()[2]);

  PatchMatrix pm;
  pm.rows = d.oh * d.ow;
  pm.cols = d.patch_len;
  pm.data.assign(static_cast<std::size_t>(pm.rows * pm.cols), 0.0);

  const double* in = input.data();
  for (int64_t oy = 0; oy < d.oh; ++oy) {
    for (int64_t ox = 0; ox < d.ow; ++ox) {
      double* row =
          pm.data.data() + static_cast<std::size_t>((oy * d.ow + ox) * pm.cols);
      int64_t col = 0;
      for (int64_t ky = 0; ky < spec.kh; ++ky) {
        const int64_t iy = oy * spec.stride + ky - spec.padding;
        for (int64_t kx = 0; kx < spec.kw; ++kx) {
          const int64_t ix = ox * spec.stride + kx - spec.padding;
          for (int64_t ch = 0; ch < c; ++ch, ++col) {
            if (iy >= 0 && iy < h && ix >= 0 && ix < w) {
              row[col] = in[(iy * w + ix) * c + ch];
            }
          }
        }
      }
    }
  }
  return pm;
}

Tensor conv_reference(const Tensor& input, const Tensor& kernel,
                      const ConvSpec& spec) {
  const ConvDims d = conv_dims(input, spec);
  check_kernel(kernel, spec);
  const auto h = static_cast<int64_t>(input.shape()[0]);
  const auto w = static_cast<int64_t>(input.shape()[1]);
  const auto c = static_cast<int64_t>(input.shape()[2]);
  const double* in = input.data();
  const double* ker = kernel.data();

  std::vector<double> out(static_cast<std::size_t>(d.oh * d.ow), 0.0);
  for (int64_t oy = 0; oy < d.oh; ++oy) {
    for (int64_t ox = 0; ox < d.ow; ++ox) {
      double acc = 0.0;
      for (int64_t ky = 0; ky < spec.kh; ++ky) {
        const int64_t iy = oy * spec.stride + ky - spec.padding;
        if (iy < 0 || iy >= h) continue;
        for (int64_t kx = 0; kx < spec.kw; ++kx) {
          const int64_t ix = ox * spec.stride + kx - spec.padding;
          if (ix < 0 || ix >= w) continue;
          for (int64_t ch = 0; ch < c; ++ch) {
            acc += in[(iy * w + ix) * c + ch] *
                   ker[(ky * spec.kw + kx) * c + ch];
          }
        }
      }
      out[static_cast<std::size_t>(oy * d.ow + ox)] = acc;
    }
  }
  return Tensor({static_cast<std::size_t>(d.oh), static_cast<std::size_t>(d.ow)},
                std::move(out));
}

namespace {

Tensor patch_tensor(std::span<const double> row) {
  return Tensor({row.size()}, std::vector<double>(row.begin(), row.end()));
}

}  // namespace

Tensor approx_conv_standard(const Tensor& input, const Tensor& kernel,
                            const ConvSpec& spec, ScaleMode mode) {
  const ConvDims d = conv_dims(input, spec);
  check_kernel(kernel, spec);
  const PatchMatrix pm = im2col(input, spec);
  const Tensor w = flatten(kernel);
  const BitCode code_w = sign_quantize(w);
  const double alpha_w = optimal_scale(w);

  std::vector<double> out(static_cast<std::size_t>(pm.rows));
  for (int64_t r = 0; r < pm.rows; ++r) {
    const Tensor x = patch_tensor(pm.row(r));
    const BitCode code_x = sign_quantize(x);
    double alpha = alpha_w;
    if (mode == ScaleMode::dual) alpha *= optimal_scale(x);
    out[static_cast<std::size_t>(r)] =
        static_cast<double>(binary_dot(code_x, code_w)) * alpha;
  }
  return Tensor({static_cast<std::size_t>(d.oh), static_cast<std::size_t>(d.ow)},
                std::move(out));
}

Tensor approx_conv_qcs(const Tensor& input, const Tensor& kernel,
                       const ConvSpec& spec, const SensingEnsemble& ens,
                       QcsConvMode mode) {
  const ConvDims d = conv_dims(input, spec);
  check_kernel(kernel, spec);
  if (ens.p() != d.patch_len) {
    throw shape_error("ensemble p=" + std::to_string(ens.p()) +
                      " does not match patch length " +
                      std::to_string(d.patch_len));
  }
  const PatchMatrix pm = im2col(input, spec);
  const Tensor w = flatten(kernel);
  const BitCode code_w = qcs_quantize(w, ens);
  const double norm_w = l2_norm(w);

  std::vector<double> out(static_cast<std::size_t>(pm.rows));
  for (int64_t r = 0; r < pm.rows; ++r) {
    const Tensor x = patch_tensor(pm.row(r));
    const BitCode code_x = qcs_quantize(x, ens);
    if (mode == QcsConvMode::raw) {
      out[static_cast<std::size_t>(r)] =
          static_cast<double>(binary_dot(code_x, code_w));
    } else {
      out[static_cast<std::size_t>(r)] =
          est_inner(code_x, code_w, l2_norm(x), norm_w);
    }
  }
  return Tensor({static_cast<std::size_t>(d.oh), static_cast<std::size_t>(d.ow)},
                std::move(out));
}

double relative_error(const Tensor& approx, const Tensor& reference) {
  if (approx.shape() != reference.shape()) {
    throw shape_error("relative_error: shape mismatch");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    const double d = approx[i] - reference[i];
    num += d * d;
    den += reference[i] * reference[i];
  }
  if (den == 0.0) {
    throw domain_error("relative_error: reference tensor has zero norm");
  }
  return std::sqrt(num / den);
}

}  // namespace bqcs
