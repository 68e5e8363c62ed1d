#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "bqcs/bitcode.hpp"
#include "bqcs/sensing.hpp"
#include "bqcs/tensor.hpp"

namespace bqcs {

enum class Scheme { standard, qcs };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

/// Sign binarization: +1 where w_i >= 0, -1 otherwise (sign(0) = +1). The
/// tensor is flattened internally; output length is p.
BitCode sign_quantize(const Tensor& w);

/// Mean absolute value (1/p) * sum |w_i| -- the least-squares-optimal scalar
/// for approximating w by alpha * sign(w).
double optimal_scale(const Tensor& w);

/// Compressed-sensing binarization: sign(phi * w + dither), elementwise, with
/// the same sign(0) = +1 tie rule. Output length is the ensemble's m.
BitCode qcs_quantize(const Tensor& w, const SensingEnsemble& ens);

/// A code plus the side metadata needed to approximate convolutions with it.
struct QuantizedLayer {
  BitCode code;
  Scheme scheme = Scheme::standard;
  double alpha = 0.0;  // standard only: mean |w_i|
  double norm = 0.0;   // ||w||_2 of the source vector
  std::optional<EnsembleRef> ensemble_ref;  // qcs only
};

QuantizedLayer quantize_layer(const Tensor& w, Scheme scheme,
                              const SensingEnsemble* ens = nullptr);

/// Writes the code as a BQC1 file at `code_path` and the metadata as a JSON
/// sidecar at `code_path + ".json"`.
void save_layer(const QuantizedLayer& layer,
                const std::filesystem::path& code_path);
QuantizedLayer load_layer(const std::filesystem::path& code_path);

/// Normalized code agreement binary_dot(a,b) / length, in [-1, 1].
double est_similarity(const BitCode& a, const BitCode& b);

/// Inner-product estimate norm_a * norm_b * cos(theta_hat) with
/// theta_hat = (pi/2) * (1 - est_similarity), clamped to [0, pi]. Valid for
/// dither-free codes drawn from one shared Gaussian ensemble.
double est_inner(const BitCode& a, const BitCode& b, double norm_a,
                 double norm_b);

}  // namespace bqcs
