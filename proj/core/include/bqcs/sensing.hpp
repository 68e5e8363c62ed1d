#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bqcs/seed.hpp"
#include "bqcs/tensor.hpp"

namespace bqcs {

enum class DitherMode { none, uniform01, scaled };

/// Dither configuration: none -> zero bias; uniform01 -> i.i.d. U[0,1);
/// scaled -> i.i.d. U[0,delta).
struct DitherSpec {
  DitherMode mode = DitherMode::none;
  double delta = 0.0;  // only meaningful for scaled

  static DitherSpec none() { return {DitherMode::none, 0.0}; }
  static DitherSpec uniform01() { return {DitherMode::uniform01, 0.0}; }
  static DitherSpec scaled(double delta);

  friend bool operator==(const DitherSpec&, const DitherSpec&) = default;
};

std::string to_string(const DitherSpec& d);
DitherSpec dither_from_string(const std::string& s);

/// Everything needed to regenerate an ensemble, as recorded in configs,
/// report headers and quantized-layer sidecars.
struct EnsembleRef {
  std::string kind = "grm";  // "grm" or "identity"
  int64_t m = 0;
  int64_t p = 0;
  DitherSpec dither;
  bool normalize = false;
  Seed seed;
  double scale = 1.0;  // identity only

  friend bool operator==(const EnsembleRef&, const EnsembleRef&) = default;
};

/// Sensing matrix (m x p, row-major) plus dither vector of length m.
/// Immutable after generation; regenerating from ref() reproduces identical
/// entries.
class SensingEnsemble {
 public:
  int64_t m() const { return m_; }
  int64_t p() const { return p_; }
  const std::vector<double>& phi() const { return phi_; }
  const std::vector<double>& dither() const { return dither_; }
  std::span<const double> row(int64_t i) const {
    return {phi_.data() + i * p_, static_cast<std::size_t>(p_)};
  }
  const DitherSpec& dither_mode() const { return dither_mode_; }
  bool normalized() const { return normalize_; }
  const EnsembleRef& ref() const { return ref_; }
  bool dither_free() const { return dither_mode_.mode == DitherMode::none; }

 private:
  friend SensingEnsemble gen_ensemble(int64_t, int64_t, DitherSpec, bool,
                                      Seed);
  friend SensingEnsemble identity_ensemble(int64_t, double);

  int64_t m_ = 0, p_ = 0;
  std::vector<double> phi_;
  std::vector<double> dither_;
  DitherSpec dither_mode_;
  bool normalize_ = false;
  EnsembleRef ref_;
};

/// Gaussian random ensemble: phi entries i.i.d. N(0,1), then scaled by
/// 1/sqrt(m) iff normalize; dither per mode.
SensingEnsemble gen_ensemble(int64_t m, int64_t p, DitherSpec dither,
                             bool normalize, Seed seed);

/// m = p, phi = scale * I_p, zero dither.
SensingEnsemble identity_ensemble(int64_t p, double scale);

/// Rebuild an ensemble from a recorded tuple.
SensingEnsemble regenerate(const EnsembleRef& ref);

/// Linear measurement y = phi * flatten(w); the dither is deliberately not
/// added here (the quantizer owns it).
Tensor measure(const SensingEnsemble& ens, const Tensor& w);

struct RipEstimate {
  int64_t k = 0;
  double delta_hat = 0.0;
  int64_t trials = 0;
  Seed seed;
};

/// Random k-sparse vector: support drawn without replacement, Gaussian
/// values, left unnormalized (probes use norm ratios, so scale cancels).
Tensor sparse_gaussian_probe(int64_t p, int64_t k, Seed seed);

/// max over probes of |  ||A x||^2 / ||x||^2 - 1 | where A is phi / sqrt(m)
/// (or phi as-is when the ensemble was generated pre-normalized). Zero
/// entries of each probe are skipped, so k-sparse probes cost O(m k).
double rip_delta(const SensingEnsemble& ens,
                 std::span<const Tensor> probes);

/// Empirical restricted-isometry probe over `trials` random k-sparse
/// directions. A lower bound on the true constant, not a certificate.
RipEstimate rip_probe(const SensingEnsemble& ens, int64_t k, int64_t trials,
                      Seed seed);

/// Exact delta_k by enumerating every size-k support and taking the extreme
/// eigenvalues of the normalized Gram blocks. Exponential in k; restricted
/// to p <= 16 and k <= 3, used as the oracle for rip_probe.
double rip_exhaustive(const SensingEnsemble& ens, int64_t k);

}  // namespace bqcs
