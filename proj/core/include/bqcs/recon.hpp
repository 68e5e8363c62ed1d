#pragma once

#include <cstdint>
#include <vector>

#include "bqcs/bitcode.hpp"
#include "bqcs/sensing.hpp"
#include "bqcs/tensor.hpp"

namespace bqcs {

struct ReconResult {
  Tensor w_hat;
  double cosine_similarity = 0.0;  // NaN when no ground truth was supplied
  double l2_error = 0.0;           // after optimal scalar alignment; NaN too
  double m_over_p = 0.0;
  int64_t k = 0;  // k == p means no sparsity projection
};

/// Keeps the k largest-magnitude entries and zeroes the rest; magnitude ties
/// broken in favor of the lowest index. Idempotent.
Tensor hard_threshold(const Tensor& x, int64_t k);

/// Projected back-projection decoder:
///   w_hat = hard_threshold(lambda * phi^T q, k),  q = unpack(code)
/// with lambda = sqrt(pi/2) * norm_hint / m for a raw N(0,1) ensemble (the
/// 1/sqrt(m) pre-scaling of a normalized ensemble is compensated). Dithered
/// ensembles are rejected. When `truth` is given, cosine similarity and the
/// scalar-aligned l2 error are filled in; otherwise they are NaN.
ReconResult pbp_reconstruct(const BitCode& code, const SensingEnsemble& ens,
                            int64_t k, double norm_hint,
                            const Tensor* truth = nullptr);

/// One deterministic reconstruction per (m, seed): for each m in ascending
/// m_list and each trial, a fresh dither-free Gaussian ensemble is generated
/// from base_seed.derive(m_index).derive(trial), w is encoded and decoded,
/// metrics are measured against w itself. Results are m-major.
std::vector<ReconResult> recon_error_sweep(const Tensor& w, int64_t k,
                                           const std::vector<int64_t>& m_list,
                                           int64_t num_seeds, Seed base_seed);

}  // namespace bqcs
