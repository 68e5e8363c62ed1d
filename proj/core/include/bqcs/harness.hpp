#pragma once

#include <cstdint>

#include "bqcs/config.hpp"
#include "bqcs/report.hpp"

namespace bqcs {

/// Worker count for trial-level parallelism: the BQCS_THREADS environment
/// variable caps it, 0 or unset means one worker per hardware thread.
int64_t harness_threads();

/// Dispatch on cfg.kind after validation. Rows are canonically sorted and
/// the summary is recomputed from them, so repeated runs of one config are
/// byte-identical apart from wall-time metrics and the report timestamp.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Binary-convolution error sweep: per trial, Gaussian input and kernel,
/// reference convolution, then one row per configured approximation
/// (standard weight_only/dual/unscaled, QCS raw/debiased per m/p ratio)
/// plus a raw identity-ensemble control row that must match the unscaled
/// standard row exactly.
ExperimentReport run_conv_bench(const ExperimentConfig& cfg);

/// One-bit reconstruction sweep over the configured signal families
/// (dense Gaussian and/or k-sparse) and m/p ratios; rows carry cosine
/// similarity and scalar-aligned l2 error.
ExperimentReport run_recon_bench(const ExperimentConfig& cfg);

/// Empirical restricted-isometry probe over the (rip_m x rip_k) grid for
/// Gaussian ensembles, with a matched identity-ensemble control row (forced
/// delta_hat = 0) per grid point.
ExperimentReport run_rip_check(const ExperimentConfig& cfg);

/// Packed binary dot vs unpacked 64-bit-float dot at each configured length:
/// per-op nanoseconds after warmup, speedup ratio, and exact payload-bit
/// accounting against 32-bit-float storage.
ExperimentReport run_throughput(const ExperimentConfig& cfg);

}  // namespace bqcs
