#include "bqcs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "bqcs/convapprox.hpp"
#include "bqcs/errors.hpp"
#include "bqcs/quantize.hpp"
#include "bqcs/recon.hpp"
#include "bqcs/sensing.hpp"
#include "bqcs/stats.hpp"
#include "bqcs/tensor.hpp"

namespace bqcs {

namespace {

/// Independent per-trial seed value; distinct trials of one base seed get
/// unrelated streams, and the value is recorded in the row's seed column.
uint64_t trial_seed_value(uint64_t base, int64_t trial) {
  return detail::mix64(base +
                       (static_cast<uint64_t>(trial) + 1) * detail::kGolden);
}

/// Runs fn(0..n-1), possibly across threads. The caller must make fn(i)
/// independent of execution order; the first exception is rethrown.
void parallel_for(int64_t n, const std::function<void(int64_t)>& fn) {
  const int64_t workers = std::min<int64_t>(harness_threads(), n);
  if (workers <= 1) {
    for (int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int64_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

int64_t ratio_to_m(double ratio, int64_t p) {
  return std::max<int64_t>(1, std::llround(ratio * static_cast<double>(p)));
}

ExperimentReport finish(const ExperimentConfig& cfg,
                        std::vector<std::vector<ReportRow>> per_trial_rows) {
  ExperimentReport report;
  report.config_json = config_to_json(cfg);
  for (auto& rows : per_trial_rows) {
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  sort_rows_canonically(report.rows);
  report.summary = summarize(report.rows);
  report.meta = make_meta();
  report.meta.threads = harness_threads();
  return report;
}

/// Unscaled sign-binarized convolution: the alpha-free common core of the
/// standard scheme and of raw QCS under an identity ensemble.
Tensor unscaled_standard_conv(const Tensor& input, const Tensor& kernel,
                              const ConvSpec& spec) {
  const ConvDims dims = conv_dims(input, spec);
  const PatchMatrix patches = im2col(input, spec);
  const BitCode code_w = sign_quantize(flatten(kernel));
  Tensor out({static_cast<std::size_t>(dims.oh),
              static_cast<std::size_t>(dims.ow)});
  for (int64_t r = 0; r < patches.rows; ++r) {
    const auto row = patches.row(r);
    const Tensor patch({row.size()}, {row.begin(), row.end()});
    out[static_cast<std::size_t>(r)] = static_cast<double>(
        binary_dot(sign_quantize(patch), code_w));
  }
  return out;
}

}  // namespace

int64_t harness_threads() {
  const char* env = std::getenv("BQCS_THREADS");
  int64_t cap = 0;
  if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end == nullptr || *end != '\0' || v < 0) {
      throw config_error(std::string("BQCS_THREADS: expected a non-negative "
                                     "integer, got '") +
                         env + "'");
    }
    cap = v;
  }
  const int64_t hw =
      std::max<int64_t>(1, std::thread::hardware_concurrency());
  return cap == 0 ? hw : std::min(cap, hw);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  ExperimentConfig checked = cfg;
  validate_config(checked);
  if (checked.kind == "conv-bench") return run_conv_bench(checked);
  if (checked.kind == "recon-bench") return run_recon_bench(checked);
  if (checked.kind == "rip-check") return run_rip_check(checked);
  return run_throughput(checked);
}

ExperimentReport run_conv_bench(const ExperimentConfig& cfg) {
  const ConvSpec spec{cfg.kernel_h, cfg.kernel_w, cfg.input_c, cfg.stride,
                      cfg.padding};
  const int64_t p = cfg.kernel_h * cfg.kernel_w * cfg.input_c;
  const std::vector<std::size_t> input_shape = {
      static_cast<std::size_t>(cfg.input_h),
      static_cast<std::size_t>(cfg.input_w),
      static_cast<std::size_t>(cfg.input_c)};
  const std::vector<std::size_t> kernel_shape = {
      static_cast<std::size_t>(cfg.kernel_h),
      static_cast<std::size_t>(cfg.kernel_w),
      static_cast<std::size_t>(cfg.input_c)};

  std::vector<ScaleMode> scale_modes;
  if (cfg.scale_mode != "dual") scale_modes.push_back(ScaleMode::weight_only);
  if (cfg.scale_mode != "weight_only") scale_modes.push_back(ScaleMode::dual);
  std::vector<QcsConvMode> qcs_modes;
  if (cfg.estimator != "debiased") qcs_modes.push_back(QcsConvMode::raw);
  if (cfg.estimator != "raw") qcs_modes.push_back(QcsConvMode::debiased);

  std::vector<std::vector<ReportRow>> per_trial(
      static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, [&](int64_t t) {
    const uint64_t seed_value = trial_seed_value(cfg.seed, t);
    const Seed ts{seed_value, 0};
    const Tensor input = random_gaussian(input_shape, ts.derive(0));
    const Tensor kernel = random_gaussian(kernel_shape, ts.derive(1));
    const Tensor reference = conv_reference(input, kernel, spec);
    const double alpha = optimal_scale(kernel);
    const double kernel_norm = l2_norm(flatten(kernel));

    auto& rows = per_trial[static_cast<std::size_t>(t)];
    auto base_row = [&] {
      ReportRow r;
      r.kind = "conv-bench";
      r.p = p;
      r.seed = seed_value;
      r.trial = t;
      r.norm = kernel_norm;
      return r;
    };

    for (const ScaleMode mode : scale_modes) {
      const Tensor approx = approx_conv_standard(input, kernel, spec, mode);
      ReportRow r = base_row();
      r.scheme = "standard";
      r.mode = to_string(mode);
      r.relative_error = relative_error(approx, reference);
      r.alpha = alpha;
      r.payload_bits = p;
      rows.push_back(std::move(r));
    }

    // Unscaled standard and its identity-ensemble twin: raw QCS through
    // phi = I reduces to plain sign binarization, so these two rows must
    // carry identical errors.
    {
      const Tensor unscaled = unscaled_standard_conv(input, kernel, spec);
      ReportRow r = base_row();
      r.scheme = "standard";
      r.mode = "unscaled";
      r.relative_error = relative_error(unscaled, reference);
      r.payload_bits = p;
      rows.push_back(std::move(r));

      const SensingEnsemble identity = identity_ensemble(p, 1.0);
      const Tensor control =
          approx_conv_qcs(input, kernel, spec, identity, QcsConvMode::raw);
      ReportRow c = base_row();
      c.scheme = "qcs";
      c.mode = "raw";
      c.ensemble = "identity";
      c.m = p;
      c.ratio = 1.0;
      c.relative_error = relative_error(control, reference);
      c.payload_bits = p;
      rows.push_back(std::move(c));
    }

    for (std::size_t ri = 0; ri < cfg.ratios.size(); ++ri) {
      const int64_t m = ratio_to_m(cfg.ratios[ri], p);
      const SensingEnsemble ens = gen_ensemble(
          m, p, cfg.dither, cfg.normalize, ts.derive(2 + ri));
      for (const QcsConvMode mode : qcs_modes) {
        const Tensor approx = approx_conv_qcs(input, kernel, spec, ens, mode);
        ReportRow r = base_row();
        r.scheme = "qcs";
        r.mode = to_string(mode);
        r.ensemble = "grm";
        r.m = m;
        r.ratio = cfg.ratios[ri];
        r.relative_error = relative_error(approx, reference);
        r.payload_bits = m;
        if (mode == QcsConvMode::debiased) r.biased = !ens.dither_free();
        rows.push_back(std::move(r));
      }
    }
  });
  return finish(cfg, std::move(per_trial));
}

ExperimentReport run_recon_bench(const ExperimentConfig& cfg) {
  const int64_t p = cfg.p;
  std::vector<int64_t> m_list;
  m_list.reserve(cfg.ratios.size());
  for (const double ratio : cfg.ratios) m_list.push_back(ratio_to_m(ratio, p));
  std::sort(m_list.begin(), m_list.end());
  m_list.erase(std::unique(m_list.begin(), m_list.end()), m_list.end());

  const Seed base{cfg.seed, 0};
  std::vector<std::vector<ReportRow>> per_family(cfg.families.size());
  parallel_for(static_cast<int64_t>(cfg.families.size()), [&](int64_t fi) {
    const std::string& family = cfg.families[static_cast<std::size_t>(fi)];
    const bool dense = family == "dense";
    const Tensor w =
        dense ? random_gaussian({static_cast<std::size_t>(p)}, base.derive(0))
              : sparse_gaussian_probe(p, cfg.sparse_k, base.derive(1));
    const int64_t k = dense ? p : cfg.sparse_k;
    const std::vector<ReconResult> results = recon_error_sweep(
        w, k, m_list, cfg.trials, base.derive(2 + static_cast<uint64_t>(fi)));

    auto& rows = per_family[static_cast<std::size_t>(fi)];
    const double w_norm = l2_norm(w);
    for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
      for (int64_t t = 0; t < cfg.trials; ++t) {
        const ReconResult& res =
            results[mi * static_cast<std::size_t>(cfg.trials) +
                    static_cast<std::size_t>(t)];
        ReportRow r;
        r.kind = "recon-bench";
        r.scheme = "qcs";
        r.mode = "pbp";
        r.ensemble = "grm";
        r.family = family;
        r.m = m_list[mi];
        r.p = p;
        r.k = k;
        r.ratio = res.m_over_p;
        r.seed = cfg.seed;
        r.trial = t;
        r.cosine_similarity = res.cosine_similarity;
        r.l2_error = res.l2_error;
        r.norm = w_norm;
        r.payload_bits = m_list[mi];
        rows.push_back(std::move(r));
      }
    }
  });
  return finish(cfg, std::move(per_family));
}

ExperimentReport run_rip_check(const ExperimentConfig& cfg) {
  const int64_t p = cfg.p;
  std::vector<std::vector<ReportRow>> per_trial(
      static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, [&](int64_t t) {
    const uint64_t seed_value = trial_seed_value(cfg.seed, t);
    const Seed ts{seed_value, 0};
    auto& rows = per_trial[static_cast<std::size_t>(t)];
    uint64_t stream = 0;
    for (const int64_t m : cfg.rip_m) {
      for (const int64_t k : cfg.rip_k) {
        const SensingEnsemble grm = gen_ensemble(
            m, p, DitherSpec::none(), false, ts.derive(stream++));
        const RipEstimate est =
            rip_probe(grm, k, cfg.probe_trials, ts.derive(stream++));
        ReportRow r;
        r.kind = "rip-check";
        r.scheme = "qcs";
        r.mode = "probe";
        r.ensemble = "grm";
        r.m = m;
        r.p = p;
        r.k = k;
        r.ratio = static_cast<double>(m) / static_cast<double>(p);
        r.seed = seed_value;
        r.trial = t;
        r.delta_hat = est.delta_hat;
        rows.push_back(std::move(r));

        // Identity control: scale sqrt(p) makes the normalized operator the
        // exact identity, so the probe reads 0 no matter the draws. The
        // identity ensemble is p x p regardless of the grid's m.
        const SensingEnsemble identity =
            identity_ensemble(p, std::sqrt(static_cast<double>(p)));
        const RipEstimate id_est =
            rip_probe(identity, k, cfg.probe_trials, ts.derive(stream++));
        ReportRow c;
        c.kind = "rip-check";
        c.scheme = "qcs";
        c.mode = "probe";
        c.ensemble = "identity";
        c.m = p;
        c.p = p;
        c.k = k;
        c.ratio = 1.0;
        c.seed = seed_value;
        c.trial = t;
        c.delta_hat = id_est.delta_hat;
        rows.push_back(std::move(c));
      }
    }
  });
  return finish(cfg, std::move(per_trial));
}

namespace {

/// Keeps the compiler from discarding the timed computation.
template <typename T>
inline void sink(const T& v) {
  asm volatile("" : : "r,m"(v) : "memory");
}

}  // namespace

ExperimentReport run_throughput(const ExperimentConfig& cfg) {
  using clock = std::chrono::steady_clock;
  std::vector<std::vector<ReportRow>> per_size(cfg.sizes.size());

  // Timing loops run sequentially so runs never contend with each other.
  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    const int64_t p = cfg.sizes[si];
    const Seed ts{trial_seed_value(cfg.seed, static_cast<int64_t>(si)), 0};
    const Tensor wa = random_gaussian({static_cast<std::size_t>(p)},
                                      ts.derive(0));
    const Tensor wb = random_gaussian({static_cast<std::size_t>(p)},
                                      ts.derive(1));
    const BitCode ca = sign_quantize(wa);
    const BitCode cb = sign_quantize(wb);
    std::vector<double> ua(static_cast<std::size_t>(p));
    std::vector<double> ub(static_cast<std::size_t>(p));
    for (std::size_t i = 0; i < ua.size(); ++i) {
      ua[i] = ca.sign(i);
      ub[i] = cb.sign(i);
    }

    // Enough inner iterations that one measurement spans well over the
    // clock granularity even for the packed kernel.
    const int64_t inner =
        std::max<int64_t>(1, (1LL << 24) / std::max<int64_t>(p, 1));

    const auto run_packed = [&] {
      int64_t acc = 0;
      for (int64_t it = 0; it < inner; ++it) acc += binary_dot(ca, cb);
      sink(acc);
    };
    const auto run_float = [&] {
      double acc = 0.0;
      for (int64_t it = 0; it < inner; ++it) {
        double dot = 0.0;
        for (std::size_t i = 0; i < ua.size(); ++i) dot += ua[i] * ub[i];
        acc += dot;
      }
      sink(acc);
    };
    const auto time_ns = [&](const std::function<void()>& body) {
      const auto start = clock::now();
      body();
      const auto stop = clock::now();
      return static_cast<double>(
                 std::chrono::duration_cast<std::chrono::nanoseconds>(stop -
                                                                      start)
                     .count()) /
             static_cast<double>(inner);
    };

    for (int64_t wu = 0; wu < cfg.warmup; ++wu) {
      run_packed();
      run_float();
    }

    auto& rows = per_size[si];
    for (int64_t rep = 0; rep < cfg.reps; ++rep) {
      const double packed_ns = time_ns(run_packed);
      const double float_ns = time_ns(run_float);
      ReportRow r;
      r.kind = "throughput";
      r.scheme = "qcs";
      r.mode = "binary_dot";
      r.m = p;
      r.p = p;
      r.seed = ts.value;
      r.trial = rep;
      r.wall_ns = packed_ns;
      r.float_ns = float_ns;
      r.speedup = float_ns / packed_ns;
      r.payload_bits = memory_bits(ca);
      // Packed codes spend 1 bit per entry against 32 for float storage.
      r.mem_ratio = 32.0;
      rows.push_back(std::move(r));
    }
  }
  return finish(cfg, std::move(per_size));
}

}  // namespace bqcs
