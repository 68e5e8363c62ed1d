#include "bqcs/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bqcs/config.hpp"
#include "bqcs/errors.hpp"
#include "bqcs/harness.hpp"
#include "bqcs/quantize.hpp"
#include "bqcs/report.hpp"
#include "bqcs/sensing.hpp"
#include "bqcs/tensor.hpp"
#include "bqcs/version.hpp"

namespace bqcs {

namespace {

std::vector<std::size_t> parse_shape(const std::string& text) {
  std::vector<std::size_t> dims;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t sep = text.find('x', start);
    const std::string part =
        text.substr(start, sep == std::string::npos ? sep : sep - start);
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(part, &pos);
      if (pos != part.size() || v < 1) throw std::invalid_argument(part);
      dims.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw config_error("bad shape '" + text +
                         "': expected positive dims like 7x7x1");
    }
    if (sep == std::string::npos) break;
    start = sep + 1;
  }
  return dims;
}

/// Flag holders for one bench subcommand. Values only land in the effective
/// config when the flag was actually given, so the precedence is
/// defaults < --config file < explicit flags.
struct BenchFlags {
  std::string config_path;
  ExperimentConfig v;  // holder; selectively copied by apply()
  std::string dither;
  bool verify = false;
};

void add_common_flags(CLI::App* sub, BenchFlags& f) {
  sub->add_option("--config", f.config_path,
                  "JSON config file; explicit flags override it");
  sub->add_option("--seed", f.v.seed, "base seed");
  sub->add_option("--seeds", f.v.trials, "number of seeded trials");
  sub->add_option("--out", f.v.out,
                  "output path (stdout when omitted)");
  sub->add_option("--format", f.v.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--verify-report", f.verify,
                "re-load the emitted report and check its summary");
}

/// True when the option exists on this subcommand and was given.
bool flag_given(const CLI::App* sub, const char* name) {
  const CLI::Option* opt = sub->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

template <typename T>
void apply_if(const CLI::App* sub, const char* name, T& dst, const T& src) {
  if (flag_given(sub, name)) dst = src;
}

ExperimentConfig effective_config(const CLI::App* sub, const BenchFlags& f,
                                  const std::string& kind) {
  ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    cfg = load_config(f.config_path);
    if (!cfg.kind.empty() && cfg.kind != kind) {
      throw config_error("config.kind: file says '" + cfg.kind +
                         "' but the subcommand is '" + kind + "'");
    }
  }
  cfg.kind = kind;
  apply_if(sub, "--seed", cfg.seed, f.v.seed);
  apply_if(sub, "--seeds", cfg.trials, f.v.trials);
  apply_if(sub, "--out", cfg.out, f.v.out);
  apply_if(sub, "--format", cfg.format, f.v.format);
  if (f.verify) cfg.verify_report = true;

  apply_if(sub, "--input-h", cfg.input_h, f.v.input_h);
  apply_if(sub, "--input-w", cfg.input_w, f.v.input_w);
  apply_if(sub, "--input-c", cfg.input_c, f.v.input_c);
  apply_if(sub, "--kernel-h", cfg.kernel_h, f.v.kernel_h);
  apply_if(sub, "--kernel-w", cfg.kernel_w, f.v.kernel_w);
  apply_if(sub, "--stride", cfg.stride, f.v.stride);
  apply_if(sub, "--padding", cfg.padding, f.v.padding);
  apply_if(sub, "--ratios", cfg.ratios, f.v.ratios);
  if (flag_given(sub, "--dither")) {
    try {
      cfg.dither = dither_from_string(f.dither);
    } catch (const domain_error& e) {
      throw config_error(std::string("--dither: ") + e.what());
    }
  }
  apply_if(sub, "--normalize", cfg.normalize, f.v.normalize);
  apply_if(sub, "--scale-mode", cfg.scale_mode, f.v.scale_mode);
  apply_if(sub, "--estimator", cfg.estimator, f.v.estimator);

  apply_if(sub, "--p", cfg.p, f.v.p);
  apply_if(sub, "--families", cfg.families, f.v.families);
  apply_if(sub, "--sparse-k", cfg.sparse_k, f.v.sparse_k);

  apply_if(sub, "--m", cfg.rip_m, f.v.rip_m);
  apply_if(sub, "--k", cfg.rip_k, f.v.rip_k);
  apply_if(sub, "--trials", cfg.probe_trials, f.v.probe_trials);

  apply_if(sub, "--sizes", cfg.sizes, f.v.sizes);
  apply_if(sub, "--reps", cfg.reps, f.v.reps);
  apply_if(sub, "--warmup", cfg.warmup, f.v.warmup);
  return cfg;
}

int run_bench(ExperimentConfig cfg) {
  validate_config(cfg);
  const ExperimentReport report = run_experiment(cfg);
  if (cfg.out.empty()) {
    std::cout << (cfg.format == "json" ? to_json_text(report)
                                       : to_csv(report));
    if (cfg.verify_report) {
      std::string why;
      if (!verify_summary(report, &why)) {
        std::cerr << "report verification failed: " << why << "\n";
        return 5;
      }
    }
    return 0;
  }
  write_report(report, cfg.out, cfg.format);
  if (cfg.verify_report) {
    const ExperimentReport loaded = load_report(cfg.out);
    std::string why;
    if (!verify_summary(loaded, &why)) {
      std::cerr << "report verification failed: " << why << "\n";
      return 5;
    }
  }
  std::cout << "wrote " << cfg.out << " (" << report.rows.size()
            << " rows)\n";
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  int rc = 0;
  CLI::App app{"binary and one-bit compressed-sensing quantization benchmarks",
               "bqcs"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // gen
  std::string gen_shape = "3x3x1", gen_dist = "gaussian", gen_out;
  uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "generate a random tensor file");
  gen->add_option("--shape", gen_shape, "dims like 7x7x1");
  gen->add_option("--dist", gen_dist, "gaussian or uniform")
      ->check(CLI::IsMember({"gaussian", "uniform"}));
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--out", gen_out, "output .bqt path")->required();
  gen->callback([&] {
    const auto shape = parse_shape(gen_shape);
    const Seed seed{gen_seed, 0};
    const Tensor t = gen_dist == "gaussian" ? random_gaussian(shape, seed)
                                            : random_uniform01(shape, seed);
    save_tensor(t, gen_out);
    std::cout << "wrote " << gen_out << " (" << t.size() << " values)\n";
  });

  // quantize
  std::string q_scheme = "standard", q_in, q_out, q_dither = "none";
  double q_ratio = 0.0;
  int64_t q_m = 0;
  uint64_t q_seed = 1;
  bool q_normalize = false;
  auto* quant = app.add_subcommand(
      "quantize", "binarize a tensor file into a packed code + sidecar");
  quant->add_option("--scheme", q_scheme, "standard or qcs")
      ->check(CLI::IsMember({"standard", "qcs"}));
  quant->add_option("--in", q_in, "input .bqt tensor")->required();
  quant->add_option("--out", q_out, "output .bqc code path")->required();
  quant->add_option("--m", q_m, "measurement count (qcs)");
  quant->add_option("--m-ratio", q_ratio, "m as a multiple of p (qcs)");
  quant->add_option("--dither", q_dither, "none, uniform01 or scaled:<d>");
  quant->add_flag("--normalize", q_normalize, "scale the ensemble by 1/sqrt(m)");
  quant->add_option("--seed", q_seed, "ensemble seed (qcs)");
  quant->callback([&] {
    const Tensor w = load_tensor(q_in);
    if (q_scheme == "standard") {
      save_layer(quantize_layer(w, Scheme::standard), q_out);
      std::cout << "wrote " << q_out << " (p=" << w.size() << ")\n";
      return;
    }
    if ((q_m > 0) == (q_ratio > 0.0)) {
      throw config_error("quantize: give exactly one of --m or --m-ratio");
    }
    const int64_t p = static_cast<int64_t>(w.size());
    const int64_t m =
        q_m > 0 ? q_m
                : std::max<int64_t>(
                      1, std::llround(q_ratio * static_cast<double>(p)));
    DitherSpec dither;
    try {
      dither = dither_from_string(q_dither);
    } catch (const domain_error& e) {
      throw config_error(std::string("--dither: ") + e.what());
    }
    const SensingEnsemble ens =
        gen_ensemble(m, p, dither, q_normalize, Seed{q_seed, 0});
    save_layer(quantize_layer(w, Scheme::qcs, &ens), q_out);
    std::cout << "wrote " << q_out << " (m=" << m << ", p=" << p << ")\n";
  });

  // bench subcommands
  BenchFlags conv_f, recon_f, rip_f, tp_f;

  auto* conv = app.add_subcommand(
      "conv-bench", "convolution approximation error sweep");
  add_common_flags(conv, conv_f);
  conv->add_option("--input-h", conv_f.v.input_h, "input height");
  conv->add_option("--input-w", conv_f.v.input_w, "input width");
  conv->add_option("--input-c", conv_f.v.input_c, "input channels");
  conv->add_option("--kernel-h", conv_f.v.kernel_h, "kernel height");
  conv->add_option("--kernel-w", conv_f.v.kernel_w, "kernel width");
  conv->add_option("--stride", conv_f.v.stride, "stride");
  conv->add_option("--padding", conv_f.v.padding, "zero padding");
  conv->add_option("--ratios", conv_f.v.ratios, "m/p sweep values")
      ->delimiter(',');
  conv->add_option("--dither", conv_f.dither,
                   "none, uniform01 or scaled:<d>");
  conv->add_flag("--normalize", conv_f.v.normalize,
                 "scale ensembles by 1/sqrt(m)");
  conv->add_option("--scale-mode", conv_f.v.scale_mode,
                   "weight_only, dual or both")
      ->check(CLI::IsMember({"weight_only", "dual", "both"}));
  conv->add_option("--estimator", conv_f.v.estimator,
                   "raw, debiased or both")
      ->check(CLI::IsMember({"raw", "debiased", "both"}));
  conv->callback(
      [&] { rc = run_bench(effective_config(conv, conv_f, "conv-bench")); });

  auto* recon = app.add_subcommand(
      "recon-bench", "one-bit reconstruction fidelity sweep");
  add_common_flags(recon, recon_f);
  recon->add_option("--p", recon_f.v.p, "signal dimension");
  recon->add_option("--ratios", recon_f.v.ratios, "m/p sweep values")
      ->delimiter(',');
  recon->add_option("--families", recon_f.v.families, "dense and/or sparse")
      ->delimiter(',');
  recon->add_option("--sparse-k", recon_f.v.sparse_k,
                    "sparsity of the sparse family");
  recon->callback([&] {
    rc = run_bench(effective_config(recon, recon_f, "recon-bench"));
  });

  auto* rip = app.add_subcommand(
      "rip-check", "empirical restricted-isometry probe");
  add_common_flags(rip, rip_f);
  rip->add_option("--p", rip_f.v.p, "signal dimension");
  rip->add_option("--m", rip_f.v.rip_m, "measurement counts")->delimiter(',');
  rip->add_option("--k", rip_f.v.rip_k, "probe sparsities")->delimiter(',');
  rip->add_option("--trials", rip_f.v.probe_trials,
                  "random probes per ensemble");
  rip->callback(
      [&] { rc = run_bench(effective_config(rip, rip_f, "rip-check")); });

  auto* tp = app.add_subcommand(
      "throughput", "packed binary dot vs unpacked float dot timing");
  add_common_flags(tp, tp_f);
  tp->add_option("--sizes", tp_f.v.sizes, "vector lengths")->delimiter(',');
  tp->add_option("--reps", tp_f.v.reps, "timed repetitions per size");
  tp->add_option("--warmup", tp_f.v.warmup, "warmup runs per size");
  tp->callback(
      [&] { rc = run_bench(effective_config(tp, tp_f, "throughput")); });

  // report
  std::string rep_in, rep_out, rep_format;
  bool rep_verify = false;
  auto* rep = app.add_subcommand(
      "report", "verify, re-summarize or convert an existing report");
  rep->add_option("--in", rep_in, "existing report (csv or json)")
      ->required();
  rep->add_option("--out", rep_out, "rewrite with a recomputed summary");
  rep->add_option("--format", rep_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  rep->add_flag("--verify-report", rep_verify,
                "check the stored summary against the rows");
  rep->callback([&] {
    ExperimentReport report = load_report(rep_in);
    if (rep_verify) {
      std::string why;
      if (!verify_summary(report, &why)) {
        std::cerr << "report verification failed: " << why << "\n";
        rc = 5;
        return;
      }
      std::cout << "report ok (" << report.rows.size() << " rows)\n";
    }
    if (!rep_out.empty()) {
      report.summary = summarize(report.rows);
      std::string format = rep_format;
      if (format.empty()) {
        format = std::filesystem::path(rep_out).extension() == ".json"
                     ? "json"
                     : "csv";
      }
      write_report(report, rep_out, format);
      std::cout << "wrote " << rep_out << " (" << report.rows.size()
                << " rows)\n";
    } else if (!rep_verify) {
      std::cout << to_csv(report);
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "error: " << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const format_error& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 4;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

}  // namespace bqcs
