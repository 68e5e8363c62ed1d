#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bqcs/sensing.hpp"

namespace bqcs {

/// Full description of one harness run. Parsed from a JSON config file
/// and/or CLI flags (flags win); serialized canonically into every report.
struct ExperimentConfig {
  std::string kind;  // conv-bench | recon-bench | rip-check | throughput
  uint64_t seed = 1;
  int64_t trials = 1;  // seeds per sweep point
  std::string out;
  std::string format = "csv";  // csv | json
  bool verify_report = false;

  // conv-bench
  int64_t input_h = 7, input_w = 7, input_c = 1;
  int64_t kernel_h = 3, kernel_w = 3;
  int64_t stride = 1, padding = 0;
  std::vector<double> ratios;  // m/p sweep; kind-dependent default
  DitherSpec dither = DitherSpec::uniform01();
  bool normalize = false;
  std::string scale_mode = "both";  // weight_only | dual | both
  std::string estimator = "both";   // raw | debiased | both

  // recon-bench
  int64_t p = 32;
  std::vector<std::string> families = {"dense"};  // dense | sparse
  int64_t sparse_k = 4;

  // rip-check
  std::vector<int64_t> rip_m = {256};
  std::vector<int64_t> rip_k = {8};
  int64_t probe_trials = 200;

  // throughput
  std::vector<int64_t> sizes = {65536};
  int64_t reps = 10;
  int64_t warmup = 3;
};

/// Applies kind-dependent defaults (e.g. the ratio sweep) and checks every
/// field, throwing config_error with the field path on the first violation.
void validate_config(ExperimentConfig& cfg);

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical single-line JSON echo (sorted keys, defaults materialized).
std::string config_to_json(const ExperimentConfig& cfg);

}  // namespace bqcs
