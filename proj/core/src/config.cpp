#include "bqcs/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bqcs/errors.hpp"

namespace bqcs {

using nlohmann::json;

namespace {

const std::set<std::string> kKinds = {"conv-bench", "recon-bench", "rip-check",
                                      "throughput"};

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw config_error("config." + path + ": " + what);
}

template <typename T>
void read_field(const json& j, const char* name, T& into) {
  if (!j.contains(name)) return;
  try {
    into = j.at(name).get<T>();
  } catch (const json::exception&) {
    throw config_error("config." + std::string(name) + ": wrong type");
  }
}

}  // namespace

void validate_config(ExperimentConfig& cfg) {
  require(kKinds.count(cfg.kind) == 1, "kind",
          "must be one of conv-bench, recon-bench, rip-check, throughput (got '" +
              cfg.kind + "')");
  require(cfg.trials >= 1, "trials", "must be >= 1");
  require(cfg.format == "csv" || cfg.format == "json", "format",
          "must be csv or json");
  require(cfg.scale_mode == "weight_only" || cfg.scale_mode == "dual" ||
              cfg.scale_mode == "both",
          "scale_mode", "must be weight_only, dual or both");
  require(cfg.estimator == "raw" || cfg.estimator == "debiased" ||
              cfg.estimator == "both",
          "estimator", "must be raw, debiased or both");

  if (cfg.ratios.empty()) {
    // Default sweeps: wide for conv-bench, recovery-oriented for recon-bench.
    if (cfg.kind == "recon-bench") {
      cfg.ratios = {1, 4, 16, 64};
    } else {
      cfg.ratios = {0.25, 0.5, 1, 2, 4, 8, 16};
    }
  }
  for (std::size_t i = 0; i < cfg.ratios.size(); ++i) {
    require(cfg.ratios[i] > 0.0, "ratios[" + std::to_string(i) + "]",
            "must be > 0");
  }

  require(cfg.input_h >= 1 && cfg.input_w >= 1 && cfg.input_c >= 1, "input",
          "dims must be >= 1");
  require(cfg.kernel_h >= 1 && cfg.kernel_w >= 1, "kernel",
          "dims must be >= 1");
  require(cfg.stride >= 1, "stride", "must be >= 1");
  require(cfg.padding >= 0, "padding", "must be >= 0");

  require(cfg.p >= 1, "p", "must be >= 1");
  require(!cfg.families.empty(), "families", "must not be empty");
  for (std::size_t i = 0; i < cfg.families.size(); ++i) {
    require(cfg.families[i] == "dense" || cfg.families[i] == "sparse",
            "families[" + std::to_string(i) + "]", "must be dense or sparse");
  }
  require(cfg.sparse_k >= 1 && cfg.sparse_k <= cfg.p, "sparse_k",
          "must be in [1, p]");

  require(!cfg.rip_m.empty(), "rip_m", "must not be empty");
  for (std::size_t i = 0; i < cfg.rip_m.size(); ++i) {
    require(cfg.rip_m[i] >= 1, "rip_m[" + std::to_string(i) + "]",
            "must be >= 1");
  }
  require(!cfg.rip_k.empty(), "rip_k", "must not be empty");
  for (std::size_t i = 0; i < cfg.rip_k.size(); ++i) {
    require(cfg.rip_k[i] >= 1 && cfg.rip_k[i] <= cfg.p,
            "rip_k[" + std::to_string(i) + "]", "must be in [1, p]");
  }
  require(cfg.probe_trials >= 1, "probe_trials", "must be >= 1");

  require(!cfg.sizes.empty(), "sizes", "must not be empty");
  for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
    require(cfg.sizes[i] >= 1, "sizes[" + std::to_string(i) + "]",
            "must be >= 1");
  }
  require(cfg.reps >= 1, "reps", "must be >= 1");
  require(cfg.warmup >= 0, "warmup", "must be >= 0");
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config: top level must be an object");

  ExperimentConfig cfg;
  read_field(j, "kind", cfg.kind);
  read_field(j, "seed", cfg.seed);
  read_field(j, "trials", cfg.trials);
  read_field(j, "out", cfg.out);
  read_field(j, "format", cfg.format);
  read_field(j, "verify_report", cfg.verify_report);
  read_field(j, "input_h", cfg.input_h);
  read_field(j, "input_w", cfg.input_w);
  read_field(j, "input_c", cfg.input_c);
  read_field(j, "kernel_h", cfg.kernel_h);
  read_field(j, "kernel_w", cfg.kernel_w);
  read_field(j, "stride", cfg.stride);
  read_field(j, "padding", cfg.padding);
  read_field(j, "ratios", cfg.ratios);
  if (j.contains("dither")) {
    std::string d;
    read_field(j, "dither", d);
    try {
      cfg.dither = dither_from_string(d);
    } catch (const domain_error& e) {
      throw config_error(std::string("config.dither: ") + e.what());
    }
  }
  read_field(j, "normalize", cfg.normalize);
  read_field(j, "scale_mode", cfg.scale_mode);
  read_field(j, "estimator", cfg.estimator);
  read_field(j, "p", cfg.p);
  read_field(j, "families", cfg.families);
  read_field(j, "sparse_k", cfg.sparse_k);
  read_field(j, "rip_m", cfg.rip_m);
  read_field(j, "rip_k", cfg.rip_k);
  read_field(j, "probe_trials", cfg.probe_trials);
  read_field(j, "sizes", cfg.sizes);
  read_field(j, "reps", cfg.reps);
  read_field(j, "warmup", cfg.warmup);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["kind"] = cfg.kind;
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["format"] = cfg.format;
  if (cfg.kind == "conv-bench") {
    j["input_h"] = cfg.input_h;
    j["input_w"] = cfg.input_w;
    j["input_c"] = cfg.input_c;
    j["kernel_h"] = cfg.kernel_h;
    j["kernel_w"] = cfg.kernel_w;
    j["stride"] = cfg.stride;
    j["padding"] = cfg.padding;
    j["ratios"] = cfg.ratios;
    j["dither"] = to_string(cfg.dither);
    j["normalize"] = cfg.normalize;
    j["scale_mode"] = cfg.scale_mode;
    j["estimator"] = cfg.estimator;
  } else if (cfg.kind == "recon-bench") {
    j["p"] = cfg.p;
    j["ratios"] = cfg.ratios;
    j["families"] = cfg.families;
    j["sparse_k"] = cfg.sparse_k;
  } else if (cfg.kind == "rip-check") {
    j["p"] = cfg.p;
    j["rip_m"] = cfg.rip_m;
    j["rip_k"] = cfg.rip_k;
    j["probe_trials"] = cfg.probe_trials;
  } else if (cfg.kind == "throughput") {
    j["sizes"] = cfg.sizes;
    j["reps"] = cfg.reps;
    j["warmup"] = cfg.warmup;
  }
  return j.dump();
}

}  // namespace bqcs
