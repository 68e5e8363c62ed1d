#include "bqcs/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace bqcs {

using nlohmann::json;

std::string to_string(Scheme s) {
  return s == Scheme::standard ? "standard" : "qcs";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "standard") return Scheme::standard;
  if (s == "qcs") return Scheme::qcs;
  throw domain_error("unknown scheme: " + s + " (expected standard or qcs)");
}

BitCode sign_quantize(const Tensor& w) {
  if (w.empty()) throw shape_error("sign_quantize: empty tensor");
  BitCode code(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (std::isnan(w[i])) {
      throw domain_error("sign_quantize: NaN at index " + std::to_string(i));
    }
    if (w[i] >= 0.0) code.set_bit(i, true);
  }
  return code;
}

double optimal_scale(const Tensor& w) {
  if (w.empty()) throw shape_error("optimal_scale: empty tensor");
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += std::abs(w[i]);
  return s / static_cast<double>(w.size());
}

BitCode qcs_quantize(const Tensor& w, const SensingEnsemble& ens) {
  if (w.empty() || static_cast<int64_t>(w.size()) != ens.p()) {
    throw shape_error("qcs_quantize: vector length " + std::to_string(w.size()) +
                      " does not match ensemble p=" + std::to_string(ens.p()));
  }
  const double* phi = ens.phi().data();
  const double* x = w.data();
  const auto p = static_cast<std::size_t>(ens.p());
  const auto m = static_cast<std::size_t>(ens.m());
  BitCode code(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = phi + i * p;
    double acc = 0.0;
    for (std::size_t j = 0; j < p; ++j) acc += row[j] * x[j];
    acc += ens.dither()[i];
    if (std::isnan(acc)) {
      throw domain_error("qcs_quantize: NaN measurement at row " +
                         std::to_string(i));
    }
    if (acc >= 0.0) code.set_bit(i, true);
  }
  return code;
}

QuantizedLayer quantize_layer(const Tensor& w, Scheme scheme,
                              const SensingEnsemble* ens) {
  QuantizedLayer layer;
  layer.scheme = scheme;
  layer.norm = l2_norm(w);
  if (scheme == Scheme::standard) {
    layer.code = sign_quantize(w);
    layer.alpha = optimal_scale(w);
  } else {
    if (ens == nullptr) {
      throw domain_error("quantize_layer: qcs scheme requires an ensemble");
    }
    layer.code = qcs_quantize(w, *ens);
    layer.ensemble_ref = ens->ref();
  }
  return layer;
}

namespace {

json seed_to_json(const Seed& s) {
  return json{{"value", s.value}, {"stream", s.stream_id}};
}

Seed seed_from_json(const json& j) {
  return Seed{j.at("value").get<uint64_t>(), j.at("stream").get<uint64_t>()};
}

json ref_to_json(const EnsembleRef& r) {
  json j{{"kind", r.kind},
         {"m", r.m},
         {"p", r.p},
         {"dither", to_string(r.dither)},
         {"normalize", r.normalize},
         {"seed", seed_to_json(r.seed)}};
  if (r.kind == "identity") j["scale"] = r.scale;
  return j;
}

EnsembleRef ref_from_json(const json& j) {
  EnsembleRef r;
  r.kind = j.at("kind").get<std::string>();
  r.m = j.at("m").get<int64_t>();
  r.p = j.at("p").get<int64_t>();
  r.dither = dither_from_string(j.at("dither").get<std::string>());
  r.normalize = j.at("normalize").get<bool>();
  r.seed = seed_from_json(j.at("seed"));
  r.scale = j.value("scale", 1.0);
  return r;
}

}  // namespace

void save_layer(const QuantizedLayer& layer,
                const std::filesystem::path& code_path) {
  save_code(layer.code, code_path);
  json j{{"scheme", to_string(layer.scheme)}, {"norm", layer.norm}};
  if (layer.scheme == Scheme::standard) j["alpha"] = layer.alpha;
  if (layer.ensemble_ref) j["ensemble_ref"] = ref_to_json(*layer.ensemble_ref);
  std::filesystem::path sidecar = code_path;
  sidecar += ".json";
  std::ofstream out(sidecar, std::ios::trunc);
  if (!out) throw io_error("cannot open for writing: " + sidecar.string());
  out << j.dump(2) << "\n";
  if (!out) throw io_error("write failed: " + sidecar.string());
}

QuantizedLayer load_layer(const std::filesystem::path& code_path) {
  QuantizedLayer layer;
  layer.code = load_code(code_path);
  std::filesystem::path sidecar = code_path;
  sidecar += ".json";
  std::ifstream in(sidecar);
  if (!in) throw io_error("cannot open for reading: " + sidecar.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw format_error("bad layer sidecar " + sidecar.string() + ": " +
                       e.what());
  }
  try {
    layer.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    layer.norm = j.at("norm").get<double>();
    layer.alpha = j.value("alpha", 0.0);
    if (j.contains("ensemble_ref")) {
      layer.ensemble_ref = ref_from_json(j.at("ensemble_ref"));
    }
  } catch (const json::exception& e) {
    throw format_error("bad layer sidecar " + sidecar.string() + ": " +
                       e.what());
  }
  if (layer.scheme == Scheme::qcs && !layer.ensemble_ref) {
    throw format_error("qcs layer sidecar lacks ensemble_ref: " +
                       sidecar.string());
  }
  return layer;
}

double est_similarity(const BitCode& a, const BitCode& b) {
  return static_cast<double>(binary_dot(a, b)) /
         static_cast<double>(a.length());
}

double est_inner(const BitCode& a, const BitCode& b, double norm_a,
                 double norm_b) {
  if (norm_a < 0.0 || norm_b < 0.0) {
    throw domain_error("est_inner: norms must be >= 0");
  }
  const double s = est_similarity(a, b);
  const double theta =
      std::clamp(1.5707963267948966 * (1.0 - s), 0.0, 3.14159265358979323846);
  return norm_a * norm_b * std::cos(theta);
}

}  // namespace bqcs
